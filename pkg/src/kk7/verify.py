"""Certification of closed-form solutions.

symbolic_residual substitutes an entry into the PDE, rewrites the residual as
a rational function of zeta, and checks that every collected coefficient
vanishes (modulo the entry's parameter constraints, for the d-family).
numeric_residual is the independent high-precision check: it evaluates the
residual at pseudo-random sample points with mpmath, guarding against
singularities.  periodic_continue performs the mu -> i*mu continuation and
rewrites the result in a manifestly real form; equivalence_check decides
equality of two closed forms through the exponential normal form.
"""

from __future__ import annotations

import random
from typing import Optional

import mpmath as mp

from .catalog import ClosedFormSolution, catalog
from .expressions import Expr, FnAtom, InvAtom, SymAtom
from .model import PdeCoefficients, build_pde, substitute_into_pde
from .normalform import NormalFormError, rational_form
from .polynomials import MultiPoly, poly_reduce
from .rationals import GaussianRational, I, ONE, ZERO

_TRIG = ("tan", "cot", "sin", "cos")
_HYPER = ("tanh", "coth", "sinh", "cosh")


def _poly_to_expr(p: MultiPoly) -> Expr:
    out = Expr.const(0)
    for exp, c in p.sorted_terms():
        term = Expr.const(c)
        for v, e in zip(p.vars, exp):
            if e:
                term = term * Expr.sym(v) ** e
        out = out + term
    return out


def _residual_phase(e: Expr) -> Expr:
    """Common phase for normal-forming a residual: the first function atom's
    argument, with an i-carrier when the atom is trigonometric."""
    atoms = sorted((a for a in e.atoms() if isinstance(a, FnAtom)),
                   key=lambda a: a.key)
    if not atoms:
        raise NormalFormError("expression has no wave atoms")
    a = atoms[0]
    return a.arg * I if a.fname in _TRIG else a.arg


def symbolic_residual(sol: ClosedFormSolution, coeffs: PdeCoefficients) -> Expr:
    """PDE residual of the entry, certified through the zeta normal form.

    Returns the canonical zero expression when the entry solves the PDE
    exactly (for constrained entries: modulo the constraint ideal);
    otherwise an expression equivalent to the cleared residual numerator.
    """
    residual = substitute_into_pde(build_pde(coeffs), sol.expr)
    if residual.is_zero():
        return residual
    form = rational_form(residual, _residual_phase(residual))
    mods = [c for c in sol.constraints]
    leftover = Expr.const(0)
    zeta = Expr.fn("exp", _residual_phase(residual))
    for power in sorted(form.num.coeffs):
        coeff = form.num.coeffs[power]
        if mods:
            coeff = poly_reduce(coeff, mods)
        if not coeff.is_zero():
            leftover = leftover + _poly_to_expr(coeff) * zeta ** power
    return leftover


def _mp_value(q: GaussianRational):
    re = mp.mpf(int(q.re.numerator)) / int(q.re.denominator)
    if q.is_real():
        return re
    return mp.mpc(re, mp.mpf(int(q.im.numerator)) / int(q.im.denominator))


def numeric_residual(sol: ClosedFormSolution, coeffs: PdeCoefficients,
                     params: Optional[dict] = None, samples: int = 50,
                     precision: int = 50, seed: int = 20250809,
                     box: float = 5.0, guard: float = 1e-3):
    """Max |residual| over pseudo-random (x, t) samples at high precision.

    params are exact parameter values (default: the entry's sample bindings);
    points where any denominator quantity falls within the guard are
    rejected and redrawn.  Evaluation runs at twice the requested precision
    so the reported maximum is trustworthy at the requested one.
    """
    if precision < 30:
        raise ValueError("precision must be at least 30 digits")
    values = dict(sol.sample)
    if params:
        values.update(params)
    values.setdefault("delta", ZERO)
    u_inst = sol.expr.subs({k: Expr.const(v) for k, v in values.items()})
    residual = substitute_into_pde(build_pde(coeffs), u_inst)
    guards = list(residual.denominator_guards())
    rng = random.Random(seed)
    accepted = 0
    worst = mp.mpf(0)
    with mp.workdps(2 * precision):
        attempts = 0
        while accepted < samples:
            attempts += 1
            if attempts > 200 * samples:
                raise RuntimeError("singularity guard rejected every sample")
            env = {"x": mp.mpf(rng.uniform(-box, box)),
                   "t": mp.mpf(rng.uniform(-box, box))}
            ok = True
            for kind, expr in guards:
                val = expr.eval_mp(env, mp)
                if kind != "inv":
                    val = getattr(mp, kind)(val)
                if abs(val) <= guard:
                    ok = False
                    break
            if not ok:
                continue
            accepted += 1
            worst = max(worst, abs(residual.eval_mp(env, mp)))
    with mp.workdps(precision):
        return +worst


# -- mu -> i*mu continuation ---------------------------------------------------

_CONTINUE_RULES = {
    "tanh": ("tan", I), "coth": ("cot", -I),
    "sinh": ("sin", I), "cosh": ("cos", ONE),
    "tan": ("tanh", I), "cot": ("coth", -I),
    "sin": ("sinh", I), "cos": ("cosh", ONE),
}


def _realify(e: Expr) -> Expr:
    """Rewrite atoms with purely imaginary arguments to real-argument form."""
    def mapper(atom):
        if isinstance(atom, FnAtom):
            arg = atom.arg
            if not arg.is_zero() and all(c.re == 0 for c in arg.terms.values()):
                fname, unit = _CONTINUE_RULES[atom.fname] if atom.fname in _CONTINUE_RULES \
                    else (None, None)
                if fname is not None:
                    return Expr.fn(fname, arg * (-I)) * unit
            return Expr.fn(atom.fname, arg)
        if isinstance(atom, InvAtom):
            return _realify(atom.base).inverse()
        return Expr.from_atom(atom)
    return e.map_atoms(mapper)


def _is_real_expr(e: Expr) -> bool:
    if not all(c.is_real() for c in e.terms.values()):
        return False
    for atom in e.atoms():
        if isinstance(atom, FnAtom):
            if not all(c.is_real() for c in atom.arg.terms.values()):
                return False
        elif isinstance(atom, InvAtom):
            if not all(c.is_real() for c in atom.base.terms.values()):
                return False
    return True


def periodic_continue(sol: ClosedFormSolution) -> ClosedFormSolution:
    """The mu -> i*mu continuation of a hyperbolic entry, in real form.

    For the constrained d-family the symbolic shape parameter c picks up the
    compensating c -> i*c substitution, mapping the constraint
    c^2 - d^2 + 1 = 0 to c^2 + d^2 - 1 = 0.  The result is matched against
    the catalog; an unmatched (but real and exact) continuation is returned
    with provenance "derived-by-pipeline".
    """
    fnames = {a.fname for a in sol.expr.atoms() if isinstance(a, FnAtom)}
    if fnames & set(_TRIG) or "exp" in fnames:
        raise ValueError("periodic continuation applies to hyperbolic entries")

    imu = Expr.const(I) * Expr.sym("mu")
    continued = _realify(sol.expr.subs({"mu": imu}))
    constraints = list(sol.constraints)
    sample = dict(sol.sample)
    if not _is_real_expr(continued):
        if constraints and any("c" in c.variables_used() for c in constraints):
            continued = _realify(
                sol.expr.subs({"mu": imu, "c": Expr.const(I) * Expr.sym("c")}))
            constraints = [c.substitute({"c": MultiPoly.var("c") * I})
                           .content_normalize() for c in constraints]
            if not _is_real_expr(continued):
                raise ValueError("continuation did not produce a real form")
            # move the sample onto the transformed constraint
            sample = {k: v for k, v in sample.items() if k not in ("c", "d")}
        else:
            raise ValueError("continuation did not produce a real form")

    speed = sol.speed.substitute({"mu": MultiPoly.var("mu") * I})
    for cand in catalog():
        if cand.expr == continued and tuple(cand.constraints) == tuple(constraints):
            return cand
    return ClosedFormSolution(
        id=sol.id + "-continued", family=sol.family, expr=continued,
        kind="periodic", params=sol.params, speed=speed,
        speed_symbol=sol.speed_symbol, ansatz_bindings={},
        constraints=tuple(constraints), sample=sample,
        provenance="derived-by-pipeline")


def equivalence_check(s1: ClosedFormSolution, s2: ClosedFormSolution,
                      identification: Optional[dict] = None) -> bool:
    """True iff s1 (under the identification) and s2 agree as closed forms,
    decided through the exponential normal form."""
    e1 = s1.expr.subs(identification or {})
    diff = e1 - s2.expr
    if diff.is_zero():
        return True
    phase = _residual_phase(diff)
    form = rational_form(diff, phase)
    mods = list(s1.constraints) + list(s2.constraints)
    for coeff in form.num.coeffs.values():
        if mods:
            coeff = poly_reduce(coeff, mods)
        if not coeff.is_zero():
            return False
    return True

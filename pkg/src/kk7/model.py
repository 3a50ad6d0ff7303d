"""The seventh-order KdV family: presets, PDE residual, traveling-wave ODE,
and the mass-conservation flux when one exists.

The PDE residual is an expression in "jet" symbols u, ut, ux, uxx, u3x, ...,
u7x; an ansatz is substituted by binding each jet symbol to the corresponding
exact derivative of a closed form.  Internally the seven family coefficients
are named a1..a7: the conventional letters a..g collide with the ansatz
unknowns, and the letter c additionally collides with the wave speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .expressions import Expr, SymAtom
from .rationals import GaussianRational, ONE, ZERO, parse_rational

#: x-derivative jets in order; ut is the lone t-jet
X_JETS = ("u", "ux", "uxx", "u3x", "u4x", "u5x", "u6x", "u7x", "u8x")
V_JETS = ("v", "v1", "v2", "v3", "v4", "v5", "v6", "v7")

PRESETS = {
    "ski7": (252, 63, 378, 126, 63, 42, 21),
    "lax7": (140, 70, 280, 70, 70, 42, 14),
    "kk7": (2016, 630, 2268, 504, 252, 147, 42),
}


@dataclass(frozen=True)
class PdeCoefficients:
    """The seven coefficients of u_t + a1 u^3 u_x + ... + a7 u u_5x + u_7x = 0."""

    a1: GaussianRational
    a2: GaussianRational
    a3: GaussianRational
    a4: GaussianRational
    a5: GaussianRational
    a6: GaussianRational
    a7: GaussianRational

    @staticmethod
    def of(*values) -> "PdeCoefficients":
        if len(values) != 7:
            raise ValueError("exactly seven coefficients required")
        return PdeCoefficients(*(GaussianRational.coerce(v) for v in values))

    @staticmethod
    def parse(text: str) -> "PdeCoefficients":
        """Seven comma-separated exact rationals, e.g. '2016,630,...,42'."""
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 7:
            raise ValueError("expected seven comma-separated rationals")
        return PdeCoefficients.of(*(parse_rational(s) for s in parts))

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a5, self.a6, self.a7)

    def __str__(self):
        return ",".join(str(v) for v in self.as_tuple())


def preset(name: str) -> PdeCoefficients:
    """Named coefficient sets: ski7, lax7, kk7."""
    try:
        return PdeCoefficients.of(*PRESETS[name])
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None


def build_pde(coeffs: PdeCoefficients) -> Expr:
    """PDE residual in jet symbols (set to zero)."""
    s = Expr.sym
    u, ux, uxx, u3x, u4x, u5x, u7x = (s(n) for n in
                                      ("u", "ux", "uxx", "u3x", "u4x", "u5x", "u7x"))
    return (s("ut")
            + coeffs.a1 * u ** 3 * ux
            + coeffs.a2 * ux ** 3
            + coeffs.a3 * u * ux * uxx
            + coeffs.a4 * u ** 2 * u3x
            + coeffs.a5 * uxx * u3x
            + coeffs.a6 * ux * u4x
            + coeffs.a7 * u * u5x
            + u7x)


@dataclass(frozen=True)
class TravelingWaveOde:
    """Seventh-order ODE residual in v(xi) jets, with speed symbol lam."""

    residual: Expr
    speed: str = "lam"

    def substitute_profile(self, profile: Expr, var: str = "xi") -> Expr:
        """Bind v and its xi-derivatives to an explicit profile expression."""
        bindings = {"v": profile}
        d = profile
        for name in V_JETS[1:]:
            d = d.diff(var)
            bindings[name] = d
        return self.residual.subs(bindings)


def reduce_to_traveling_ode(pde: Expr) -> TravelingWaveOde:
    """Apply u(x,t) = v(xi), xi = x + lam*t: ut -> lam*v', u_nx -> v^(n)."""
    lam = Expr.sym("lam")
    bindings = {"ut": lam * Expr.sym("v1")}
    for jet, v in zip(X_JETS, V_JETS):
        bindings[jet] = Expr.sym(v)
    return TravelingWaveOde(pde.subs(bindings))


def substitute_into_pde(pde: Expr, u_expr: Expr) -> Expr:
    """Bind the jet symbols of a PDE residual to derivatives of u_expr(x,t)."""
    bindings = {"ut": u_expr.diff("t")}
    d = u_expr
    for name in X_JETS:
        bindings[name] = d
        d = d.diff("x")
    return pde.subs(bindings)


def total_x_derivative(e: Expr) -> Expr:
    """d/dx on a jet-symbol expression: u -> ux -> uxx -> ... -> u8x."""
    succ = {a: b for a, b in zip(X_JETS, X_JETS[1:])}
    out = Expr({})
    for mono, c in e.terms.items():
        for i, (atom, k) in enumerate(mono):
            if not isinstance(atom, SymAtom) or atom.name not in succ:
                continue
            if k == 1:
                rest = mono[:i] + mono[i + 1:]
            else:
                rest = mono[:i] + ((atom, k - 1),) + mono[i + 1:]
            out = out + Expr({rest: c * k}) * Expr.sym(succ[atom.name])
    return out


def flux_decompose(coeffs: PdeCoefficients) -> Optional[Expr]:
    """Flux F with u_t + dF/dx = 0, when the equation is in conservation form.

    Integration by parts reduces every term of the family to an exact
    x-derivative plus a multiple of ux^3; the leftover ux^3 coefficient
    a2 - a3/2 + a4 is the obstruction, and no flux exists unless it vanishes
    (ux^3 itself is not a total derivative in this differential-polynomial
    class).
    """
    obstruction = coeffs.a2 - coeffs.a3 * GaussianRational.coerce("1/2") + coeffs.a4
    if not obstruction.is_zero():
        return None
    s = Expr.sym
    u, ux, uxx, u3x, u4x, u6x = (s(n) for n in ("u", "ux", "uxx", "u3x", "u4x", "u6x"))
    quarter = GaussianRational.coerce("1/4")
    half = GaussianRational.coerce("1/2")
    return (coeffs.a1 * quarter * u ** 4
            + coeffs.a3 * half * u * ux ** 2
            + coeffs.a4 * (u ** 2 * uxx - u * ux ** 2)
            + coeffs.a5 * half * uxx ** 2
            + coeffs.a6 * (ux * u3x - half * uxx ** 2)
            + coeffs.a7 * (u * u4x - ux * u3x + half * uxx ** 2)
            + u6x)

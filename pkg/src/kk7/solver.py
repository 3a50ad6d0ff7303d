"""Exact solution of the coefficient-matching systems over Q(i).

The derived systems are weighted-homogeneous, so the scale symbol (k or mu)
is fixed to 1 before solving and reintroduced afterwards by weight_rescale.
Saturation divides out the guaranteed degenerate factors (the Cole-Hopf
A*k^2, amplitude and frequency powers).  The normalized system is then solved
by recursive triangular splitting: Groebner bases expose univariate
polynomials whose Q(i) roots are extracted exactly -- linear and quadratic
cases in closed form, higher degrees through the Gaussian rational-root
theorem with divisor enumeration over Z[i] -- and each root is substituted
back.  Branches whose triangular polynomial has no Q(i) root are reported as
unresolved relations, never dropped.  Positive-dimensional components come
back as families: named free parameters, solved bindings, and algebraic
constraints such as c^2 - d^2 + 1 = 0.

"Not all amplitudes zero" nondegeneracy is handled by support enumeration:
one subcase per nonempty amplitude support, amplitudes outside the support
set to zero and those inside required nonzero.  The union over subcases is
exactly the solution set off the degenerate locus, and every subcase system
is much smaller than the whole.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence, Union

from .polynomials import (MultiPoly, divide_exact, merge_vars, order_key,
                          poly_reduce, var_key)
from .rationals import GaussianRational, ONE, ZERO, rational
from .systems import PolySystem, poly_sort_key


class SolverBoundExceeded(RuntimeError):
    """Buchberger exceeded the configured total-degree bound."""


DEFAULT_DEGREE_BOUND = 40


# ---------------------------------------------------------------------------
# exact square roots and Gaussian-integer arithmetic
# ---------------------------------------------------------------------------


def _exact_isqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q):
    """Exact nonnegative square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    rn = _exact_isqrt(int(q.numerator))
    rd = _exact_isqrt(int(q.denominator))
    if rn is None or rd is None:
        return None
    return rational(rn, rd)


def qi_sqrt(z: GaussianRational) -> Optional[GaussianRational]:
    """An exact square root of z in Q(i), or None when none exists."""
    if z.is_zero():
        return ZERO
    if not z.im:
        if z.re > 0:
            s = rational_sqrt(z.re)
            return None if s is None else GaussianRational(s)
        s = rational_sqrt(-z.re)
        return None if s is None else GaussianRational(0, s)
    n = rational_sqrt(z.re * z.re + z.im * z.im)
    if n is None:
        return None
    x = rational_sqrt((z.re + n) / 2)
    if x is None or not x:
        return None
    y = z.im / (2 * x)
    root = GaussianRational(x, y)
    return root if root * root == z else None


# Gaussian integers as plain (x, y) int pairs.


def _gnorm(a) -> int:
    return a[0] * a[0] + a[1] * a[1]


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gdiv_exact(a, b):
    n = _gnorm(b)
    x = a[0] * b[0] + a[1] * b[1]
    y = a[1] * b[0] - a[0] * b[1]
    if x % n or y % n:
        return None
    return (x // n, y // n)


def _ggcd(a, b):
    while b != (0, 0):
        n = _gnorm(b)
        qx = round(Fraction(a[0] * b[0] + a[1] * b[1], n))
        qy = round(Fraction(a[1] * b[0] - a[0] * b[1], n))
        a, b = b, (a[0] - (qx * b[0] - qy * b[1]),
                   a[1] - (qx * b[1] + qy * b[0]))
    return a


def _sqrt_minus_one_mod(p: int) -> int:
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return pow(n, (p - 1) // 4, p)
    raise ArithmeticError(f"no sqrt(-1) mod {p}")


def _factor_int(n: int) -> dict:
    n = abs(n)
    out: dict = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    p = 3
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def gaussian_prime_factors(z) -> list:
    """Prime factorization of a nonzero Gaussian integer, up to units."""
    factors = []
    rest = z
    for p in sorted(_factor_int(_gnorm(z))):
        if p == 2:
            primes = [(1, 1)]
        elif p % 4 == 3:
            primes = [(p, 0)]
        else:
            x = _sqrt_minus_one_mod(p)
            pi = _ggcd((p, 0), (x, 1))
            primes = [pi, (pi[0], -pi[1])]
        for pi in primes:
            e = 0
            while True:
                q = _gdiv_exact(rest, pi)
                if q is None:
                    break
                rest = q
                e += 1
            if e:
                factors.append((pi, e))
    return factors


def gaussian_divisors(z, cap: int = 4096) -> Optional[list]:
    """All divisors of a nonzero Gaussian integer up to units (None if more
    than cap)."""
    divs = [(1, 0)]
    for pi, e in gaussian_prime_factors(z):
        if len(divs) * (e + 1) > cap:
            return None
        powers = [(1, 0)]
        for _ in range(e):
            powers.append(_gmul(powers[-1], pi))
        divs = [_gmul(d, pw) for d in divs for pw in powers]
    return divs


_UNITS = ((1, 0), (-1, 0), (0, 1), (0, -1))


# ---------------------------------------------------------------------------
# univariate root extraction over Q(i)
# ---------------------------------------------------------------------------


def _poly_eval(coeffs: list, x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list, r: GaussianRational) -> list:
    out = [ZERO] * (len(coeffs) - 1)
    acc = ZERO
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * r + coeffs[i]
        out[i - 1] = acc
    return out


def _root_candidates(coeffs: list) -> Optional[list]:
    """Q(i) root candidates via the rational-root theorem over Z[i]."""
    den_lcm = 1
    for c in coeffs:
        for q in (c.re, c.im):
            d = int(q.denominator)
            den_lcm = den_lcm * d // gcd(den_lcm, d)
    ints = [(int(c.re.numerator) * (den_lcm // int(c.re.denominator)),
             int(c.im.numerator) * (den_lcm // int(c.im.denominator)))
            for c in coeffs]
    lead, trail = ints[-1], ints[0]
    div_lead = gaussian_divisors(lead)
    div_trail = gaussian_divisors(trail)
    if div_lead is None or div_trail is None or \
            len(div_lead) * len(div_trail) * 4 > 200_000:
        return None
    cands = set()
    for alpha in div_trail:
        for u in _UNITS:
            a = _gmul(alpha, u)
            for beta in div_lead:
                n = _gnorm(beta)
                re = rational(a[0] * beta[0] + a[1] * beta[1], n)
                im = rational(a[1] * beta[0] - a[0] * beta[1], n)
                cands.add(GaussianRational(re, im))
    return sorted(cands, key=lambda g: g.sort_key())


def qi_roots(coeffs: list) -> tuple:
    """All Q(i) roots (with multiplicity) of a univariate polynomial.

    coeffs is the low-to-high coefficient list.  Returns (roots, residue):
    residue is the remaining factor with no Q(i) roots, or None when the
    polynomial splits completely over Q(i).  A residue is also returned when
    candidate enumeration would be too large; roots found so far stay valid.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) <= 1:
        raise ValueError("constant polynomial has no roots to extract")
    roots = []
    while len(coeffs) > 1 and coeffs[0].is_zero():
        roots.append(ZERO)
        coeffs = coeffs[1:]
    candidates = None
    while len(coeffs) > 1:
        deg = len(coeffs) - 1
        if deg == 1:
            roots.append(-coeffs[0] / coeffs[1])
            coeffs = coeffs[1:]
            continue
        if deg == 2:
            a2, a1, a0 = coeffs[2], coeffs[1], coeffs[0]
            s = qi_sqrt(a1 * a1 - 4 * a2 * a0)
            if s is None:
                return roots, coeffs
            roots.append((-a1 + s) / (2 * a2))
            roots.append((-a1 - s) / (2 * a2))
            coeffs = coeffs[2:]
            continue
        if candidates is None:
            candidates = _root_candidates(coeffs)
            if candidates is None:
                return roots, coeffs
        for cand in candidates:
            if _poly_eval(coeffs, cand).is_zero():
                roots.append(cand)
                coeffs = _deflate(coeffs, cand)
                break
        else:
            return roots, coeffs
    return roots, None


# ---------------------------------------------------------------------------
# Buchberger engine
#
# Monomials are packed into single integers, one byte-sized field per
# variable plus a guard bit, so multiplication is integer addition and
# divisibility is one subtraction plus one mask test.  Order keys (grevlex or
# lex, as integers) are memoized per packed monomial, and reduction keeps the
# frontier in a lazy max-heap instead of rescanning the term dict.
# ---------------------------------------------------------------------------

_FIELD_BITS = 16
_FIELD_CAP = (1 << (_FIELD_BITS - 1)) - 1


class _MonomialContext:
    """Packing, ordering, and caches for one Groebner run."""

    def __init__(self, nvars: int, order: str):
        self.n = nvars
        self.order = order
        self.guard = 0
        for i in range(nvars):
            self.guard |= 1 << (_FIELD_BITS * i + _FIELD_BITS - 1)
        self._keys: dict = {}
        self._degs: dict = {}

    def pack(self, exp: tuple) -> int:
        m = 0
        for i, e in enumerate(exp):
            if e > _FIELD_CAP:
                raise SolverBoundExceeded("monomial exponent exceeds packing capacity")
            m |= e << (_FIELD_BITS * i)
        return m

    def unpack(self, m: int) -> tuple:
        mask = (1 << _FIELD_BITS) - 1
        return tuple((m >> (_FIELD_BITS * i)) & mask for i in range(self.n))

    def divides(self, a: int, b: int) -> bool:
        d = b - a
        return d >= 0 and not (d & self.guard)

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def deg(self, m: int) -> int:
        d = self._degs.get(m)
        if d is None:
            d = sum(self.unpack(m))
            self._degs[m] = d
        return d

    def key(self, m: int) -> int:
        k = self._keys.get(m)
        if k is None:
            e = self.unpack(m)
            if self.order == "lex":
                k = 0
                for v in e:  # index 0 most significant
                    k = (k << _FIELD_BITS) | v
            else:
                k = sum(e)
                for v in reversed(e):  # grevlex: last-variable complement first
                    k = (k << _FIELD_BITS) | (_FIELD_CAP - v)
            self._keys[m] = k
        return k


class _CoeffOps:
    """Coefficient arithmetic adapter: plain rationals when possible."""

    def __init__(self, real: bool):
        self.real = real

    def convert(self, c: GaussianRational):
        return c.re if self.real else c

    def restore(self, c) -> GaussianRational:
        return GaussianRational(c) if self.real else c

    def is_zero(self, c) -> bool:
        return not c if self.real else c.is_zero()

    def inv(self, c):
        return 1 / c if self.real else c.inverse()

    def is_one(self, c) -> bool:
        return c == 1 if self.real else c.is_one()


def _heap_normal_form(p: dict, basis: list, ctx: _MonomialContext, ops: _CoeffOps):
    """Full normal form of {packed: coeff} by [(lm, lm_key, terms), ...]."""
    import heapq

    work = dict(p)
    out: dict = {}
    heap = [-ctx.key(m) for m in work]
    heapq.heapify(heap)
    keymap = {ctx.key(m): m for m in work}
    while heap:
        negk = heapq.heappop(heap)
        m = keymap.get(-negk)
        if m is None or m not in work:
            continue
        c = work.pop(m)
        for lm, lm_key, terms in basis:
            if ctx.divides(lm, m):
                sh = m - lm
                for e, c2 in terms.items():
                    if e == lm:
                        continue
                    t = e + sh
                    prev = work.get(t)
                    if prev is None:
                        work[t] = -(c * c2)
                        tk = ctx.key(t)
                        keymap[tk] = t
                        heapq.heappush(heap, -tk)
                    else:
                        v = prev - c * c2
                        if ops.is_zero(v):
                            del work[t]
                        else:
                            work[t] = v
                break
        else:
            out[m] = c
    return out


def _monic_packed(terms: dict, ctx: _MonomialContext, ops: _CoeffOps):
    lm = max(terms, key=ctx.key)
    lc = terms[lm]
    if ops.is_one(lc):
        return lm, terms
    inv = ops.inv(lc)
    return lm, {e: c * inv for e, c in terms.items()}


def _buchberger(dicts: list, ctx: _MonomialContext, ops: _CoeffOps,
                degree_bound: int) -> list:
    import heapq

    basis: list = []        # (lm, lm_key, monic terms)
    pair_heap: list = []    # (lcm deg, lcm key, i, j, lcm)
    alive_pairs: set = set()

    def add_element(terms: dict):
        lm, terms = _monic_packed(terms, ctx, ops)
        t = len(basis)
        basis.append((lm, ctx.key(lm), terms))
        cand = [(i, ctx.lcm(basis[i][0], lm)) for i in range(t)]
        keep = []
        for i, l in cand:
            if any(j != i and ctx.divides(l2, l) and l2 != l for j, l2 in cand):
                continue
            keep.append((i, l))
        first_of: dict = {}
        for i, l in keep:
            first_of.setdefault(l, i)
        for i, l in keep:
            if first_of[l] != i or l == basis[i][0] + lm:
                continue  # duplicate lcm, or product criterion
            alive_pairs.add((i, t))
            heapq.heappush(pair_heap, (ctx.deg(l), ctx.key(l), i, t, l))
        # chain criterion on old pairs
        for (i, j) in list(alive_pairs):
            if j == t:
                continue
            l = ctx.lcm(basis[i][0], basis[j][0])
            if ctx.divides(lm, l) and ctx.lcm(basis[i][0], lm) != l \
                    and ctx.lcm(basis[j][0], lm) != l:
                alive_pairs.discard((i, j))

    for d in sorted(dicts, key=lambda t: (ctx.deg(max(t, key=ctx.key)),
                                          ctx.key(max(t, key=ctx.key)))):
        nf = _heap_normal_form(d, basis, ctx, ops)
        if nf:
            add_element(nf)

    while pair_heap:
        _, _, i, j, l = heapq.heappop(pair_heap)
        if (i, j) not in alive_pairs:
            continue
        alive_pairs.discard((i, j))
        li, lj = basis[i][0], basis[j][0]
        shi, shj = l - li, l - lj
        s: dict = {}
        for e, c in basis[i][2].items():
            s[e + shi] = c
        for e, c in basis[j][2].items():
            t2 = e + shj
            prev = s.get(t2)
            v = -c if prev is None else prev - c
            if prev is not None and ops.is_zero(v):
                del s[t2]
            else:
                s[t2] = v
        nf = _heap_normal_form(s, basis, ctx, ops)
        if not nf:
            continue
        lm = max(nf, key=ctx.key)
        if ctx.deg(lm) > degree_bound:
            raise SolverBoundExceeded(
                f"Groebner element exceeds total degree {degree_bound}")
        add_element(nf)

    # minimal basis
    minimal: list = []
    for lm, lk, terms in basis:
        if any(ctx.divides(l2, lm) for l2, _, _ in minimal):
            continue
        minimal = [entry for entry in minimal if not ctx.divides(lm, entry[0])]
        minimal.append((lm, lk, terms))
    # interreduce to the unique reduced basis
    reduced = []
    for k in range(len(minimal)):
        others = [minimal[m] for m in range(len(minimal)) if m != k]
        nf = _heap_normal_form(minimal[k][2], others, ctx, ops)
        if nf:
            reduced.append(_monic_packed(nf, ctx, ops)[1])
    reduced.sort(key=lambda d: ctx.key(max(d, key=ctx.key)))
    return reduced


def groebner(system: Union[PolySystem, Sequence[MultiPoly]],
             order: str = "grevlex",
             var_order: Optional[Sequence[str]] = None,
             degree_bound: int = DEFAULT_DEGREE_BOUND) -> list:
    """Reduced Groebner basis of the given equations.

    var_order optionally fixes the variable precedence (highest first);
    the registry precedence applies otherwise.  The basis [1] signals an
    inconsistent system.
    """
    eqs = list(system.equations) if isinstance(system, PolySystem) else list(system)
    eqs = [p for p in eqs if not p.is_zero()]
    if not eqs:
        return []
    if any(p.is_constant() for p in eqs):
        return [MultiPoly.const(ONE)]
    vs: tuple = ()
    for p in eqs:
        vs = merge_vars(vs, p.variables_used())
    if var_order is not None:
        missing = [v for v in vs if v not in var_order]
        if missing:
            raise ValueError(f"var_order is missing {missing}")
        vs = tuple(v for v in var_order if v in vs)
    ctx = _MonomialContext(len(vs), order)
    real = all(c.is_real() for p in eqs for c in p.terms.values())
    ops = _CoeffOps(real)
    dicts = []
    for p in eqs:
        q = p.on_vars(vs)
        dicts.append({ctx.pack(e): ops.convert(c) for e, c in q.terms.items()})
    reduced = _buchberger(dicts, ctx, ops, degree_bound)
    out = [MultiPoly(vs, {ctx.unpack(m): ops.restore(c) for m, c in d.items()})
           for d in reduced]
    if any(p.is_constant() for p in out):
        return [MultiPoly.const(ONE)]
    return out


def reduces_to_zero(p: MultiPoly, basis: Sequence[MultiPoly],
                    order: str = "grevlex") -> bool:
    return poly_reduce(p, list(basis), order).is_zero()


# ---------------------------------------------------------------------------
# saturation
# ---------------------------------------------------------------------------


def saturate(system: PolySystem) -> PolySystem:
    """Remove the degenerate components cut out by the nonzero constraints.

    Constraint polynomials dividing every equation are divided out with
    multiplicity (the Cole-Hopf route loses its global A*k^2 factor here);
    the removed factors are recorded on the result.  Systems without
    constraints are returned unchanged.
    """
    eqs = list(system.equations)
    removed = list(system.removed_factors)
    if eqs:
        for g in sorted(system.nonzero, key=poly_sort_key):
            if g.is_constant():
                continue
            while True:
                quots = [divide_exact(p, g) for p in eqs]
                if any(q is None for q in quots):
                    break
                eqs = quots
                removed.append(g)
    out = PolySystem.from_coefficients(
        eqs, [w[0] if w else 0 for w in system.powers],
        nonzero=system.nonzero,
        nonzero_groups=system.nonzero_groups)
    out.removed_factors = removed
    return out


# ---------------------------------------------------------------------------
# solution varieties
# ---------------------------------------------------------------------------


@dataclass
class SolutionVariety:
    """One solution component.

    free: free parameter names; bindings: solved values (polynomials in the
    free parameters and the scale symbol); relations: unresolved triangular
    polynomials, each tying one more variable algebraically; constraints:
    remaining algebraic conditions; conditions: nonvanishing side conditions
    inherited from saturation and support enumeration.
    """

    free: tuple = ()
    bindings: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    conditions: list = field(default_factory=list)

    def is_point(self) -> bool:
        return (not self.free and not self.relations and not self.constraints
                and all(v.is_constant() for v in self.bindings.values()))

    def point(self) -> dict:
        if not self.is_point():
            raise ValueError("variety is not a single Q(i) point")
        return {k: v.constant_value() for k, v in self.bindings.items()}

    def signature(self):
        return (
            tuple(sorted(self.free)),
            tuple(sorted((k, poly_sort_key(v)) for k, v in self.bindings.items())),
            tuple(sorted(poly_sort_key(r) for r in self.relations)),
            tuple(sorted(poly_sort_key(c) for c in self.constraints)),
        )

    def __str__(self):
        parts = [f"{k} = {v}"
                 for k, v in sorted(self.bindings.items(), key=lambda kv: var_key(kv[0]))]
        parts += [f"0 = {r}" for r in self.relations]
        parts += [f"0 = {c}" for c in self.constraints]
        if self.free:
            parts.append("free: " + ", ".join(sorted(self.free, key=var_key)))
        return "; ".join(parts) if parts else "(trivial)"


def variety_satisfies(variety: SolutionVariety, system: PolySystem) -> bool:
    """Exact membership check: bindings reduce every equation to zero modulo
    the variety's relations and constraints."""
    mods = [r for r in variety.relations + variety.constraints if not r.is_zero()]
    for eq in system.equations:
        val = eq.substitute(variety.bindings)
        if mods and not val.is_zero():
            val = poly_reduce(val, mods)
        if not val.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# the splitting solver
# ---------------------------------------------------------------------------


def _normalize_polys(polys: list) -> Optional[list]:
    """Canonicalize and deduplicate; None when a nonzero constant appears."""
    out = []
    seen = set()
    for p in polys:
        if p.is_zero():
            continue
        if p.is_constant():
            return None
        q = p.content_normalize().restrict_vars()
        k = poly_sort_key(q)
        if k in seen:
            continue
        seen.add(k)
        out.append(q)
    out.sort(key=poly_sort_key)
    return out


def _monomial_content_vars(p: MultiPoly) -> list:
    return [v for i, v in enumerate(p.vars)
            if all(e[i] > 0 for e in p.terms)]


def _strip_var_content(p: MultiPoly, variables) -> MultiPoly:
    q = p
    for v in variables:
        while True:
            d = divide_exact(q, MultiPoly.var(v))
            if d is None:
                break
            q = d
    return q


def _univariate_coeffs(p: MultiPoly):
    used = p.variables_used()
    if len(used) != 1:
        return None
    v = used[0]
    q = p.on_vars((v,))
    deg = max(e[0] for e in q.terms)
    return v, [q.terms.get((i,), ZERO) for i in range(deg + 1)]


class _CaseSolver:
    """Recursive triangular splitting on one support subcase."""

    def __init__(self, unknowns: tuple, nonzero_vars: set, degree_bound: int):
        self.unknowns = unknowns
        self.nonzero_vars = nonzero_vars
        self.degree_bound = degree_bound
        self.out: list = []

    def solve(self, polys: list, bindings: dict) -> list:
        self._rec(list(polys), dict(bindings), stage=0, depth=0)
        return self.out

    def _emit(self, bindings, relations=(), constraints=(), free=()):
        self.out.append(SolutionVariety(
            free=tuple(sorted(free, key=var_key)),
            bindings={k: (v if isinstance(v, MultiPoly) else MultiPoly.const(v))
                      for k, v in bindings.items()},
            relations=list(relations),
            constraints=list(constraints),
        ))

    def _rec(self, polys, bindings, stage, depth):
        if depth > 100:
            raise RecursionError("solver split depth exceeded")
        polys = _normalize_polys(polys)
        if polys is None:
            return
        if not polys:
            free = [v for v in self.unknowns if v not in bindings]
            self._emit(bindings, free=free)
            return

        # monomial-content splitting: p = x^a * q means x = 0 or q = 0
        for p in polys:
            content = _monomial_content_vars(p)
            if not content:
                continue
            rest = [q for q in polys if q is not p]
            stripped = _strip_var_content(p, content)
            if not stripped.is_constant():
                self._rec(rest + [stripped], bindings, 0, depth + 1)
            for v in content:
                if v in self.nonzero_vars or v in bindings:
                    continue
                nb = dict(bindings)
                nb[v] = ZERO
                self._rec([q.substitute({v: ZERO}) for q in rest], nb, 0, depth + 1)
            return

        # univariate root splitting
        for p in polys:
            uni = _univariate_coeffs(p)
            if uni is None:
                continue
            v, coeffs = uni
            roots, residue = qi_roots(coeffs)
            rest = [q for q in polys if q is not p]
            for r in sorted(set(roots), key=lambda g: g.sort_key()):
                nb = dict(bindings)
                nb[v] = r
                self._rec([q.substitute({v: r}) for q in rest], nb, 0, depth + 1)
            if residue is not None:
                res_poly = MultiPoly((v,), {(i,): c for i, c in enumerate(residue)})
                res_poly = res_poly.content_normalize()
                reduced = [poly_reduce(q, [res_poly]) for q in rest]
                reduced = [q for q in reduced if not q.is_zero()]
                self._emit(bindings, relations=[res_poly], constraints=reduced)
            return

        if stage == 0:
            gb = groebner(polys, "grevlex", degree_bound=self.degree_bound)
            if gb and gb[0].is_constant():
                return
            self._rec(gb, bindings, 1, depth + 1)
            return

        self._family(polys, bindings)

    # -- positive-dimensional components --------------------------------------

    def _free_candidates(self, gb) -> list:
        vs: tuple = ()
        for p in gb:
            vs = merge_vars(vs, p.variables_used())
        pure = set()
        for p in gb:
            lm = p.leading_monomial()
            support = [i for i, e in enumerate(lm) if e]
            if len(support) == 1:
                pure.add(p.vars[support[0]])
        cands = [v for v in vs if v not in pure]
        cands.sort(key=lambda v: (max(p.degree_in(v) for p in gb), v))
        return cands

    def _family(self, gb, bindings):
        vs: tuple = ()
        for p in gb:
            vs = merge_vars(vs, p.variables_used())
        cands = self._free_candidates(gb)
        bound_vars = [v for v in vs if v not in cands]
        # lex precedence: bound variables first; the primary free parameter
        # (lowest degree across the basis, alphabetical tie-break) very last
        order = tuple(bound_vars) + tuple(reversed(cands))
        lex = groebner(gb, "lex", var_order=order, degree_bound=self.degree_bound)
        if lex and lex[0].is_constant():
            return
        if any(_univariate_coeffs(p) is not None for p in lex):
            self._rec(lex, bindings, 0, 0)
            return

        prec = {v: i for i, v in enumerate(order)}

        def leading_var(p: MultiPoly) -> str:
            return min(p.variables_used(), key=lambda v: prec.get(v, 10 ** 6))

        new_bindings: dict = {}
        relations: list = []
        relation_leads: set = set()
        constraints: list = []
        # process from the least variable upward so bindings resolve bottom-up
        for g in sorted(lex, key=lambda p: -prec[leading_var(p)]):
            g2 = g.substitute(new_bindings) if new_bindings else g
            if g2.is_zero():
                continue
            if g2.is_constant():
                return
            g2 = g2.content_normalize().restrict_vars()
            lv = leading_var(g2)
            if g2.degree_in(lv) == 1 and lv not in new_bindings:
                lead, restp = g2.decompose_linear(lv)
                if lead.is_constant():
                    new_bindings[lv] = restp * (-(lead.constant_value().inverse()))
                    continue
            others = [v for v in g2.variables_used()
                      if v != lv and v not in new_bindings
                      and v not in cands and v not in relation_leads]
            if not others and lv not in relation_leads:
                relations.append(g2)
                relation_leads.add(lv)
            else:
                constraints.append(g2)

        merged = dict(bindings)
        merged.update(new_bindings)
        claimed = set(merged) | relation_leads
        for c in constraints:
            claimed.update(c.variables_used())
        free = [v for v in self.unknowns if v not in claimed]
        self._emit(merged, relations=relations, constraints=constraints, free=free)


def solve_variety(system: PolySystem,
                  degree_bound: int = DEFAULT_DEGREE_BOUND) -> list:
    """All solution varieties of a saturated system off the degenerate locus.

    Every solution with all coordinates in Q(i) that respects the
    nondegeneracy conditions appears among the returned varieties as an
    explicit point; branches needing algebraic extensions are reported as
    unresolved relations; positive-dimensional components come back as
    families with named free parameters.
    """
    unknowns = system.variables()
    for grp in system.nonzero_groups:
        unknowns = merge_vars(unknowns, grp)
    for g in system.nonzero:
        unknowns = merge_vars(unknowns, g.variables_used())

    group_cases = []
    for grp in system.nonzero_groups:
        subsets = []
        for r in range(1, len(grp) + 1):
            subsets.extend(itertools.combinations(grp, r))
        group_cases.append(subsets)

    varieties: list = []
    seen = set()
    selections = itertools.product(*group_cases) if group_cases else [()]
    for selection in selections:
        zeros: dict = {}
        support: set = set()
        for grp, sel in zip(system.nonzero_groups, selection):
            support.update(sel)
            zeros.update({v: ZERO for v in grp if v not in sel})
        subsys = system.substitute(zeros)
        subsys.nonzero = list(subsys.nonzero) + \
            [MultiPoly.var(v) for v in sorted(support)]
        subsys = saturate(subsys)
        nz_vars = {g.variables_used()[0] for g in subsys.nonzero
                   if len(g.terms) == 1 and len(g.variables_used()) == 1}
        solver = _CaseSolver(unknowns, nz_vars | support, degree_bound)
        for var in solver.solve(subsys.equations, {v: ZERO for v in zeros}):
            if not _respects_nonzero(var, subsys.nonzero, support):
                continue
            var.conditions = [MultiPoly.var(v) for v in sorted(support)] + \
                [g for g in system.nonzero if not g.is_constant()]
            sig = var.signature()
            if sig not in seen:
                seen.add(sig)
                varieties.append(var)

    varieties.sort(key=lambda v: (0 if v.is_point() else 1, v.signature()))
    return varieties


def _respects_nonzero(variety: SolutionVariety, nonzero, support) -> bool:
    for v in support:
        b = variety.bindings.get(v)
        if b is not None and b.is_zero():
            return False
    if variety.is_point():
        point = variety.point()
        for g in nonzero:
            if all(v in point for v in g.variables_used()):
                if g.evaluate(point).is_zero():
                    return False
    return True


# ---------------------------------------------------------------------------
# weighted rescaling and pipeline glue
# ---------------------------------------------------------------------------


def _rescale_poly(p: MultiPoly, weights: dict, scale: str, target: int) -> MultiPoly:
    out = MultiPoly.zero()
    sc = MultiPoly.var(scale)
    for exp, c in p.terms.items():
        w = sum(weights.get(v, 0) * e for v, e in zip(p.vars, exp))
        if target - w < 0:
            raise ValueError("rescale target below term weight; "
                             "value not weighted-homogeneous")
        out = out + MultiPoly(p.vars, {exp: c}) * sc ** (target - w)
    return out


def _poly_weight(p: MultiPoly, weights: dict) -> int:
    return max(sum(weights.get(v, 0) * e for v, e in zip(p.vars, exp))
               for exp in p.terms)


def weight_rescale(variety: SolutionVariety, weights: dict, scale: str,
                   system: Optional[PolySystem] = None) -> SolutionVariety:
    """Reintroduce the scale symbol: each bound value of weight w becomes
    value * scale^w, and relations regain homogeneity by per-term padding.

    When the originating (pre-normalization) system is supplied, its weighted
    homogeneity under the table is verified first.
    """
    if system is not None:
        table = dict(weights)
        table.setdefault(scale, 1)
        if not system.is_weighted_homogeneous(table):
            raise ValueError("system is not weighted-homogeneous under the table")
    bindings = {v: _rescale_poly(val, weights, scale, weights.get(v, 0))
                for v, val in variety.bindings.items()}
    relations = [_rescale_poly(r, weights, scale, _poly_weight(r, weights))
                 for r in variety.relations]
    constraints = [_rescale_poly(c, weights, scale, _poly_weight(c, weights))
                   for c in variety.constraints]
    free = tuple(sorted(set(variety.free) | {scale}, key=var_key))
    return SolutionVariety(free=free, bindings=bindings,
                           relations=relations, constraints=constraints,
                           conditions=list(variety.conditions))


def solve_system(system: PolySystem, scale: str, weights: dict,
                 degree_bound: int = DEFAULT_DEGREE_BOUND) -> list:
    """saturate -> fix scale = 1 -> solve -> weight_rescale."""
    sat = saturate(system)
    table = dict(weights)
    table.setdefault(scale, 1)
    if not sat.is_weighted_homogeneous(table):
        raise ValueError("derived system is not weighted-homogeneous; "
                         "cannot normalize the scale")
    normalized = sat.substitute({scale: 1})
    found = solve_variety(normalized, degree_bound=degree_bound)
    return [weight_rescale(v, weights, scale) for v in found]


def run_pipeline(coeffs, spec, degree_bound: int = DEFAULT_DEGREE_BOUND):
    """derive -> saturate -> solve -> rescale for one equation and family.

    Returns (derived system, list of rescaled varieties).
    """
    from .ansatz import derive_system
    from .model import build_pde, reduce_to_traveling_ode

    pde = build_pde(coeffs)
    equation = pde if spec.family == "cole-hopf" else reduce_to_traveling_ode(pde)
    system = derive_system(equation, spec)
    return system, solve_system(system, spec.scale, spec.weights,
                                degree_bound=degree_bound)

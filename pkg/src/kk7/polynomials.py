"""Multivariate and Laurent polynomial arithmetic over Q(i).

MultiPoly is a sparse polynomial in named indeterminates: a variable tuple
(in decreasing precedence) plus a map from dense exponent tuples to nonzero
GaussianRational coefficients.  Different variable lists are merged by name
on the fly, with precedence taken from a fixed registry so results are
deterministic.

LaurentPoly is a polynomial in a single distinguished variable (the zeta of
the exponential normal form) whose exponents may be negative and whose
coefficients are MultiPoly values in the remaining parameters.
"""

from __future__ import annotations

import re as _re
from typing import Callable, Iterable, Optional, Sequence

from .rationals import GaussianRational, ONE, ZERO, parse_rational

# Precedence registry: lower key sorts first = higher monomial-order precedence.
# Ansatz unknowns come first, wave/scale symbols last; anything unknown sits in
# the middle block ordered by name.
_PRIORITY = {
    "A": 0, "B": 1,
    "a": 10, "b": 11, "c": 12, "d": 13, "kappa": 14, "p": 15,
    "lam": 20, "omega": 21,
    "k": 90, "mu": 91, "delta": 95,
}


def var_key(name: str):
    return (_PRIORITY.get(name, 50), name)


def merge_vars(u: Sequence[str], v: Sequence[str]) -> tuple:
    return tuple(sorted(set(u) | set(v), key=var_key))


# -- monomial orders ---------------------------------------------------------


def grevlex_key(exp: tuple) -> tuple:
    return (sum(exp), tuple(-e for e in reversed(exp)))


def lex_key(exp: tuple) -> tuple:
    return exp


ORDERS: dict[str, Callable[[tuple], tuple]] = {"grevlex": grevlex_key, "lex": lex_key}


def order_key(order: str) -> Callable[[tuple], tuple]:
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


class MultiPoly:
    """Sparse multivariate polynomial over Q(i), canonical (no zero terms)."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: dict):
        self.vars = tuple(variables)
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(variables: Sequence[str] = ()) -> "MultiPoly":
        return MultiPoly(variables, {})

    @staticmethod
    def const(value, variables: Sequence[str] = ()) -> "MultiPoly":
        c = GaussianRational.coerce(value)
        variables = tuple(variables)
        if c.is_zero():
            return MultiPoly(variables, {})
        return MultiPoly(variables, {(0,) * len(variables): c})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): ONE})

    @staticmethod
    def monomial(variables: Sequence[str], exps: Sequence[int], coeff) -> "MultiPoly":
        return MultiPoly(tuple(variables), {tuple(exps): GaussianRational.coerce(coeff)})

    # -- basic structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        [(exp, c)] = self.terms.items()
        if any(exp):
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def variables_used(self) -> tuple:
        used = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def restrict_vars(self) -> "MultiPoly":
        """Drop variables that do not occur."""
        used = self.variables_used()
        if used == self.vars:
            return self
        return self.on_vars(used)

    def on_vars(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over the given variable tuple (a superset of those used)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        idx = {v: i for i, v in enumerate(variables)}
        pos = []
        for i, v in enumerate(self.vars):
            pos.append(idx.get(v))
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for i, e in enumerate(exp):
                if e:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.vars[i]} missing from target list")
                    new[pos[i]] = e
            terms[tuple(new)] = terms.get(tuple(new), ZERO) + c
        return MultiPoly(variables, terms)

    @staticmethod
    def align(p: "MultiPoly", q: "MultiPoly"):
        if p.vars == q.vars:
            return p, q
        vs = merge_vars(p.vars, q.vars)
        return p.on_vars(vs), q.on_vars(vs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        p, q = MultiPoly.align(self, other)
        terms = dict(p.terms)
        for exp, c in q.terms.items():
            s = terms.get(exp, ZERO) + c
            if s.is_zero():
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return MultiPoly(p.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = MultiPoly.const(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            c = GaussianRational.coerce(other)
            if c.is_zero():
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        p, q = MultiPoly.align(self, other)
        terms: dict = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp, ZERO) + c1 * c2
                if s.is_zero():
                    terms.pop(exp, None)
                else:
                    terms[exp] = s
        return MultiPoly(p.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power requires integer n >= 0")
        out = MultiPoly.const(ONE, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        p, q = MultiPoly.align(self, other)
        return p.terms == q.terms

    def __hash__(self):
        p = self.restrict_vars()
        return hash((p.vars, frozenset(p.terms.items())))

    # -- leading data ---------------------------------------------------------

    def leading_monomial(self, order: str = "grevlex") -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        key = order_key(order)
        return max(self.terms, key=key)

    def leading_coeff(self, order: str = "grevlex") -> GaussianRational:
        return self.terms[self.leading_monomial(order)]

    def content_normalize(self, order: str = "grevlex") -> "MultiPoly":
        """Scale by a unit of Q(i) so the leading coefficient is 1."""
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        lc = self.leading_coeff(order)
        if lc.is_one():
            return self
        inv = lc.inverse()
        return MultiPoly(self.vars, {e: c * inv for e, c in self.terms.items()})

    def decompose_linear(self, name: str):
        """Split p = L*name + R for a variable occurring at degree <= 1."""
        if name not in self.vars:
            return MultiPoly.zero(self.vars), self
        i = self.vars.index(name)
        lt: dict = {}
        rt: dict = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                rt[exp] = c
            elif exp[i] == 1:
                e2 = exp[:i] + (0,) + exp[i + 1:]
                lt[e2] = lt.get(e2, ZERO) + c
            else:
                raise ValueError(f"{name} occurs at degree {exp[i]} > 1")
        return MultiPoly(self.vars, lt), MultiPoly(self.vars, rt)

    # -- substitution / evaluation --------------------------------------------

    def substitute(self, bindings: dict) -> "MultiPoly":
        """Simultaneously substitute variables by polynomials or scalars."""
        if not bindings:
            return self
        keep = [v for v in self.vars if v not in bindings]
        vals = {}
        for v in self.vars:
            if v in bindings:
                b = bindings[v]
                vals[v] = b if isinstance(b, MultiPoly) else MultiPoly.const(b)
        out = MultiPoly.zero(tuple(keep))
        for exp, c in self.terms.items():
            term = MultiPoly.const(c, tuple(keep))
            kept = [0] * len(keep)
            for i, e in enumerate(exp):
                if not e:
                    continue
                v = self.vars[i]
                if v in vals:
                    term = term * vals[v] ** e
                else:
                    kept[keep.index(v)] = e
            out = out + term * MultiPoly((tuple(keep)), {tuple(kept): ONE})
        return out

    def evaluate(self, point: dict) -> GaussianRational:
        """Evaluate at a full assignment name -> GaussianRational."""
        total = ZERO
        for exp, c in self.terms.items():
            val = c
            for v, e in zip(self.vars, exp):
                if e:
                    val = val * (GaussianRational.coerce(point[v]) ** e)
            total = total + val
        return total

    # -- weighted homogeneity ---------------------------------------------------

    def weighted_degree_set(self, weights: dict) -> set:
        degs = set()
        for exp in self.terms:
            degs.add(sum(w * e for w, e in zip((weights.get(v, 0) for v in self.vars), exp)))
        return degs

    def is_weighted_homogeneous(self, weights: dict) -> Optional[int]:
        degs = self.weighted_degree_set(weights)
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- display -----------------------------------------------------------------

    def sorted_terms(self, order: str = "grevlex"):
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            factors = [
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, exp)
                if e
            ]
            cs = str(c)
            if factors:
                if c.is_one():
                    body = "*".join(factors)
                elif c == GaussianRational(-1):
                    body = "-" + "*".join(factors)
                elif not c.is_real() and not c.re.numerator == 0:
                    body = f"({cs})*" + "*".join(factors)
                else:
                    body = f"{cs}*" + "*".join(factors)
            else:
                body = cs
            parts.append(body)
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    __repr__ = __str__


# -- parsing -------------------------------------------------------------------

_TOKEN = _re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_poly(text: str) -> MultiPoly:
    """Parse a flat polynomial: terms joined by +/-, factors by '*', powers '^'.

    Supports exact rational coefficients and the imaginary unit I; no
    parentheses.  Intended for test fixtures and CLI input, not general use.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    # split into signed terms
    terms = []
    start = 0
    for i, ch in enumerate(s):
        if ch in "+-" and i > start and s[i - 1] not in "*/^+-":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    out = MultiPoly.zero()
    for term in terms:
        sign = ONE
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if not term:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = sign
        mono: dict[str, int] = {}
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor[0].isdigit() or factor[0] == ".":
                if "^" in factor:
                    base, exp = factor.split("^")
                    coeff = coeff * (parse_rational(base) ** int(exp))
                else:
                    coeff = coeff * parse_rational(factor)
            elif factor == "I":
                coeff = coeff * GaussianRational(0, 1)
            else:
                if "^" in factor:
                    name, exp_s = factor.split("^")
                    e = int(exp_s)
                else:
                    name, e = factor, 1
                if not _TOKEN.fullmatch(name):
                    raise ValueError(f"bad variable name {name!r}")
                mono[name] = mono.get(name, 0) + e
        vs = tuple(sorted(mono, key=var_key))
        out = out + MultiPoly.monomial(vs, tuple(mono[v] for v in vs), coeff)
    return out


# -- division ---------------------------------------------------------------------


def divide(p: MultiPoly, divisors: Sequence[MultiPoly], order: str = "grevlex"):
    """Multivariate division: returns (quotients, remainder).

    p == sum(q_i * d_i) + r exactly, and no monomial of r is divisible by
    any divisor's leading monomial.
    """
    if any(d.is_zero() for d in divisors):
        raise ValueError("zero divisor")
    if not divisors:
        return [], p
    vs = p.vars
    for d in divisors:
        vs = merge_vars(vs, d.vars)
    p = p.on_vars(vs)
    divisors = [d.on_vars(vs) for d in divisors]
    key = order_key(order)
    lead = [(max(d.terms, key=key), d) for d in divisors]
    quotients = [MultiPoly.zero(vs) for _ in divisors]
    remainder: dict = {}
    work = dict(p.terms)
    while work:
        mono = max(work, key=key)
        coeff = work.pop(mono)
        for i, (lm, d) in enumerate(lead):
            if all(m >= l for m, l in zip(mono, lm)):
                shift = tuple(m - l for m, l in zip(mono, lm))
                factor = coeff / d.terms[lm]
                quotients[i] = quotients[i] + MultiPoly(vs, {shift: factor})
                for e, c in d.terms.items():
                    if e == lm:
                        continue
                    tgt = tuple(a + b for a, b in zip(e, shift))
                    s = work.get(tgt, ZERO) - factor * c
                    if s.is_zero():
                        work.pop(tgt, None)
                    else:
                        work[tgt] = s
                break
        else:
            remainder[mono] = coeff
    return quotients, MultiPoly(vs, remainder)


def poly_reduce(p: MultiPoly, divisors: Sequence[MultiPoly], order: str = "grevlex") -> MultiPoly:
    """Normal form of p modulo the divisors (remainder of division)."""
    return divide(p, divisors, order)[1]


def divide_exact(p: MultiPoly, q: MultiPoly) -> Optional[MultiPoly]:
    """Return p/q when q divides p exactly, else None."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return MultiPoly.zero(p.vars)
    if len(q.terms) == 1:
        # monomial divisor: termwise exponent subtraction
        p2, q2 = MultiPoly.align(p, q)
        [(dexp, dc)] = q2.terms.items()
        inv = dc.inverse()
        terms = {}
        for exp, c in p2.terms.items():
            new = tuple(a - b for a, b in zip(exp, dexp))
            if any(e < 0 for e in new):
                return None
            terms[new] = c * inv
        return MultiPoly(p2.vars, terms)
    quotients, r = divide(p, [q])
    if r.is_zero():
        return quotients[0]
    return None


# -- Laurent polynomials ------------------------------------------------------------


class LaurentPoly:
    """Laurent polynomial in one variable with MultiPoly coefficients."""

    __slots__ = ("variable", "coeffs")

    def __init__(self, variable: str, coeffs: dict):
        self.variable = variable
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}

    @staticmethod
    def zero(variable: str = "zeta") -> "LaurentPoly":
        return LaurentPoly(variable, {})

    @staticmethod
    def const(variable: str, value) -> "LaurentPoly":
        c = value if isinstance(value, MultiPoly) else MultiPoly.const(value)
        return LaurentPoly(variable, {0: c})

    @staticmethod
    def term(variable: str, exponent: int, coeff) -> "LaurentPoly":
        c = coeff if isinstance(coeff, MultiPoly) else MultiPoly.const(coeff)
        return LaurentPoly(variable, {exponent: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero Laurent polynomial has no degree")
        return max(self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            raise ValueError("zero Laurent polynomial has no valuation")
        return min(self.coeffs)

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by variable^m."""
        return LaurentPoly(self.variable, {e + m: c for e, c in self.coeffs.items()})

    def _check(self, other: "LaurentPoly"):
        if self.variable != other.variable:
            raise ValueError("Laurent variables differ")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = coeffs.get(e)
            coeffs[e] = c if s is None else s + c
        return LaurentPoly(self.variable, coeffs)

    def __neg__(self):
        return LaurentPoly(self.variable, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational, MultiPoly)):
            return LaurentPoly(self.variable, {e: c * other for e, c in self.coeffs.items()})
        self._check(other)
        coeffs: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = coeffs.get(e)
                prod = c1 * c2
                coeffs[e] = prod if s is None else s + prod
        return LaurentPoly(self.variable, coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("LaurentPoly power requires n >= 0 (invert via RationalForm)")
        out = LaurentPoly.const(self.variable, ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variable == other.variable and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.variable, frozenset((e, hash(c)) for e, c in self.coeffs.items())))

    def exact_divide(self, d: "LaurentPoly") -> Optional["LaurentPoly"]:
        """Return self/d when d divides exactly (over the coefficient ring)."""
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.variable)
        # shift both to ordinary polynomials so top-down division terminates
        sv, dv = self.valuation(), d.valuation()
        num = {e - sv: c for e, c in self.coeffs.items()}
        den = {e - dv: c for e, c in d.coeffs.items()}
        deg_d = max(den)
        dl = den[deg_d]
        quot: dict = {}
        while num:
            nd = max(num)
            if nd < deg_d:
                return None
            q = divide_exact(num[nd], dl)
            if q is None:
                return None
            e = nd - deg_d
            quot[e] = q
            for ce, cc in den.items():
                tgt = ce + e
                s = num.get(tgt, MultiPoly.zero()) - q * cc
                if s.is_zero():
                    num.pop(tgt, None)
                else:
                    num[tgt] = s
        return LaurentPoly(self.variable, {e + sv - dv: c for e, c in quot.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = str(self.coeffs[e])
            if e == 0:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{self.variable}^{e}")
        return " + ".join(parts)

    __repr__ = __str__

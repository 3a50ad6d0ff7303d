"""Exponential normal form: expressions as exact rational functions of zeta.

Every hyperbolic/exponential atom with argument commensurate to a common
phase theta rewrites to a rational function of zeta = exp(theta):

    tanh -> (z^2-1)/(z^2+1)     sinh -> (z - 1/z)/2      exp -> z
    coth -> (z^2+1)/(z^2-1)     cosh -> (z + 1/z)/2

Trigonometric atoms go through zeta = exp(theta) with an imaginary carrier
theta = i*(real argument), using Q(i) coefficients:

    tan -> -I(z^2-1)/(z^2+1)    sin -> -I(z - 1/z)/2
    cot ->  I(z^2+1)/(z^2-1)    cos ->   (z + 1/z)/2

The result is a RationalForm: a Laurent-polynomial numerator over a factored
denominator whose bases are Laurent polynomials in zeta.  Monomial factors
zeta^m are absorbed into the numerator's (possibly negative) exponents, and
numerator/denominator common factors are cancelled exactly, so the collected
coefficient system is minimal.  Since exp(theta) is transcendental over the
parameter field, a vanishing numerator is a sound and complete zero test.
"""

from __future__ import annotations

from typing import Optional

from .expressions import Expr, FnAtom, InvAtom, SymAtom
from .polynomials import LaurentPoly, MultiPoly
from .rationals import GaussianRational, I, ONE, ZERO
from .systems import PolySystem

ZETA = "zeta"

#: symbols treated as wave coordinates (never allowed outside function atoms)
WAVE_VARS = ("x", "t", "xi")


class NormalFormError(ValueError):
    pass


def _normalize_base(b: LaurentPoly):
    """Split a Laurent poly into (monic-ish base, shift, unit) with base
    valuation 0 and unit leading Q(i) coefficient 1."""
    shift = b.valuation()
    if shift:
        b = b.shift(-shift)
    unit = b.coeffs[b.degree()].leading_coeff()
    if not unit.is_one():
        b = b * unit.inverse()
    return b, shift, unit


class RationalForm:
    """num / prod(base^power) with num, bases Laurent polynomials in zeta."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Optional[dict] = None):
        self.num = num
        self.den = {b: p for b, p in (den or {}).items() if p}
        for b in self.den:
            if b.is_zero():
                raise ZeroDivisionError("zero denominator base")

    @staticmethod
    def scalar(value) -> "RationalForm":
        c = value if isinstance(value, MultiPoly) else MultiPoly.const(value)
        return RationalForm(LaurentPoly.const(ZETA, c))

    @staticmethod
    def zeta_power(m: int) -> "RationalForm":
        return RationalForm(LaurentPoly.term(ZETA, m, ONE))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RationalForm") -> "RationalForm":
        bases = set(self.den) | set(other.den)
        den = {b: max(self.den.get(b, 0), other.den.get(b, 0)) for b in bases}
        num1, num2 = self.num, other.num
        for b in bases:
            for _ in range(den[b] - self.den.get(b, 0)):
                num1 = num1 * b
            for _ in range(den[b] - other.den.get(b, 0)):
                num2 = num2 * b
        return RationalForm(num1 + num2, den)

    def __neg__(self):
        return RationalForm(-self.num, dict(self.den))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational, MultiPoly)):
            return RationalForm(self.num * other, dict(self.den))
        den = dict(self.den)
        for b, p in other.den.items():
            den[b] = den.get(b, 0) + p
        return RationalForm(self.num * other.num, den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RationalForm.scalar(ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "RationalForm":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero rational form")
        num = LaurentPoly.const(ZETA, ONE)
        for b, p in self.den.items():
            for _ in range(p):
                num = num * b
        if len(self.num.coeffs) == 1:
            # monomial numerator: c * zeta^m inverts in place
            [(m, c)] = self.num.coeffs.items()
            cv = c.restrict_vars()
            if not cv.is_constant():
                raise NormalFormError(
                    "cannot invert a parameter-monomial numerator exactly")
            return RationalForm(num.shift(-m) * cv.constant_value().inverse())
        base, shift, unit = _normalize_base(self.num)
        return RationalForm(num.shift(-shift) * unit.inverse(), {base: 1})

    def canonical(self) -> "RationalForm":
        """Cancel denominator bases that divide the numerator exactly."""
        num = self.num
        den = {}
        for b, p in self.den.items():
            while p > 0:
                q = num.exact_divide(b)
                if q is None:
                    break
                num = q
                p -= 1
            if p:
                den[b] = p
        return RationalForm(num, den)

    def __eq__(self, other):
        if not isinstance(other, RationalForm):
            return NotImplemented
        return (self - other).canonical().is_zero()

    def __str__(self):
        if not self.den:
            return str(self.num)
        dens = " * ".join(
            f"({b})^{p}" if p > 1 else f"({b})"
            for b, p in sorted(self.den.items(), key=lambda kv: str(kv[0]))
        )
        return f"[{self.num}] / [{dens}]"

    __repr__ = __str__


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def _atom_exponent(atom: FnAtom, phase: Expr) -> GaussianRational:
    """Multiple c with atom argument == c*phase (trig matched via i*arg)."""
    arg = atom.arg
    if atom.fname in ("tan", "cot", "sin", "cos"):
        arg = arg * I
    c = arg.scalar_ratio(phase)
    if c is None:
        raise NormalFormError(
            f"argument of {atom.fname} is not commensurate with the phase")
    if not c.is_real():
        raise NormalFormError(
            f"argument of {atom.fname} is not a rational multiple of the phase")
    return c


def _atom_form(fname: str, m: int) -> RationalForm:
    """Rational form of the atom when its (adjusted) argument is m/L phases,
    expressed in zeta = exp(phase/L)."""
    zp = RationalForm.zeta_power
    half = GaussianRational.coerce("1/2")
    if fname == "exp":
        return zp(m)
    if fname in ("tanh", "tan"):
        num = zp(2 * m) - zp(0)
        den_form = zp(2 * m) + zp(0)
        out = num * den_form.inverse()
        return out * (-I) if fname == "tan" else out
    if fname in ("coth", "cot"):
        num = zp(2 * m) + zp(0)
        den_form = zp(2 * m) - zp(0)
        out = num * den_form.inverse()
        return out * I if fname == "cot" else out
    if fname in ("sinh", "sin"):
        out = (zp(m) - zp(-m)) * half
        return out * (-I) if fname == "sin" else out
    if fname in ("cosh", "cos"):
        return (zp(m) + zp(-m)) * half
    raise NormalFormError(f"no exponential form for {fname}")


def rational_form(e: Expr, phase: Expr, wave_vars=None) -> RationalForm:
    """Rewrite e as an exact rational function of zeta = exp(phase/L).

    L is the least common denominator of the phase multiples occurring in
    the function atoms (1 in all the flows this package derives).
    """
    if phase.is_zero():
        raise NormalFormError("phase must be nonzero")
    if wave_vars is None:
        wave_vars = tuple(s for s in phase.symbols() if s in WAVE_VARS)
    if not wave_vars:
        raise NormalFormError("phase contains no wave variable")

    # top-level atoms and their phase multiples
    fn_atoms: dict = {}
    for mono in e.terms:
        for atom, _ in mono:
            if isinstance(atom, FnAtom) and atom not in fn_atoms:
                fn_atoms[atom] = _atom_exponent(atom, phase)

    L = 1
    for c in fn_atoms.values():
        L = _lcm(L, int(c.re.denominator))

    forms: dict = {}
    for atom, c in fn_atoms.items():
        m_num = int(c.re.numerator) * (L // int(c.re.denominator))
        forms[atom] = _atom_form(atom.fname, m_num)

    def atom_rf(atom) -> RationalForm:
        if isinstance(atom, SymAtom):
            if atom.name in wave_vars:
                raise NormalFormError(
                    f"wave variable {atom.name} occurs outside function atoms")
            return RationalForm.scalar(MultiPoly.var(atom.name))
        if isinstance(atom, FnAtom):
            return forms[atom]
        return rational_form(atom.base, phase, wave_vars).inverse()

    cache: dict = {}
    total = RationalForm.scalar(ZERO)
    for mono, coeff in e.terms.items():
        term = RationalForm.scalar(coeff)
        for atom, exponent in mono:
            key = (atom, exponent)
            if key not in cache:
                if atom not in cache:
                    cache[atom] = atom_rf(atom)
                cache[key] = cache[atom] ** exponent
            term = term * cache[key]
        total = total + term
    return total.canonical()


def exponential_normal_form(e: Expr, var: str, frequency: Expr) -> RationalForm:
    """Normal form with phase = frequency * var (zeta = exp(frequency*var))."""
    return rational_form(e, frequency * Expr.sym(var), wave_vars=(var,))


def laurent_collect(r: RationalForm, nonzero=(), nonzero_groups=()) -> PolySystem:
    """One equation per nonzero zeta-power coefficient of the numerator,
    deduplicated up to unit scaling."""
    coeffs = []
    powers = []
    for m in sorted(r.num.coeffs):
        coeffs.append(r.num.coeffs[m])
        powers.append(m)
    return PolySystem.from_coefficients(coeffs, powers,
                                        nonzero=nonzero,
                                        nonzero_groups=nonzero_groups)

"""Exact arithmetic over the Gaussian rationals Q(i).

Every coefficient in this package is a GaussianRational: a pair of exact
rationals (re, im) representing re + im*i.  Rational parts are backed by
gmpy2.mpq when available (much faster gcd), falling back to
fractions.Fraction.  Both backends keep numerator/denominator coprime with
positive denominator, so values are always canonical and equality is
structural.
"""

from __future__ import annotations

from typing import Union

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _Q

RationalLike = Union[int, str, "GaussianRational"]


def rational(num, den=None):
    """Exact rational from an int, a "p/q" string, or a pair."""
    if den is None:
        return _Q(num)
    return _Q(num) / _Q(den)


class GaussianRational:
    """An element re + im*i of Q(i), immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(_Q(0)) else _Q(re))
        object.__setattr__(self, "im", im if type(im) is type(_Q(0)) else _Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def coerce(value: RationalLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, str)):
            return GaussianRational(_Q(value))
        if type(value) is type(_Q(0)):
            return GaussianRational(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_rational_int(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _try_coerce(value):
        try:
            return GaussianRational.coerce(value)
        except TypeError:
            return None

    def __add__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = GaussianRational._try_coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an int")
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, str)) or type(other) is type(_Q(0)):
            other = GaussianRational.coerce(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def sort_key(self):
        """Total order key for deterministic output (not a field order)."""
        return (self.re, self.im)

    # -- conversion / display -------------------------------------------------

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        def frac(q):
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

        if not self.im:
            return frac(self.re)
        if not self.re:
            if self.im == 1:
                return "I"
            if self.im == -1:
                return "-I"
            return f"{frac(self.im)}*I"
        im = self.im
        sign = "+" if im > 0 else "-"
        im_abs = im if im > 0 else -im
        im_str = "I" if im_abs == 1 else f"{frac(im_abs)}*I"
        return f"{frac(self.re)}{sign}{im_str}"

    def __repr__(self):
        return f"GaussianRational({self})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def parse_rational(text: str) -> GaussianRational:
    """Parse "p/q", "I", "-I", "p/q*I" or "a+b*I" style exact constants."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty rational literal")
    # split a+b*I / a-b*I at the last top-level +/- (no parentheses allowed)
    for k in range(len(s) - 1, 0, -1):
        if s[k] in "+-" and s[k - 1] not in "+-/*":
            left, right = s[:k], s[k:]
            if "I" in right and "I" not in left:
                return parse_rational(left) + parse_rational(right)
    if s.endswith("I"):
        body = s[:-1].rstrip("*")
        if body in ("", "+"):
            return I
        if body == "-":
            return -I
        return GaussianRational(0, _Q(body))
    return GaussianRational(_Q(s))

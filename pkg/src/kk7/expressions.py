"""Symbolic expression trees with exact differentiation.

An Expr is kept in a canonical "sum of products of atom powers" form: a map
from monomials (sorted tuples of (atom, integer exponent)) to GaussianRational
coefficients.  Atoms are plain symbols, function applications (exp and the
hyperbolic/trigonometric family, with arguments linear in the wave
variables), or formal reciprocals of multi-term sums.  Construction always
canonicalizes: sums and products are flattened, constants folded, equal atoms
merged.  Structural equality on this form is a sound zero test for the atom
class we use; the complete test lives in the exponential normal form.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional, Union

from .rationals import GaussianRational, I, ONE, ZERO

FUNCTIONS = ("exp", "tanh", "coth", "sinh", "cosh", "tan", "cot", "sin", "cos")

# function atoms that vanish / equal one at argument zero
_ZERO_AT_0 = {"tanh", "sinh", "tan", "sin"}
_ONE_AT_0 = {"exp", "cosh", "cos"}
_POLE_AT_0 = {"coth", "cot"}

Scalar = Union[int, GaussianRational]


def _coerce_coeff(value) -> GaussianRational:
    return value if isinstance(value, GaussianRational) else GaussianRational.coerce(value)


class Atom:
    """Base of the three atom kinds; atoms are immutable and totally ordered."""

    __slots__ = ("_key",)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Atom) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key


class SymAtom(Atom):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_key", (0, name))

    def __repr__(self):
        return self.name


class FnAtom(Atom):
    __slots__ = ("fname", "arg")

    def __init__(self, fname: str, arg: "Expr"):
        if fname not in FUNCTIONS:
            raise ValueError(f"unknown function {fname!r}")
        object.__setattr__(self, "fname", fname)
        object.__setattr__(self, "arg", arg)
        object.__setattr__(self, "_key", (1, fname, arg.key))

    def __repr__(self):
        return f"{self.fname}({self.arg})"


class InvAtom(Atom):
    """Formal reciprocal of a canonical multi-term sum with unit leading coeff."""

    __slots__ = ("base",)

    def __init__(self, base: "Expr"):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_key", (2, base.key))

    def __repr__(self):
        return f"1/({self.base})"


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    acc: dict = {}
    for atom, e in m1:
        acc[atom] = acc.get(atom, 0) + e
    for atom, e in m2:
        acc[atom] = acc.get(atom, 0) + e
    return tuple(sorted(((a, e) for a, e in acc.items() if e), key=lambda ae: ae[0].key))


class Expr:
    """Canonical symbolic expression over Q(i)."""

    __slots__ = ("terms", "_key_cache")

    def __init__(self, terms: dict):
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self._key_cache = None

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def const(value) -> "Expr":
        c = _coerce_coeff(value)
        if c.is_zero():
            return Expr({})
        return Expr({(): c})

    @staticmethod
    def sym(name: str) -> "Expr":
        return Expr({((SymAtom(name), 1),): ONE})

    @staticmethod
    def fn(fname: str, arg: "Expr") -> "Expr":
        if arg.is_zero():
            if fname in _ZERO_AT_0:
                return Expr({})
            if fname in _ONE_AT_0:
                return Expr.const(ONE)
            # coth/cot at zero: keep the atom, poles surface during evaluation
        return Expr({((FnAtom(fname, arg), 1),): ONE})

    @staticmethod
    def from_atom(atom: Atom, exponent: int = 1) -> "Expr":
        if exponent == 0:
            return Expr.const(ONE)
        return Expr({((atom, exponent),): ONE})

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError("not a constant expression")
        return self.terms[()]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- canonical key, equality ----------------------------------------------

    @property
    def key(self):
        if self._key_cache is None:
            items = []
            for mono, c in self.terms.items():
                mk = tuple((a.key, e) for a, e in mono)
                ck = (int(c.re.numerator), int(c.re.denominator),
                      int(c.im.numerator), int(c.im.denominator))
                items.append((mk, ck))
            self._key_cache = tuple(sorted(items))
        return self._key_cache

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = Expr.const(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, ZERO) + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return Expr(terms)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = Expr.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            c = _coerce_coeff(other)
            if c.is_zero():
                return Expr({})
            return Expr({m: k * c for m, k in self.terms.items()})
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = terms.get(m, ZERO) + c1 * c2
                if s.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Expr(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("expression powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        out = Expr.const(ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self * _coerce_coeff(other).inverse()
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Expr.const(other) * self.inverse() if isinstance(other, (int, GaussianRational)) \
            else other * self.inverse()

    def inverse(self) -> "Expr":
        """Exact reciprocal: monomials invert termwise, sums become inv atoms."""
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero expression")
        if len(self.terms) == 1:
            [(mono, c)] = self.terms.items()
            out = Expr.const(c.inverse())
            for atom, e in mono:
                if isinstance(atom, InvAtom):
                    out = out * atom.base ** e
                else:
                    out = out * Expr.from_atom(atom, -e)
            return out
        # factor out the common monomial content and the leading coefficient
        content = _common_content(self.terms)
        reduced = self
        if content:
            inv_content = Expr({tuple((a, -e) for a, e in content): ONE})
            reduced = self * inv_content
        lead_mono = max(reduced.terms, key=_mono_key)
        lc = reduced.terms[lead_mono]
        base = reduced * lc.inverse() if not lc.is_one() else reduced
        out = Expr({((InvAtom(base), 1),): lc.inverse()})
        if content:
            out = out * Expr({tuple((a, -e) for a, e in content): ONE})
        return out

    # -- structure access ----------------------------------------------------------

    def atoms(self) -> Iterator[Atom]:
        """All atoms, including those nested in arguments and inv bases."""
        seen = set()
        stack = [self]
        while stack:
            e = stack.pop()
            for mono in e.terms:
                for atom, _ in mono:
                    if atom in seen:
                        continue
                    seen.add(atom)
                    yield atom
                    if isinstance(atom, FnAtom):
                        stack.append(atom.arg)
                    elif isinstance(atom, InvAtom):
                        stack.append(atom.base)

    def symbols(self) -> set:
        return {a.name for a in self.atoms() if isinstance(a, SymAtom)}

    def contains_symbol(self, name: str) -> bool:
        return any(isinstance(a, SymAtom) and a.name == name for a in self.atoms())

    def coefficient_of_symbol(self, name: str) -> "Expr":
        """Coefficient of a symbol occurring linearly at top level."""
        target = SymAtom(name)
        out: dict = {}
        for mono, c in self.terms.items():
            for atom, e in mono:
                if atom == target:
                    if e != 1:
                        raise ValueError(f"{name} occurs nonlinearly")
                    rest = tuple((a, k) for a, k in mono if a != target)
                    out[rest] = out.get(rest, ZERO) + c
                    break
        return Expr(out)

    def drop_symbol_terms(self, name: str) -> "Expr":
        """Terms free of the given top-level symbol."""
        target = SymAtom(name)
        return Expr({m: c for m, c in self.terms.items()
                     if all(a != target for a, _ in m)})

    # -- substitution ------------------------------------------------------------

    def subs(self, bindings: dict) -> "Expr":
        """Simultaneous substitution of symbol names by expressions/scalars."""
        if not bindings:
            return self
        binds = {k: (v if isinstance(v, Expr) else Expr.const(v)) for k, v in bindings.items()}

        def sub_atom(atom: Atom) -> Expr:
            if isinstance(atom, SymAtom):
                return binds.get(atom.name, Expr.from_atom(atom))
            if isinstance(atom, FnAtom):
                return Expr.fn(atom.fname, atom.arg.subs(binds))
            return atom.base.subs(binds).inverse()

        return self.map_atoms(sub_atom)

    def map_atoms(self, mapper: Callable[[Atom], "Expr"]) -> "Expr":
        """Rebuild the expression with each atom replaced by mapper(atom)."""
        out = Expr({})
        cache: dict = {}
        for mono, c in self.terms.items():
            term = Expr.const(c)
            for atom, e in mono:
                if atom not in cache:
                    cache[atom] = mapper(atom)
                term = term * cache[atom] ** e
            out = out + term
        return out

    # -- differentiation ------------------------------------------------------------

    def diff(self, var: str) -> "Expr":
        dvar = SymAtom(var)
        datom: dict = {}

        def atom_derivative(atom: Atom) -> Expr:
            if atom in datom:
                return datom[atom]
            if isinstance(atom, SymAtom):
                d = Expr.const(1) if atom == dvar else Expr({})
            elif isinstance(atom, FnAtom):
                darg = atom.arg.diff(var)
                if darg.is_zero():
                    d = Expr({})
                else:
                    if darg.contains_symbol(var):
                        raise ValueError(
                            f"argument of {atom.fname} is not linear in {var}")
                    f = Expr.from_atom(atom)
                    rules = {
                        "exp": f,
                        "tanh": 1 - f * f,
                        "coth": 1 - f * f,
                        "sinh": Expr.fn("cosh", atom.arg),
                        "cosh": Expr.fn("sinh", atom.arg),
                        "tan": 1 + f * f,
                        "cot": -1 - f * f,
                        "sin": Expr.fn("cos", atom.arg),
                        "cos": -Expr.fn("sin", atom.arg),
                    }
                    d = darg * rules[atom.fname]
            else:
                dbase = atom.base.diff(var)
                d = Expr({}) if dbase.is_zero() else \
                    -Expr.from_atom(atom, 2) * dbase
            datom[atom] = d
            return d

        out = Expr({})
        for mono, c in self.terms.items():
            for i, (atom, e) in enumerate(mono):
                d = atom_derivative(atom)
                if d.is_zero():
                    continue
                if e == 1:
                    rest = mono[:i] + mono[i + 1:]
                else:
                    rest = mono[:i] + ((atom, e - 1),) + mono[i + 1:]
                partial = Expr({rest: c * e})
                out = out + partial * d
        return out

    # -- numeric evaluation ------------------------------------------------------------

    def eval_mp(self, env: dict, mp_module):
        """Evaluate with mpmath numbers; env maps symbol names to mp values."""
        mpm = mp_module
        fns = {"exp": mpm.exp, "tanh": mpm.tanh, "coth": mpm.coth, "sinh": mpm.sinh,
               "cosh": mpm.cosh, "tan": mpm.tan, "cot": mpm.cot, "sin": mpm.sin,
               "cos": mpm.cos}
        cache: dict = {}

        def atom_value(atom: Atom):
            if atom in cache:
                return cache[atom]
            if isinstance(atom, SymAtom):
                v = env[atom.name]
            elif isinstance(atom, FnAtom):
                v = fns[atom.fname](atom.arg.eval_mp(env, mpm))
            else:
                v = 1 / atom.base.eval_mp(env, mpm)
            cache[atom] = v
            return v

        def coeff_value(c: GaussianRational):
            re = mpm.mpf(int(c.re.numerator)) / int(c.re.denominator)
            if c.is_real():
                return re
            im = mpm.mpf(int(c.im.numerator)) / int(c.im.denominator)
            return mpm.mpc(re, im)

        total = mpm.mpf(0)
        for mono, c in self.terms.items():
            val = coeff_value(c)
            for atom, e in mono:
                val = val * atom_value(atom) ** e
            total = total + val
        return total

    def eval_np(self, env: dict):
        """Evaluate with numpy arrays/floats (double precision)."""
        import numpy as np

        fns = {"exp": np.exp, "tanh": np.tanh, "coth": lambda z: 1.0 / np.tanh(z),
               "sinh": np.sinh, "cosh": np.cosh, "tan": np.tan,
               "cot": lambda z: 1.0 / np.tan(z), "sin": np.sin, "cos": np.cos}
        cache: dict = {}

        def atom_value(atom: Atom):
            if atom in cache:
                return cache[atom]
            if isinstance(atom, SymAtom):
                v = env[atom.name]
            elif isinstance(atom, FnAtom):
                v = fns[atom.fname](atom.arg.eval_np(env))
            else:
                v = 1.0 / atom.base.eval_np(env)
            cache[atom] = v
            return v

        total = 0.0
        for mono, c in self.terms.items():
            val = c.to_complex() if not c.is_real() else float(c.re)
            for atom, e in mono:
                val = val * atom_value(atom) ** e
            total = total + val
        return total

    def denominator_guards(self) -> Iterator:
        """Atoms whose evaluation needs a nonzero quantity: (kind, expr) pairs.

        kind 'inv' guards |base|, otherwise the named function of the
        argument must stay away from zero (sinh for coth, sin for cot,
        cos for tan).
        """
        for atom in self.atoms():
            if isinstance(atom, InvAtom):
                yield ("inv", atom.base)
            elif isinstance(atom, FnAtom):
                if atom.fname == "coth":
                    yield ("sinh", atom.arg)
                elif atom.fname == "cot":
                    yield ("sin", atom.arg)
                elif atom.fname == "tan":
                    yield ("cos", atom.arg)

    # -- linear-form helpers ------------------------------------------------------------

    def scalar_ratio(self, other: "Expr") -> Optional[GaussianRational]:
        """c with self == c * other, or None."""
        if other.is_zero():
            return ZERO if self.is_zero() else None
        if self.is_zero():
            return ZERO
        mono = max(other.terms, key=_mono_key)
        if mono not in self.terms:
            return None
        c = self.terms[mono] / other.terms[mono]
        return c if (self - other * c).is_zero() else None

    # -- display ------------------------------------------------------------

    def serialize(self) -> str:
        """Canonical prefix-notation text; exact rationals, I for sqrt(-1)."""
        def atom_text(atom: Atom) -> str:
            if isinstance(atom, SymAtom):
                return atom.name
            if isinstance(atom, FnAtom):
                return f"({atom.fname} {atom.arg.serialize()})"
            return f"(inv {atom.base.serialize()})"

        def mono_text(mono: tuple, c: GaussianRational) -> str:
            factors = []
            if not c.is_one() or not mono:
                factors.append(str(c))
            for atom, e in mono:
                at = atom_text(atom)
                factors.append(at if e == 1 else f"(^ {at} {e})")
            if len(factors) == 1:
                return factors[0]
            return "(* " + " ".join(factors) + ")"

        if not self.terms:
            return "0"
        parts = [mono_text(m, c) for m, c in
                 sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]), reverse=True)]
        if len(parts) == 1:
            return parts[0]
        return "(+ " + " ".join(parts) + ")"

    def __str__(self):
        return self.serialize()

    def __repr__(self):
        return f"Expr[{self.serialize()}]"


def _mono_key(mono: tuple):
    return tuple((a.key, e) for a, e in mono)


def _common_content(terms: dict) -> tuple:
    """Common atom-power factor across all monomials (exponent-wise minimum)."""
    monos = list(terms)
    atoms = set()
    for m in monos:
        atoms.update(a for a, _ in m)
    content = []
    for atom in sorted(atoms, key=lambda a: a.key):
        exps = []
        for m in monos:
            e = 0
            for a, k in m:
                if a == atom:
                    e = k
                    break
            exps.append(e)
        lo = min(exps)
        if lo != 0 and all(e != 0 for e in exps) or lo < 0:
            # factor only when every term carries the atom, or exponents dip
            # negative (then factoring keeps inv-base exponents nonnegative)
            content.append((atom, lo))
    return tuple(content)


def differentiate(e: Expr, var: str, order: int = 1) -> Expr:
    """Exact derivative of given order with respect to var."""
    if order < 1:
        raise ValueError("derivative order must be a positive integer")
    out = e
    for _ in range(order):
        out = out.diff(var)
    return out


def substitute(e: Expr, bindings: dict) -> Expr:
    """Simultaneous substitution followed by canonicalization."""
    return e.subs(bindings)

"""Polynomial systems produced by coefficient extraction.

A PolySystem is the algebraic content of "equate every zeta-power coefficient
to zero": a deduplicated list of MultiPoly equations (each normalized to unit
leading coefficient), the zeta powers each equation came from, and the
nondegeneracy side conditions the ansatz imposes (single polynomials that
must not vanish, and groups of amplitudes that must not vanish together).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .polynomials import MultiPoly, merge_vars


def poly_sort_key(p: MultiPoly):
    """Deterministic structural sort key for normalized polynomials."""
    q = p.restrict_vars()
    terms = []
    for exp, c in q.terms.items():
        terms.append((exp, (int(c.re.numerator), int(c.re.denominator),
                            int(c.im.numerator), int(c.im.denominator))))
    return (q.total_degree(), len(q.terms), q.vars, tuple(sorted(terms)))


@dataclass
class PolySystem:
    equations: list = field(default_factory=list)
    powers: list = field(default_factory=list)          # zeta powers per equation
    nonzero: list = field(default_factory=list)          # each poly must be != 0
    nonzero_groups: list = field(default_factory=list)   # per group: not all zero
    removed_factors: list = field(default_factory=list)  # divided out by saturation

    @staticmethod
    def from_coefficients(coeffs: Sequence, powers: Sequence[int],
                          nonzero=(), nonzero_groups=()) -> "PolySystem":
        """Build from raw (equation, power) pairs, deduplicating up to units."""
        merged: dict = {}
        order: list = []
        for p, w in zip(coeffs, powers):
            if p.is_zero():
                continue
            norm = p.content_normalize().restrict_vars()
            if norm in merged:
                merged[norm].append(w)
            else:
                merged[norm] = [w]
                order.append(norm)
        order.sort(key=poly_sort_key)
        return PolySystem(
            equations=order,
            powers=[tuple(sorted(merged[p])) for p in order],
            nonzero=list(nonzero),
            nonzero_groups=[tuple(g) for g in nonzero_groups],
        )

    def variables(self) -> tuple:
        vs: tuple = ()
        for p in self.equations:
            vs = merge_vars(vs, p.variables_used())
        return vs

    def substitute(self, bindings: dict) -> "PolySystem":
        """Substitute into equations and constraints, re-normalizing."""
        eqs = []
        pws = []
        for p, w in zip(self.equations, self.powers):
            q = p.substitute(bindings)
            eqs.append(q)
            pws.append(w)
        sub = PolySystem.from_coefficients(
            eqs, [w[0] if w else 0 for w in pws],
            nonzero=[g.substitute(bindings) for g in self.nonzero],
            nonzero_groups=[tuple(v for v in g if v not in bindings)
                            for g in self.nonzero_groups],
        )
        sub.nonzero = [g for g in sub.nonzero if not g.is_constant() or g.is_zero()]
        sub.nonzero_groups = [g for g in sub.nonzero_groups if g]
        sub.removed_factors = list(self.removed_factors)
        return sub

    def is_weighted_homogeneous(self, weights: dict) -> bool:
        return all(p.is_weighted_homogeneous(weights) is not None
                   for p in self.equations)

    def __str__(self):
        lines = []
        for p, w in zip(self.equations, self.powers):
            lines.append(f"[zeta^{','.join(map(str, w))}]  {p} = 0")
        for g in self.nonzero:
            lines.append(f"  with {g} != 0")
        for grp in self.nonzero_groups:
            lines.append(f"  with ({', '.join(grp)}) not all zero")
        return "\n".join(lines) if lines else "(empty system)"

"""The three trial-solution families and the coefficient-matching systems.

build_ansatz materializes a family as an explicit expression (the Cole-Hopf
log-derivative is expanded, so no log node exists); derive_system substitutes
it into the PDE or traveling-wave ODE, rewrites the residual as a rational
function of zeta, clears denominators, and collects one polynomial equation
per zeta power, attaching the family's nondegeneracy conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .expressions import Expr, FnAtom
from .model import TravelingWaveOde, substitute_into_pde
from .normalform import NormalFormError, laurent_collect, rational_form
from .polynomials import MultiPoly
from .systems import PolySystem

FAMILIES = ("cole-hopf", "tanh-coth", "sinh-cosh")


@dataclass(frozen=True)
class AnsatzSpec:
    """One of the three families with its unknown/scale symbol conventions."""

    family: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown ansatz family {self.family!r}")

    @property
    def unknowns(self) -> tuple:
        return {
            "cole-hopf": ("A", "B", "omega"),
            "tanh-coth": ("a", "b", "c", "d", "p", "lam"),
            "sinh-cosh": ("c", "d", "kappa", "p", "lam"),
        }[self.family]

    @property
    def scale(self) -> str:
        """The symbol carrying the scaling freedom (wave number / frequency)."""
        return "k" if self.family == "cole-hopf" else "mu"

    @property
    def weights(self) -> dict:
        """Weight table rendering every derived equation weighted-homogeneous.

        The scaling u -> s^2 u(sx, s^7 t) gives amplitudes weight 2, the
        wave number weight 1, the ODE speed weight 6 and the exponential
        speed weight 7; the dimensionless sinh-cosh shape parameters c, d
        have weight 0.
        """
        if self.family == "cole-hopf":
            return {"A": 0, "B": 2, "omega": 7, "k": 1}
        if self.family == "tanh-coth":
            return {"a": 2, "b": 2, "c": 2, "d": 2, "p": 2, "lam": 6, "mu": 1}
        return {"c": 0, "d": 0, "kappa": 2, "p": 2, "lam": 6, "mu": 1}

    def nondegeneracy(self):
        """(nonzero polynomials, not-all-zero groups) for derive_system."""
        if self.family == "cole-hopf":
            return [MultiPoly.var("A"), MultiPoly.var("k")], []
        if self.family == "tanh-coth":
            return [MultiPoly.var("mu")], [("a", "b", "c", "d")]
        return [MultiPoly.var("mu"), MultiPoly.var("kappa")], [("c", "d")]


def build_ansatz(spec: AnsatzSpec) -> Expr:
    """Materialize the trial solution of the given family."""
    s = Expr.sym
    if spec.family == "cole-hopf":
        theta = s("k") * s("x") - s("omega") * s("t") + s("delta")
        bump = Expr.fn("exp", theta)
        # A * d^2/dx^2 log(1 + exp(theta)) + B, with the derivative expanded:
        # the second log-derivative is k^2 * exp / (1 + exp)^2.
        return s("A") * s("k") ** 2 * bump * (1 + bump).inverse() ** 2 + s("B")
    xi = s("mu") * s("xi")
    if spec.family == "tanh-coth":
        tanh, coth = Expr.fn("tanh", xi), Expr.fn("coth", xi)
        return (s("p") + s("a") * tanh + s("b") * coth
                + s("c") * tanh ** 2 + s("d") * coth ** 2)
    sinh, cosh = Expr.fn("sinh", xi), Expr.fn("cosh", xi)
    return s("p") + s("kappa") * (1 + s("c") * sinh + s("d") * cosh).inverse()


def _phase_of(ansatz: Expr) -> Expr:
    args = sorted((a.arg for a in ansatz.atoms() if isinstance(a, FnAtom)),
                  key=lambda e: e.key)
    if not args:
        raise NormalFormError("ansatz contains no wave atoms")
    return args[0]


def derive_system(equation: Union[Expr, TravelingWaveOde],
                  ansatz: Union[Expr, AnsatzSpec],
                  frequency: Optional[Expr] = None,
                  spec: Optional[AnsatzSpec] = None) -> PolySystem:
    """Substitute the ansatz and collect the zeta-coefficient system.

    equation: a PDE residual in jet symbols, or a TravelingWaveOde.
    ansatz: an explicit expression, or an AnsatzSpec to be built here.
    frequency: phase frequency (ODE route; defaults to the ansatz's own);
        ignored for the PDE route, where the full exponential phase is read
        off the ansatz.
    """
    if isinstance(ansatz, AnsatzSpec):
        spec = ansatz
        ansatz = build_ansatz(spec)
    if ansatz.is_zero():
        raise ValueError("empty ansatz")

    if isinstance(equation, TravelingWaveOde):
        residual = equation.substitute_profile(ansatz)
        phase = frequency * Expr.sym("xi") if frequency is not None else _phase_of(ansatz)
    else:
        residual = substitute_into_pde(equation, ansatz)
        phase = _phase_of(ansatz)

    if residual.is_zero():
        return PolySystem.from_coefficients([], [])

    form = rational_form(residual, phase)
    nonzero, groups = spec.nondegeneracy() if spec is not None else ([], [])
    return laurent_collect(form, nonzero=nonzero, nonzero_groups=groups)

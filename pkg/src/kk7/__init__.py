"""Exact traveling-wave solution engine for the seventh-order KdV family.

Derives, solves, and certifies closed-form solutions of the seventh-order
Kaup-Kupershmidt equation (and the other KdV7 presets) by Cole-Hopf and
hyperbolic-ansatz coefficient matching, entirely in exact Q(i) arithmetic,
and validates solitons with a periodic pseudo-spectral integrator.
"""

from .rationals import GaussianRational, I, ONE, ZERO, rational
from .polynomials import LaurentPoly, MultiPoly, divide, parse_poly, poly_reduce
from .expressions import Expr, differentiate
from .model import PdeCoefficients, build_pde, flux_decompose, preset, reduce_to_traveling_ode
from .ansatz import AnsatzSpec, build_ansatz, derive_system
from .systems import PolySystem
from .solver import SolutionVariety, groebner, saturate, solve_variety, weight_rescale
from .catalog import ClosedFormSolution, catalog
from .verify import equivalence_check, numeric_residual, periodic_continue, symbolic_residual

__all__ = [
    "GaussianRational", "I", "ONE", "ZERO", "rational",
    "LaurentPoly", "MultiPoly", "divide", "parse_poly", "poly_reduce",
    "Expr", "differentiate",
    "PdeCoefficients", "build_pde", "flux_decompose", "preset", "reduce_to_traveling_ode",
    "AnsatzSpec", "build_ansatz", "derive_system",
    "PolySystem",
    "SolutionVariety", "groebner", "saturate", "solve_variety", "weight_rescale",
    "ClosedFormSolution", "catalog",
    "equivalence_check", "numeric_residual", "periodic_continue", "symbolic_residual",
]

__version__ = "0.1.0"

"""Exact center conditions and Lyapunov constants for uniformly isochronous
planar quintic systems, with Darboux-structure verifiers and a floating-point
orbit layer."""

from .qpoly import Poly, RationalFunction, parse_expr
from .lyapunov import PlanarSystem, pl_constants, first_nonzero
from .quintic import QuinticParams, build_system, classify, theorem_case

__all__ = [
    "Poly", "RationalFunction", "parse_expr",
    "PlanarSystem", "pl_constants", "first_nonzero",
    "QuinticParams", "build_system", "classify", "theorem_case",
]

__version__ = "0.1.0"

"""Exact polynomial Poisson and symplectic geometry on symplectic Lie groups.

A symplectic Lie algebra ``(g, omega)`` determines a global affine chart in
which the Poisson matrix is affine in the coordinates.  This package builds
that chart exactly over the rationals and computes the invariant tensors
living in it.
"""

from .affinechart import (
    ChartModel,
    NonUnimodularError,
    build_chart,
    poisson_bracket,
    symplectic_form,
    symplectic_matrix,
)
from .liealgebra import StructureConstants, TwoCocycle, analyze
from .polycore import PolyMatrix, Polynomial
from .tensorcalc import PolyForm, PolyMultiVector

__all__ = [
    "ChartModel",
    "NonUnimodularError",
    "PolyForm",
    "PolyMatrix",
    "PolyMultiVector",
    "Polynomial",
    "StructureConstants",
    "TwoCocycle",
    "analyze",
    "build_chart",
    "poisson_bracket",
    "symplectic_form",
    "symplectic_matrix",
]

__version__ = "0.1.0"

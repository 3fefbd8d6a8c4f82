"""Hierarchical H(div)-conforming bases on reference elements.

Bases are built as exact rational polynomial vector fields on the unit
square, unit cube, unit triangle and unit tetrahedron.  The package checks
their algebraic properties exactly, assembles mass and stiffness matrices,
and computes condition numbers.
"""

__version__ = "0.1.0"

from .assembly import (  # noqa: E402
    CondReport,
    condition_number,
    eigenvalues,
    mass_condition,
    mass_matrix,
    quadrature,
    stiffness_condition,
    stiffness_matrix,
)
from .basis import BasisFunction, BasisSet  # noqa: E402
from .basis_tet import Variant, degeneracy_certificate  # noqa: E402
from .checks import build  # noqa: E402
from .divfree import DiscreteField, augment, bubble_for, divergence_norm  # noqa: E402
from .kinds import ElementKind  # noqa: E402
from .polyalgebra import MPoly, VectorField  # noqa: E402

__all__ = [
    "BasisFunction",
    "BasisSet",
    "CondReport",
    "DiscreteField",
    "ElementKind",
    "MPoly",
    "Variant",
    "VectorField",
    "augment",
    "bubble_for",
    "build",
    "condition_number",
    "degeneracy_certificate",
    "divergence_norm",
    "eigenvalues",
    "mass_condition",
    "mass_matrix",
    "quadrature",
    "stiffness_condition",
    "stiffness_matrix",
]

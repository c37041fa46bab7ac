"""Ridgelet analysis and finite-network synthesis on noncompact symmetric spaces.

Submodules
----------
spaces
    Space descriptors, points and quadrature grids.
hyperbolic
    Poincare ball and SU(1,1) disk geometry.
spd
    Geometry and harmonic analysis constants of SPD matrices.
fourier
    Helgason-Fourier transform, inversion and Plancherel checks.
profiles
    One-dimensional activation and ridgelet profiles.
ridgelet
    Scalar product, ridgelet transform and continuous networks.
synthesis
    Constructive finite networks and convergence sweeps.
cli
    Batch experiment runner (``python3 -m symridge``).
"""
from .errors import (ConfigurationError, DecompositionError, DegeneratePairError, DomainError,
                     EvaluationError, SymRidgeError)
from .spaces import (BoundaryPoint, ManifoldPoint, QuadratureGrid, SpaceDescriptor, ball_grid,
                     boundary_grid, euclidean_grid, frequency_grid, space_descriptor, spd_grid)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "SymRidgeError",
    "ConfigurationError",
    "DomainError",
    "DecompositionError",
    "EvaluationError",
    "DegeneratePairError",
    "SpaceDescriptor",
    "ManifoldPoint",
    "BoundaryPoint",
    "QuadratureGrid",
    "space_descriptor",
    "boundary_grid",
    "frequency_grid",
    "ball_grid",
    "euclidean_grid",
    "spd_grid",
]

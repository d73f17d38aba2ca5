"""
Numerical calculus helpers
Quadrature grids, compactly supported test functions, finite differences and sample clouds
"""

from .differencing import (
    central_difference,
    convergence_order,
    fd_jacobian,
    five_point_laplacian,
    relative_error,
    richardson_difference,
)
from .quadrature import (
    QuadratureGrid,
    ScaledIntegrals,
    integrate,
    log_weighted_integral,
    scaled_weighted_integrals,
)
from .sampling import SampleCloud, half_space_samples, shell_samples, time_floor
from .test_functions import (
    BumpComponent,
    GaussianProfile,
    SpaceTimeJet,
    TestFunction,
    bump_profile,
    make_bump,
)

__all__ = [
    "central_difference",
    "convergence_order",
    "fd_jacobian",
    "five_point_laplacian",
    "relative_error",
    "richardson_difference",
    "QuadratureGrid",
    "ScaledIntegrals",
    "integrate",
    "log_weighted_integral",
    "scaled_weighted_integrals",
    "SampleCloud",
    "half_space_samples",
    "shell_samples",
    "time_floor",
    "BumpComponent",
    "GaussianProfile",
    "SpaceTimeJet",
    "TestFunction",
    "bump_profile",
    "make_bump",
]

"""
Integral identities
Quadrature checks of the weighted energy identities behind the Carleman estimates
"""

from .integral_identity import (
    SUPPORT_TIME_FLOOR,
    ConvergenceStudy,
    ExponentialProfile,
    IdentityResult,
    TimeProfile,
    exponential_profile,
    general_identity_residual,
    residual_convergence,
    weighted_identity_residual,
)

__all__ = [
    "SUPPORT_TIME_FLOOR",
    "ConvergenceStudy",
    "ExponentialProfile",
    "IdentityResult",
    "TimeProfile",
    "exponential_profile",
    "general_identity_residual",
    "residual_convergence",
    "weighted_identity_residual",
]

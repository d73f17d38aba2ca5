"""
Cutoff functions
Smooth transitions and the space-time cutoff used to localise the half-space argument
"""

from .cutoff import (
    CutoffJet,
    CutoffSpec,
    cutoff_samples,
    eta,
    time_singularity,
    verify_cutoff_derivative_bound,
    verify_omega_identity,
)
from .transitions import max_step_slope, ramp, smooth_step

__all__ = [
    "CutoffJet",
    "CutoffSpec",
    "cutoff_samples",
    "eta",
    "time_singularity",
    "verify_cutoff_derivative_bound",
    "verify_omega_identity",
    "max_step_slope",
    "ramp",
    "smooth_step",
]

"""
Carleman weights
Quadratic distance weight, default constants and the whole-space / half-space weights
"""

from .carleman_weights import (
    CarlemanWeight,
    HalfSpaceWeight,
    NormalProfile,
    PhaseJet,
    ScalarJet,
    WeightEval,
    WholeSpaceWeight,
    divergence_form_operator,
    f_gradient,
    f_hessian,
    f_time_derivative,
    f_value,
    half_space_weight_eval,
    heat_ratio,
    heat_weight_eval,
    make_weight,
    quadratic_form,
)
from .constants import ALPHA_FLOOR, DefaultConstants, critical_decay, default_constants
from .params import WeightParams, damping_exponent
from .psi import PsiJet, psi_eval, psi_value, radius_derivatives

__all__ = [
    "CarlemanWeight",
    "HalfSpaceWeight",
    "NormalProfile",
    "PhaseJet",
    "ScalarJet",
    "WeightEval",
    "WholeSpaceWeight",
    "divergence_form_operator",
    "f_gradient",
    "f_hessian",
    "f_time_derivative",
    "f_value",
    "half_space_weight_eval",
    "heat_ratio",
    "heat_weight_eval",
    "make_weight",
    "quadratic_form",
    "ALPHA_FLOOR",
    "DefaultConstants",
    "critical_decay",
    "default_constants",
    "WeightParams",
    "damping_exponent",
    "PsiJet",
    "psi_eval",
    "psi_value",
    "radius_derivatives",
]

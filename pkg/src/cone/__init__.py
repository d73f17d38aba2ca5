"""
Cone coefficient fields
Sector pull-back matrices, their checks and the backward uniqueness thresholds
"""

from .checks import (
    BU_LOWER_THRESHOLD,
    BU_UPPER_THRESHOLD,
    critical_angle_degrees,
    gradient_bound_check,
    operator_equivalence_residual,
    threshold_classify,
)
from .construction import (
    ConeField,
    ConeParams,
    cone_matrix,
    cone_matrix_gradient,
    decay_matched_params,
    params_for_decay,
    shifted_field,
)

__all__ = [
    "BU_LOWER_THRESHOLD",
    "BU_UPPER_THRESHOLD",
    "critical_angle_degrees",
    "gradient_bound_check",
    "operator_equivalence_residual",
    "threshold_classify",
    "ConeField",
    "ConeParams",
    "cone_matrix",
    "cone_matrix_gradient",
    "decay_matched_params",
    "params_for_decay",
    "shifted_field",
]

"""
Weight estimates
Pointwise lower bounds for the Carleman weights, psi properties and d-calibration
"""

from .calibration import DEFAULT_D_GRID, CalibrationAttempt, CalibrationResult, calibrate_d
from .dg import dg_matrix, gradient_form
from .half_space import (
    JTerms,
    b_tilde,
    check_half_space_estimates,
    compute_j_terms,
    cubic_coefficient,
    direct_m2,
    matrix_margins,
    j_term_constants,
    needed_generic_constant,
    scalar_margins,
)
from .heat import check_heat_estimates, gradient_form_margins, zeroth_order_margins
from .psi_checks import check_psi_props, conormal_constant

__all__ = [
    "DEFAULT_D_GRID",
    "CalibrationAttempt",
    "CalibrationResult",
    "calibrate_d",
    "dg_matrix",
    "gradient_form",
    "JTerms",
    "b_tilde",
    "check_half_space_estimates",
    "compute_j_terms",
    "cubic_coefficient",
    "direct_m2",
    "matrix_margins",
    "needed_generic_constant",
    "j_term_constants",
    "scalar_margins",
    "check_heat_estimates",
    "gradient_form_margins",
    "zeroth_order_margins",
    "check_psi_props",
    "conormal_constant",
]

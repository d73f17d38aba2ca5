"""
Carleman inequalities
End-to-end checks of the whole-space and half-space Carleman inequalities on test functions
"""

from .inequalities import (
    DEFAULT_GAMMAS,
    TOL_ABS,
    TOL_REL,
    InequalityOutcome,
    check_half_space_inequality,
    check_whole_space_inequality,
    compare_sides,
    outcomes_report,
    refinement_ratios,
)

__all__ = [
    "DEFAULT_GAMMAS",
    "TOL_ABS",
    "TOL_REL",
    "InequalityOutcome",
    "check_half_space_inequality",
    "check_whole_space_inequality",
    "compare_sides",
    "outcomes_report",
    "refinement_ratios",
]

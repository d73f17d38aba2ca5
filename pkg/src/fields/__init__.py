"""
Coefficient fields
Field interface, concrete families and structural bound checks
"""

from .base import CoefficientField, CoefficientJet, eval_coefficients, take_rows
from .families import ConstantField, RadialPerturbationField
from .structure import entry_gradient_norms, verify_structure_bounds

__all__ = [
    "CoefficientField",
    "CoefficientJet",
    "eval_coefficients",
    "take_rows",
    "ConstantField",
    "RadialPerturbationField",
    "entry_gradient_norms",
    "verify_structure_bounds",
]

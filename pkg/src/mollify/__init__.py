"""
Mollification of coefficient fields
Bump kernel, convolution with derivatives and the inherited structural bounds
"""

from .kernel import MollifiedField, Mollifier, mollify_field
from .properties import hessian_constant, mollification_error, verify_mollify_props

__all__ = [
    "MollifiedField",
    "Mollifier",
    "mollify_field",
    "hessian_constant",
    "mollification_error",
    "verify_mollify_props",
]

"""
Services package
Field construction and suite orchestration
"""

from .field_factory import build_field
from .suite_runner import VerificationService

__all__ = ["build_field", "VerificationService"]

"""
Shared models for the verification lab
Enumerations, errors and the records exchanged between checks, services and storage
"""

from .enums import (
    DomainTag,
    FieldFamily,
    LogLevel,
    QuadratureRule,
    Suite,
    ThresholdVerdict,
    WeightVariant,
)
from .errors import (
    CalibrationError,
    ConfigurationError,
    DomainError,
    HypothesisViolationError,
    LabError,
    NumericalError,
)
from .shared import EllipticityBounds, MarginReport, MarginTrace, SuiteResult, stability_margin

__all__ = [
    "DomainTag",
    "FieldFamily",
    "LogLevel",
    "QuadratureRule",
    "Suite",
    "ThresholdVerdict",
    "WeightVariant",
    "CalibrationError",
    "ConfigurationError",
    "DomainError",
    "HypothesisViolationError",
    "LabError",
    "NumericalError",
    "EllipticityBounds",
    "MarginReport",
    "MarginTrace",
    "SuiteResult",
    "stability_margin",
]

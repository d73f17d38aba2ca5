"""
Lab Exceptions
Error hierarchy shared by the numerical modules, the services and the CLI
"""

from typing import Optional


class LabError(Exception):
    """Base class for verification-lab failures"""


class DomainError(LabError, ValueError):
    """A point lies outside the domain of a field, weight, cone map or kernel"""


class HypothesisViolationError(LabError):
    """A structural hypothesis of a check does not hold (e.g. E >= E0)"""


class CalibrationError(LabError):
    """No damping parameter passes, or an uncalibrated one was supplied"""

    def __init__(
        self,
        message: str,
        worst_margin: Optional[float] = None,
        worst_check: Optional[str] = None,
    ) -> None:
        super().__init__(message)
        self.worst_margin = worst_margin
        self.worst_check = worst_check


class ConfigurationError(LabError):
    """Malformed or inconsistent lab configuration"""


class NumericalError(LabError):
    """Floating point breakdown: negative non-negative integrands, NaN margins"""

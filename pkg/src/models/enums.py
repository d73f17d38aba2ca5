"""
Model Enumerations
Common enum types used throughout the verification lab
"""

from enum import Enum


class LogLevel(str, Enum):
    """Enumeration for logging levels"""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class DomainTag(str, Enum):
    """Space-time domains on which a coefficient field is defined"""
    WHOLE_SPACE = "whole_space_0_2"          # R^n x [0, 2]
    HALF_SPACE = "half_space_0_1"            # {x_n >= 0} x [0, 1]
    SHIFTED_HALF_SPACE = "shifted_half_space"  # {y_n >= 0}, time independent


class FieldFamily(str, Enum):
    """Coefficient field families the lab can build from configuration"""
    CONSTANT = "constant"
    CONE = "cone"
    RADIAL = "radial_perturbation"


class WeightVariant(str, Enum):
    """Carleman weight variants"""
    WHOLE_SPACE = "whole_space"
    HALF_SPACE = "half_space"


class QuadratureRule(str, Enum):
    """Tensor quadrature rules"""
    GAUSS_LEGENDRE = "gauss_legendre"
    MIDPOINT = "midpoint"


class ThresholdVerdict(str, Enum):
    """Backward uniqueness classification of a cone decay constant"""
    BU_HOLDS = "bu_holds"
    BU_FAILS = "bu_fails"
    INDETERMINATE = "indeterminate"


class Suite(str, Enum):
    """Check suites exposed on the command line"""
    PSI = "check-psi"
    MOLLIFY = "check-mollify"
    HEAT_ESTIMATES = "check-heat-estimates"
    HALF_SPACE_ESTIMATES = "check-half-space-estimates"
    IDENTITY = "check-identity"
    CARLEMAN = "check-carleman"
    CONE = "check-cone"
    CUTOFFS = "check-cutoffs"
    CALIBRATE = "calibrate-d"
    REPORT_ALL = "report-all"

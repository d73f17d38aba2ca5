"""
Verification Lab Configuration Package
YAML files mapped onto Pydantic models, with environment overrides

Public API:
    from .config import LabConfig, ConfigManager, LabSettings
"""

from .manager import DEFAULT_CONFIG_PATH, ConfigManager
from .models import (
    CalibrationSettings,
    CarlemanSettings,
    ConeSettings,
    CutoffSettings,
    FieldSettings,
    HalfSpaceEstimateSettings,
    HeatEstimateSettings,
    IdentitySettings,
    LabConfig,
    MollifySettings,
    PsiSettings,
    RuntimeSettings,
)
from .settings import LabSettings
from .validation import ConfigLoader, ConfigValidator

__all__ = [
    "LabConfig",
    "ConfigManager",
    "DEFAULT_CONFIG_PATH",
    "LabSettings",
    "RuntimeSettings",
    "FieldSettings",
    "PsiSettings",
    "MollifySettings",
    "HeatEstimateSettings",
    "HalfSpaceEstimateSettings",
    "CalibrationSettings",
    "IdentitySettings",
    "CarlemanSettings",
    "ConeSettings",
    "CutoffSettings",
    "ConfigLoader",
    "ConfigValidator",
]

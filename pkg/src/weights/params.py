"""
Weight Parameters
Validated parameter sets for the whole-space and half-space Carleman weights
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..models.enums import WeightVariant

# Exponent factors tying K to the damping parameter d
WHOLE_SPACE_K_FACTOR = 12.0
HALF_SPACE_K_FACTOR = 13.0


def damping_exponent(variant: WeightVariant, d: float, kappa: float) -> float:
    """Default K for a damping parameter d"""
    if WeightVariant(variant) is WeightVariant.WHOLE_SPACE:
        return WHOLE_SPACE_K_FACTOR * d
    return HALF_SPACE_K_FACTOR * kappa * d


class WeightParams(BaseModel):
    """Parameters (gamma, b, K, alpha, d, kappa) of a Carleman weight"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: WeightVariant = Field(WeightVariant.WHOLE_SPACE, description="Weight variant")
    gamma: float = Field(1.0, gt=0.0, description="Time-singular amplitude")
    b: float = Field(0.125, gt=0.0, description="Gaussian spatial rate")
    K: float = Field(24.0, gt=0.0, description="Time exponent")
    d: float = Field(2.0, gt=0.0, description="Damping parameter")
    kappa: float = Field(1.0, ge=1.0, description="Ellipticity ratio Lambda / lambda")
    alpha: Optional[float] = Field(None, description="Normal decay exponent (half-space only)")
    calibrated: bool = Field(False, description="d was produced by calibration or asserted by the user")

    @model_validator(mode="after")
    def validate_exponent(self) -> "WeightParams":
        """alpha must lie in (1, 2) for the half-space weight"""
        if self.variant is WeightVariant.HALF_SPACE:
            if self.alpha is None or not 1.0 < self.alpha < 2.0:
                raise ValueError(f"half-space weight needs alpha in (1, 2), got {self.alpha}")
        return self

    def with_d(self, d: float, calibrated: bool = False) -> "WeightParams":
        """Copy with a new damping parameter and its default K"""
        if d <= 0.0:
            raise ValueError(f"d must be positive, got {d}")
        return self.model_copy(
            update={"d": d, "K": damping_exponent(self.variant, d, self.kappa), "calibrated": calibrated}
        )

    def with_gamma(self, gamma: float) -> "WeightParams":
        if gamma <= 0.0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        return self.model_copy(update={"gamma": gamma})

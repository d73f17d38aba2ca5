"""
Core Configuration Models
Pydantic models for the verification lab configuration with validation
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..models.enums import FieldFamily, LogLevel, QuadratureRule, WeightVariant
from ..models.shared import EllipticityBounds


def _check_box(lower: List[float], upper: List[float], name: str) -> None:
    if len(lower) != len(upper):
        raise ValueError(f"{name}: lower and upper corners differ in length")
    if len(lower) < 2:
        raise ValueError(f"{name}: support box needs a space and a time axis")
    if any(hi <= lo for lo, hi in zip(lower, upper)):
        raise ValueError(f"{name}: degenerate support box {lower} .. {upper}")


class RuntimeSettings(BaseModel):
    """Seeds, tolerances and output location shared by every suite"""

    seed: int = Field(20240611, ge=0, description="Root seed for sample clouds and test functions")
    serial: bool = Field(True, description="Evaluate kernel convolutions in canonical serial order")
    max_workers: Optional[int] = Field(None, ge=1, description="Thread pool size in parallel mode")
    tolerance: float = Field(1e-9, ge=0.0, description="Default margin tolerance")
    grid_level: int = Field(0, ge=0, le=3, description="Quadrature refinement level")
    output_dir: str = Field("reports", min_length=1, description="Directory for JSON and CSV reports")
    log_level: LogLevel = Field(LogLevel.INFO, description="Logging level")


class FieldSettings(BaseModel):
    """Coefficient field under test"""

    family: FieldFamily = Field(FieldFamily.CONSTANT, description="Field family")
    n: int = Field(2, ge=2, le=8, description="Spatial dimension")
    matrix: Optional[List[List[float]]] = Field(None, description="Constant matrix; identity when omitted")
    amplitude: float = Field(0.5, description="Radial perturbation amplitude c")
    modulation: float = Field(0.0, ge=0.0, lt=1.0, description="Relative time modulation mu")
    frequency: float = Field(1.0, ge=0.0, description="Time modulation frequency omega")
    cone_l: Optional[float] = Field(None, ge=1.0, description="Cone opening l; derived from decay_fraction when omitted")
    decay_fraction: float = Field(0.5, gt=0.0, lt=1.0, description="E / E0 for the decay-matched cone field")
    bounds: Optional[EllipticityBounds] = Field(None, description="Declared bounds replacing the field's own")

    @model_validator(mode="after")
    def validate_family(self) -> "FieldSettings":
        """Cone fields are planar; a matrix must match n"""
        if self.family == FieldFamily.CONE and self.n != 2:
            raise ValueError("cone fields are two-dimensional")
        if self.matrix is not None and (len(self.matrix) != self.n or any(len(row) != self.n for row in self.matrix)):
            raise ValueError(f"matrix must be {self.n}x{self.n}")
        if self.bounds is not None and self.bounds.n != self.n:
            raise ValueError("declared bounds disagree with the field dimension")
        return self


class PsiSettings(BaseModel):
    kappas: List[float] = Field([1.0, 2.0, 5.0], min_length=1, description="Ellipticity ratios to check")
    samples: int = Field(10000, ge=16)
    xn_max: float = Field(10.0, gt=0.0)
    lateral: float = Field(10.0, gt=0.0)

    @field_validator("kappas")
    @classmethod
    def validate_kappas(cls, v: List[float]) -> List[float]:
        if any(k < 1.0 for k in v):
            raise ValueError("kappa = Lambda / lambda is at least 1")
        return v


class MollifySettings(BaseModel):
    samples: int = Field(1000, ge=16)
    epsilon: float = Field(0.5, gt=0.0, le=0.5)
    order: int = Field(24, ge=4, le=96, description="Gauss nodes per axis of the kernel quadrature")
    r_min: float = Field(1.0, ge=1.0)
    r_max: float = Field(10.0, gt=1.0)
    extend: bool = Field(False, description="Continue the field along the normal ray outside its domain")


class HeatEstimateSettings(BaseModel):
    samples: int = Field(10000, ge=16)
    t_min: float = Field(1e-3, ge=1e-3, lt=2.0)
    t_max: float = Field(2.0, gt=0.0, le=2.0)
    r_max: float = Field(10.0, gt=0.0)
    d: float = Field(2.0, gt=0.0)
    gamma: float = Field(1.0, gt=0.0)
    refinement: int = Field(4, ge=2, description="Sample ratio for empirical-constant stability")


class HalfSpaceEstimateSettings(BaseModel):
    samples: int = Field(2000, ge=16)
    t_min: float = Field(1e-3, ge=1e-3, lt=1.0)
    t_max: float = Field(1.0, gt=0.0, le=1.0)
    xn_min: float = Field(1.0, ge=1.0)
    xn_max: float = Field(10.0, gt=1.0)
    lateral: float = Field(5.0, gt=0.0)
    gamma: float = Field(1.0, gt=0.0)
    d: Optional[float] = Field(None, gt=0.0, description="Damping parameter; calibrated when omitted")
    generic_constant: float = Field(1.0, ge=0.0, description="Constant C of the matrix bound")
    j_sum_points: int = Field(500, ge=1, description="Points for the two-path M2 comparison")
    refinement: int = Field(4, ge=2)


class CalibrationSettings(BaseModel):
    variant: WeightVariant = Field(WeightVariant.WHOLE_SPACE)
    d_grid: List[float] = Field([float(2**k) for k in range(11)], min_length=1)
    samples: int = Field(2000, ge=16)
    gamma: float = Field(1.0, gt=0.0)

    @field_validator("d_grid")
    @classmethod
    def validate_grid(cls, v: List[float]) -> List[float]:
        if any(d <= 0.0 for d in v):
            raise ValueError("d_grid entries must be positive")
        return sorted(v)


class IdentitySettings(BaseModel):
    variant: WeightVariant = Field(WeightVariant.WHOLE_SPACE)
    support_lower: List[float] = Field([-1.0, -1.0, 0.5])
    support_upper: List[float] = Field([1.0, 1.0, 1.5])
    nodes: int = Field(64, ge=4, le=96, description="Gauss nodes per axis")
    convergence_rule: QuadratureRule = Field(QuadratureRule.MIDPOINT)
    convergence_nodes: int = Field(8, ge=4, le=64)
    levels: int = Field(3, ge=3, le=5)
    gamma: float = Field(0.1, gt=0.0)
    d: float = Field(0.25, gt=0.0, description="K = 12 d; log G must stay resolvable on the grid")
    profile_rate: float = Field(2.0, gt=0.0, description="sigma(t) = exp(rate t)")
    alpha_exp: float = Field(0.0, description="Exponent alpha of the general identity")


class CarlemanSettings(BaseModel):
    variant: WeightVariant = Field(WeightVariant.WHOLE_SPACE)
    gammas: List[float] = Field([0.1, 1.0, 10.0], min_length=1)
    bump_seeds: List[int] = Field([1, 2, 3, 4, 5], min_length=1)
    nodes: int = Field(16, ge=4, le=64)
    whole_space_lower: List[float] = Field([-1.0, -1.0, 0.5])
    whole_space_upper: List[float] = Field([1.0, 1.0, 1.5])
    half_space_lower: List[float] = Field([-1.0, 1.5, 0.3])
    half_space_upper: List[float] = Field([1.0, 3.0, 0.8])
    d: Optional[float] = Field(None, gt=0.0, description="Damping parameter; calibrated when omitted")
    tol_rel: float = Field(1e-2, ge=0.0)
    tol_abs: float = Field(1e-12, ge=0.0)

    @field_validator("gammas")
    @classmethod
    def validate_gammas(cls, v: List[float]) -> List[float]:
        if any(g <= 0.0 for g in v):
            raise ValueError("gammas must be positive")
        return v


class ConeSettings(BaseModel):
    l_values: List[float] = Field([1.5, 2.0], min_length=1)
    samples: int = Field(1000, ge=16)
    r_min: float = Field(0.1, gt=0.0)
    r_max: float = Field(3.0, gt=0.0)
    decay_values: List[float] = Field([0.5, 1.0, 2.0, 3.5], description="E1 values to classify")


class CutoffSettings(BaseModel):
    tau: float = Field(1.0, gt=0.0)
    K: float = Field(1.0, gt=0.0)
    alpha: float = Field(1.5, ge=1.0, lt=2.0)
    samples: int = Field(10000, ge=16)


class LabConfig(BaseModel):
    """
    Complete verification lab configuration with automatic YAML loading

    Every suite reads its own section; runtime settings are shared.
    """

    model_config = ConfigDict(use_enum_values=True, validate_assignment=True, extra="forbid")

    runtime: RuntimeSettings = Field(default_factory=RuntimeSettings)
    field: FieldSettings = Field(default_factory=FieldSettings)
    psi: PsiSettings = Field(default_factory=PsiSettings)
    mollify: MollifySettings = Field(default_factory=MollifySettings)
    heat_estimates: HeatEstimateSettings = Field(default_factory=HeatEstimateSettings)
    half_space_estimates: HalfSpaceEstimateSettings = Field(default_factory=HalfSpaceEstimateSettings)
    calibration: CalibrationSettings = Field(default_factory=CalibrationSettings)
    identity: IdentitySettings = Field(default_factory=IdentitySettings)
    carleman: CarlemanSettings = Field(default_factory=CarlemanSettings)
    cone: ConeSettings = Field(default_factory=ConeSettings)
    cutoffs: CutoffSettings = Field(default_factory=CutoffSettings)

    # Runtime state (not serialized)
    config_loaded_from: Optional[str] = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def validate_configuration(self) -> "LabConfig":
        """Cross-field validation for support boxes and dimensions"""
        n = self.field.n
        boxes = {
            "identity": (self.identity.support_lower, self.identity.support_upper),
            "carleman.whole_space": (self.carleman.whole_space_lower, self.carleman.whole_space_upper),
            "carleman.half_space": (self.carleman.half_space_lower, self.carleman.half_space_upper),
        }
        for name, (lower, upper) in boxes.items():
            _check_box(lower, upper, name)
            if len(lower) != n + 1:
                raise ValueError(f"{name}: support box has {len(lower)} axes, expected n + 1 = {n + 1}")

        lower, upper = self.carleman.half_space_lower, self.carleman.half_space_upper
        if lower[-2] < 1.0:
            raise ValueError("carleman.half_space: support needs x_n >= 1")
        if lower[-1] <= 0.0 or upper[-1] > 1.0:
            raise ValueError("carleman.half_space: support time range must lie in (0, 1]")
        return self

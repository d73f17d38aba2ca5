"""
Shared Pydantic Models for the verification lab
Structural constants of coefficient fields and the margin report record every check returns
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator


class EllipticityBounds(BaseModel):
    """Declared structural constants (n, lambda, Lambda, M, E) of a coefficient field"""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    n: int = Field(2, ge=2, le=8, description="Spatial dimension")
    lower: float = Field(1.0, gt=0.0, alias="lambda", description="Ellipticity lower bound")
    upper: float = Field(1.0, gt=0.0, alias="Lambda", description="Ellipticity upper bound")
    M: float = Field(0.0, ge=0.0, description="Bound on first space-time derivatives")
    E: float = Field(0.0, ge=0.0, description="Decay constant of the spatial gradient")

    @model_validator(mode="after")
    def validate_ordering(self) -> "EllipticityBounds":
        """Ensure lambda <= Lambda"""
        if self.lower > self.upper:
            raise ValueError(f"lambda ({self.lower}) must not exceed Lambda ({self.upper})")
        return self

    @property
    def kappa(self) -> float:
        """Condition number Lambda / lambda"""
        return self.upper / self.lower


@dataclass(frozen=True)
class MarginTrace:
    """Pointwise margins kept alongside a report for CSV export"""

    locations: np.ndarray  # (m, n + 1): x then t
    margins: np.ndarray    # (m,)


class MarginReport(BaseModel):
    """Outcome of one pointwise or empirical-constant check

    A report passes exactly when min_margin >= -tolerance; NaN margins count
    as -inf so an overflowed sample can never pass silently.
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    check_name: str = Field(..., min_length=1, description="Check identifier")
    sample_count: int = Field(..., ge=0, description="Number of evaluated samples")
    min_margin: float = Field(..., description="Smallest margin over the samples")
    argmin_location: List[float] = Field(default_factory=list, description="x then t of the worst sample")
    empirical_constant: Optional[float] = Field(None, description="Empirical constant, when the check reports one")
    tolerance: float = Field(0.0, ge=0.0, description="Allowed negative slack")
    passed: bool = Field(..., alias="pass", description="min_margin >= -tolerance")
    details: Dict[str, float] = Field(default_factory=dict, description="Auxiliary diagnostics")

    _trace: Optional[MarginTrace] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_verdict(self) -> "MarginReport":
        """Keep the verdict consistent with the margin"""
        expected = (not math.isnan(self.min_margin)) and self.min_margin >= -self.tolerance
        if self.passed != expected:
            raise ValueError(
                f"pass={self.passed} inconsistent with min_margin={self.min_margin}, "
                f"tolerance={self.tolerance}"
            )
        return self

    @property
    def trace(self) -> Optional[MarginTrace]:
        return self._trace

    @classmethod
    def from_margins(
        cls,
        check_name: str,
        margins: np.ndarray,
        tolerance: float,
        locations: Optional[np.ndarray] = None,
        empirical_constant: Optional[float] = None,
        details: Optional[Dict[str, float]] = None,
    ) -> "MarginReport":
        """Build a report from pointwise margins

        Args:
            check_name: Identifier of the check
            margins: Margins, one per sample (NaN is treated as failing)
            tolerance: Allowed negative slack
            locations: Optional (m, n + 1) array of sample locations
            empirical_constant: Optional empirical constant to record
            details: Optional auxiliary diagnostics

        Returns:
            MarginReport with the worst sample located
        """
        values = np.atleast_1d(np.asarray(margins, dtype=float))
        if values.size == 0:
            raise ValueError(f"{check_name}: no samples to evaluate")

        cleaned = np.where(np.isnan(values), -np.inf, values)
        worst = int(np.argmin(cleaned))
        min_margin = float(cleaned[worst])

        extra = dict(details or {})
        nan_count = int(np.isnan(values).sum())
        if nan_count:
            extra["nan_count"] = float(nan_count)

        argmin: List[float] = []
        if locations is not None:
            locations = np.asarray(locations, dtype=float).reshape(values.size, -1)
            argmin = [float(v) for v in locations[worst]]

        report = cls(
            check_name=check_name,
            sample_count=int(values.size),
            min_margin=min_margin,
            argmin_location=argmin,
            empirical_constant=empirical_constant,
            tolerance=tolerance,
            passed=min_margin >= -tolerance,
            details=extra,
        )
        if locations is not None:
            report._trace = MarginTrace(locations=locations, margins=cleaned)
        return report


def stability_margin(coarse: float, fine: float, max_drift: float = 2.0) -> float:
    """Margin of an empirical constant under sample refinement

    Returns max_drift minus the ratio between the larger and smaller constant;
    two zero constants are perfectly stable, a zero against a positive is not.
    """
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        return -math.inf
    lo, hi = sorted((abs(coarse), abs(fine)))
    if hi == 0.0:
        return max_drift - 1.0
    if lo == 0.0:
        return -math.inf
    return max_drift - hi / lo


class SuiteResult(BaseModel):
    """Reports produced by one suite run, with the parameters that produced them"""

    suite: str = Field(..., min_length=1)
    seed: int = Field(0, ge=0)
    params: Dict[str, Any] = Field(default_factory=dict, description="Parameters the checks ran with")
    checks: List[MarginReport] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def min_margin(self) -> float:
        return min((check.min_margin for check in self.checks), default=math.inf)

    def failed_checks(self) -> List[str]:
        return [check.check_name for check in self.checks if not check.passed]

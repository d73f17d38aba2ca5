"""
Damping Calibration
Smallest damping parameter d on a geometric grid for which the explicit weight margins pass
"""

from typing import List, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from ..calculus.sampling import SampleCloud, time_floor
from ..fields.base import CoefficientField, CoefficientJet, take_rows
from ..models.enums import WeightVariant
from ..models.errors import CalibrationError
from ..models.shared import MarginReport
from ..mollify.kernel import Mollifier, mollify_field
from ..weights.carleman_weights import HalfSpaceWeight, WholeSpaceWeight
from ..weights.params import WeightParams
from .half_space import CUBIC_POWER, matrix_margins, scalar_margins
from .heat import gradient_form_margins, zeroth_order_margins

logger = structlog.get_logger(__name__)

DEFAULT_D_GRID = tuple(float(2**k) for k in range(11))

# (Phi_t)^2 appears in the whole-space zeroth-order margin
QUADRATIC_POWER = 2


class CalibrationAttempt(BaseModel):
    """Outcome of one trial value of d"""

    d: float
    K: float
    passed: bool
    worst_check: Optional[str] = None
    worst_margin: float
    skipped_samples: int = 0


class CalibrationResult(BaseModel):
    """Smallest passing d with the reports that justified it"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    d: float
    params: WeightParams
    reports: List[MarginReport] = Field(default_factory=list)
    attempts: List[CalibrationAttempt] = Field(default_factory=list)


def _whole_space_reports(
    field: CoefficientField, params: WeightParams, cloud: SampleCloud, tol: float
) -> List[MarginReport]:
    evaluation = WholeSpaceWeight(field, params).evaluate(cloud.x, cloud.t, with_mollified=False)
    return [
        MarginReport.from_margins("gradient_form_lower_bound", gradient_form_margins(evaluation), tol, cloud.locations),
        MarginReport.from_margins("zeroth_order_lower_bound", zeroth_order_margins(evaluation), tol, cloud.locations),
    ]


def _half_space_reports(
    field: CoefficientField,
    params: WeightParams,
    cloud: SampleCloud,
    mollified: CoefficientJet,
    tol: float,
    generic_constant: float,
) -> List[MarginReport]:
    evaluation = HalfSpaceWeight(field, params).evaluate(cloud.x, cloud.t, mollified=mollified)
    bounds = field.bounds
    return [
        MarginReport.from_margins(
            "normal_matrix_lower_bound", matrix_margins(evaluation, bounds, generic_constant), tol, cloud.locations
        ),
        MarginReport.from_margins(
            "zeroth_order_lower_bound", scalar_margins(evaluation, bounds, generic_constant), tol, cloud.locations
        ),
    ]


def calibrate_d(
    field: CoefficientField,
    template: WeightParams,
    samples: SampleCloud,
    d_grid: Sequence[float] = DEFAULT_D_GRID,
    tol: float = 1e-9,
    generic_constant: float = 1.0,
    mollifier: Optional[Mollifier] = None,
) -> CalibrationResult:
    """Walk the grid in increasing order and return the first d whose margins all pass

    K is recomputed from d at every trial. Samples below the overflow floor
    of the trial K are dropped; a trial left with no samples fails.

    Args:
        field: Coefficient field
        template: Parameters of the variant; only d and K are replaced
        samples: Sample cloud in the variant's domain
        d_grid: Candidate values of d
        tol: Margin tolerance
        generic_constant: The constant C of the half-space matrix bound
        mollifier: Mollifier for the half-space variant

    Returns:
        CalibrationResult with params marked calibrated

    Raises:
        CalibrationError: if no d in the grid passes
    """
    grid = sorted(float(d) for d in d_grid)
    if not grid:
        raise ValueError("d_grid is empty")

    variant = WeightVariant(template.variant)
    mollified = None
    if variant is WeightVariant.HALF_SPACE:
        mollified = mollify_field(field, mollifier or Mollifier(field.n)).evaluate(samples.x, samples.t)

    attempts: List[CalibrationAttempt] = []
    for d in grid:
        params = template.with_d(d)
        power = QUADRATIC_POWER if variant is WeightVariant.WHOLE_SPACE else CUBIC_POWER
        kept = samples.t >= time_floor(params.K, power)
        skipped = int(np.sum(~kept))
        if not np.any(kept):
            attempts.append(
                CalibrationAttempt(d=d, K=params.K, passed=False, worst_margin=-np.inf, skipped_samples=skipped)
            )
            logger.warning("calibration_trial_empty", d=d, K=params.K)
            continue

        cloud = samples.select(kept)
        if variant is WeightVariant.WHOLE_SPACE:
            reports = _whole_space_reports(field, params, cloud, tol)
        else:
            reports = _half_space_reports(
                field, params, cloud, take_rows(mollified, kept), tol, generic_constant
            )

        worst = min(reports, key=lambda r: r.min_margin)
        passed = all(r.passed for r in reports)
        attempts.append(
            CalibrationAttempt(
                d=d,
                K=params.K,
                passed=passed,
                worst_check=worst.check_name,
                worst_margin=worst.min_margin,
                skipped_samples=skipped,
            )
        )
        logger.debug("calibration_trial", d=d, passed=passed, worst_check=worst.check_name, margin=worst.min_margin)

        if passed:
            calibrated = template.with_d(d, calibrated=True)
            logger.info("calibration_succeeded", variant=variant.value, d=d, K=calibrated.K)
            return CalibrationResult(d=d, params=calibrated, reports=reports, attempts=attempts)

    # report the best failing trial: the least negative worst margin
    best = max(attempts, key=lambda a: a.worst_margin)
    logger.error("calibration_failed", variant=variant.value, grid=grid, best_margin=best.worst_margin)
    raise CalibrationError(
        f"no d in {grid} passes; best trial d={best.d} failed {best.worst_check} with margin {best.worst_margin:.4g}",
        worst_margin=best.worst_margin,
        worst_check=best.worst_check,
    )

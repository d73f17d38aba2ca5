"""
Whole-Space Weight Estimates
Pointwise lower bounds for the heat-type weight and the empirical constants of its mollified part
"""

from typing import List, Optional, Tuple

import numpy as np
import structlog

from ..calculus.sampling import SampleCloud
from ..fields.base import CoefficientField
from ..models.shared import MarginReport, stability_margin
from ..mollify.kernel import Mollifier
from ..weights.carleman_weights import WeightEval, WholeSpaceWeight
from ..weights.params import WeightParams
from .dg import gradient_form

logger = structlog.get_logger(__name__)

# Samples earlier than this are rejected
TIME_FLOOR = 1e-3


def gradient_form_margins(evaluation: WeightEval) -> np.ndarray:
    """t * lambda_min(2 D_G + A (Y - F) - (1/t + 1) I)"""
    t = evaluation.t
    n = evaluation.x.shape[1]
    matrix = gradient_form(evaluation) - ((1.0 / t + 1.0)[:, None, None] * np.eye(n))
    return np.linalg.eigvalsh(matrix)[:, 0] * t


def zeroth_order_margins(evaluation: WeightEval) -> np.ndarray:
    """t^3 * (d_t F + F (Y - F) - d b (|x|^2 + 1) / (4 t^3))"""
    p = evaluation.params
    t = evaluation.t
    sq = np.einsum("mi,mi->m", evaluation.x, evaluation.x)
    F = evaluation.F
    value = evaluation.dt_F + F * evaluation.heat_excess
    return value * t**3 - p.d * p.b * (sq + 1.0) / 4.0


def _constants(evaluation: WeightEval) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise ratios whose suprema are the two empirical constants"""
    t = evaluation.t
    radius = np.linalg.norm(evaluation.x, axis=1)
    laplacian = np.abs(evaluation.lap_F0) * t**3 / (radius**2 + 1.0)
    difference = np.linalg.norm(evaluation.grad_F - evaluation.grad_F0, axis=1) * t**2 / (radius + 1.0)
    return laplacian, difference


def check_heat_estimates(
    field: CoefficientField,
    params: WeightParams,
    samples: SampleCloud,
    tol: float = 1e-9,
    mollifier: Optional[Mollifier] = None,
    refinement: int = 4,
) -> List[MarginReport]:
    """Sampled check of the whole-space weight estimates

    Returns four reports: the gradient-form and zeroth-order lower bounds as
    pointwise margins, and the constants bounding |Delta F0| t^3 / (|x|^2 + 1)
    and |grad(F - F0)| t^2 / (|x| + 1), each required to stay within a factor
    two when the sample count grows by the refinement factor.

    Raises:
        ValueError: if a sample time is below the time floor
    """
    if np.any(samples.t < TIME_FLOOR):
        raise ValueError(f"sample times must be >= {TIME_FLOOR}")

    weight = WholeSpaceWeight(field, params, mollifier)
    evaluation = weight.evaluate(samples.x, samples.t)
    locations = samples.locations

    reports = [
        MarginReport.from_margins(
            "gradient_form_lower_bound", gradient_form_margins(evaluation), tol, locations
        ),
        MarginReport.from_margins(
            "zeroth_order_lower_bound", zeroth_order_margins(evaluation), tol, locations
        ),
    ]

    coarse_count = max(1, len(samples) // refinement)
    for name, ratios in zip(("mollified_laplacian_constant", "mollification_gradient_constant"), _constants(evaluation)):
        coarse = float(np.nanmax(ratios[:coarse_count]))
        fine = float(np.nanmax(ratios))
        reports.append(
            MarginReport.from_margins(
                name,
                [stability_margin(coarse, fine)],
                tolerance=0.0,
                empirical_constant=fine,
                details={"coarse_constant": coarse, "fine_constant": fine},
            )
        )

    logger.info(
        "heat_estimates_checked",
        samples=len(samples),
        passed=all(r.passed for r in reports),
        d=params.d,
    )
    return reports

"""
Quadratic Distance Weight Properties
Lower bound, gradient growth, conormal bound and derivative decay of psi
"""

from typing import List

import numpy as np
import structlog

from ..calculus.sampling import SampleCloud
from ..fields.base import CoefficientField
from ..models.shared import MarginReport, stability_margin
from ..weights.psi import psi_eval

logger = structlog.get_logger(__name__)


def conormal_constant(kappa: float, upper: float) -> float:
    """C = (4 kappa^2 + 2 kappa + 2) Lambda in a^{ni} d_i psi <= C x_n"""
    return (4.0 * kappa**2 + 2.0 * kappa + 2.0) * upper


def _decay_ratios(jet, radius: np.ndarray) -> np.ndarray:
    second = np.linalg.norm(jet.hess.reshape(len(radius), -1), axis=1)
    third = np.linalg.norm(jet.third.reshape(len(radius), -1), axis=1) * radius
    fourth = np.linalg.norm(jet.fourth.reshape(len(radius), -1), axis=1) * radius**2
    return np.maximum(second, np.maximum(third, fourth))


def check_psi_props(
    kappa: float,
    samples: SampleCloud,
    field: CoefficientField,
    tol: float = 1e-9,
    exact_tol: float = 1e-12,
    refinement: int = 4,
) -> List[MarginReport]:
    """Sampled check of the psi properties for a field with ratio at most kappa

    Returns four reports. The lower bound psi >= |x|^2 / 2, the growth
    |grad psi| <= 4 (kappa + 1)^2 |x| and the conormal bound are explicit;
    the decay |D^k psi| <= C / |x|^(k-2) for k = 2, 3, 4 is an empirical
    constant required to be stable under refinement. Margins are divided by
    the natural power of |x|.

    Raises:
        ValueError: if kappa is below the field's ratio Lambda / lambda
    """
    bounds = field.bounds
    if kappa < bounds.kappa - 1e-12:
        raise ValueError(f"kappa={kappa} is below the field's ratio {bounds.kappa:.6g}")

    x, t = samples.x, samples.t
    jet = psi_eval(x, kappa)
    radius = np.linalg.norm(x, axis=1)
    locations = samples.locations

    lower = (jet.value - 0.5 * radius**2) / radius**2
    growth = (4.0 * (kappa + 1.0) ** 2 * radius - np.linalg.norm(jet.grad, axis=1)) / radius

    A = field.evaluate(x, t).matrix
    conormal = np.einsum("mi,mi->m", A[:, -1, :], jet.grad)
    constant = conormal_constant(kappa, bounds.upper)
    conormal_margin = (constant * x[:, -1] - conormal) / radius

    ratios = _decay_ratios(jet, radius)
    coarse = float(np.max(ratios[: max(1, len(samples) // refinement)]))
    fine = float(np.max(ratios))

    reports = [
        MarginReport.from_margins("psi_lower_bound", lower, exact_tol, locations),
        MarginReport.from_margins("gradient_growth", growth, tol, locations),
        MarginReport.from_margins(
            "conormal_bound",
            conormal_margin,
            tol,
            locations,
            empirical_constant=float(np.max(conormal / x[:, -1])),
            details={"constant": constant},
        ),
        MarginReport.from_margins(
            "derivative_decay",
            [stability_margin(coarse, fine)],
            tolerance=0.0,
            empirical_constant=fine,
            details={"coarse_constant": coarse, "fine_constant": fine},
        ),
    ]
    logger.info("psi_checked", kappa=kappa, samples=len(samples), passed=all(r.passed for r in reports))
    return reports

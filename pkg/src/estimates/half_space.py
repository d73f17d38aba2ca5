"""
Half-Space Weight Estimates
Five-plus-one term decomposition of the zeroth-order quantity and its pointwise lower bounds
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import structlog

from ..calculus.differencing import richardson_difference
from ..calculus.sampling import SampleCloud, time_floor
from ..fields.base import CoefficientField, CoefficientJet, take_rows
from ..models.errors import HypothesisViolationError
from ..models.shared import EllipticityBounds, MarginReport, stability_margin
from ..mollify.kernel import Mollifier
from ..weights.carleman_weights import HalfSpaceWeight, WeightEval, quadratic_form
from ..weights.constants import critical_decay
from ..weights.params import WeightParams
from .dg import gradient_form

logger = structlog.get_logger(__name__)

# Margin sweeps include (Phi1_n)^3, so weights are kept below the float ceiling to this power.
CUBIC_POWER = 3


@dataclass(frozen=True, eq=False)
class JTerms:
    """Pointwise terms whose sum is the zeroth-order quantity M2"""

    j1: np.ndarray
    j2: np.ndarray
    j3: np.ndarray
    j4: np.ndarray
    j5: np.ndarray
    j6: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.j1 + self.j2 + self.j3 + self.j4 + self.j5 + self.j6


def _normal_weight(bounds: EllipticityBounds) -> float:
    """8 n^2 Lambda E"""
    return 8.0 * bounds.n**2 * bounds.upper * bounds.E


def _generic_shift(evaluation: WeightEval, bounds: EllipticityBounds, generic_constant: float) -> np.ndarray:
    """c = 8 n^2 Lambda E Phi1_n / |x| + C / t"""
    return _normal_weight(bounds) * evaluation.normal.ratio + generic_constant / evaluation.t


def b_tilde(
    evaluation: WeightEval, bounds: EllipticityBounds, generic_constant: float = 1.0
) -> np.ndarray:
    """4 Phi1_nn (A e_n)(A e_n)^T - c I + H A"""
    A = evaluation.coefficients.matrix
    n = A.shape[1]
    column = A[:, :, -1]
    shift = _generic_shift(evaluation, bounds, generic_constant)
    return (
        4.0 * evaluation.normal.dn[:, 1][:, None, None] * np.einsum("mi,mj->mij", column, column)
        - shift[:, None, None] * np.eye(n)
        + evaluation.damping.value[:, None, None] * A
    )


def compute_j_terms(
    evaluation: WeightEval, bounds: EllipticityBounds, generic_constant: float = 1.0
) -> JTerms:
    """Closed-form J1..J6 at the evaluated points

    Requires a half-space evaluation that carries the mollified quantities.
    """
    if evaluation.normal is None or evaluation.lap_F0 is None:
        raise ValueError("J terms need a half-space evaluation with mollified coefficients")

    A, dA, At = evaluation.coefficients.as_tuple()
    phase, H, normal = evaluation.phase, evaluation.damping, evaluation.normal
    g, Hs = phase.grad, phase.hess
    divergence = evaluation.coefficients.divergence

    D = np.einsum("mj,mj->m", divergence, g)
    Q = quadratic_form(A, g)
    S = np.einsum("mij,mij->m", A, Hs)
    Ag = np.einsum("mij,mj->mi", A, g)
    column = A[:, :, -1]
    shift = _generic_shift(evaluation, bounds, generic_constant)
    d2, d3 = normal.dn[:, 1], normal.dn[:, 2]

    j1 = 4.0 * d2 * Ag[:, -1] ** 2
    j2 = (
        -shift * np.einsum("mi,mi->m", g, g)
        - (H.value - 4.0 * D) * Q
        + np.einsum("mi,mi->m", H.grad, Ag)
        - _normal_weight(bounds) * np.einsum("mi,mi->m", normal.ratio_grad, g)
        - shift * np.trace(Hs, axis1=1, axis2=2)
    )
    # d_i (a^{in} a^{nj}) summed over i
    product_divergence = divergence[:, -1][:, None] * column + np.einsum("mi,mij->mj", column, dA[:, :, -1, :])
    j3 = (
        4.0 * d3 * A[:, -1, -1] * Ag[:, -1]
        + 4.0 * d2 * np.einsum("mj,mj->m", product_divergence, g)
        + 4.0 * d2 * np.einsum("mi,mij,mj->m", column, Hs, column)
    )
    j4 = (
        phase.dtt
        + phase.dt * (H.value - 2.0 * D)
        - np.einsum("mij,mij->m", At, Hs)
        - np.einsum("mij,mij->m", A, phase.hess_dt)
        + 2.0 * D * (H.value + S)
        - 0.5 * H.dt
        - 0.5 * H.value**2
    )
    j5 = -2.0 * (quadratic_form(At, g) + 2.0 * np.einsum("mi,mij,mj->m", phase.grad_dt, A, g))
    j6 = 0.5 * evaluation.lap_F0
    return JTerms(j1, j2, j3, j4, j5, j6)


def direct_m2(
    weight: HalfSpaceWeight,
    evaluation: WeightEval,
    generic_constant: float = 1.0,
    h: float = 1e-4,
) -> np.ndarray:
    """M2 = <B g, g> + div(B g) + d_t F / 2 + F (Y - F) / 2 + Delta F0 / 2 with B = b_tilde

    The divergence is taken by Richardson-extrapolated central differences,
    independently of the closed-form J terms.
    """
    bounds = weight.field.bounds
    t = evaluation.t

    def flux(points: np.ndarray) -> np.ndarray:
        shifted = weight.evaluate(points, t, with_mollified=False, validate=False)
        return np.einsum("mij,mj->mi", b_tilde(shifted, bounds, generic_constant), shifted.phase.grad)

    x = evaluation.x
    divergence = sum(
        richardson_difference(lambda p, k=k: flux(p)[:, k], x, k, h) for k in range(x.shape[1])
    )
    g = evaluation.phase.grad
    B = b_tilde(evaluation, bounds, generic_constant)
    F = evaluation.F
    return (
        np.einsum("mi,mij,mj->m", g, B, g)
        + divergence
        + 0.5 * evaluation.dt_F
        + 0.5 * F * evaluation.heat_excess
        + 0.5 * evaluation.lap_F0
    )


def matrix_margins(
    evaluation: WeightEval, bounds: EllipticityBounds, generic_constant: float = 1.0
) -> np.ndarray:
    """lambda_min(B - 8 n^2 Lambda E (Phi1_n/|x| + 1/t) I), divided by a positive scale"""
    t = evaluation.t
    n = evaluation.x.shape[1]
    ratio = evaluation.normal.ratio
    cB = _normal_weight(bounds)
    matrix = b_tilde(evaluation, bounds, generic_constant) - (cB * (ratio + 1.0 / t))[:, None, None] * np.eye(n)
    scale = (
        1.0 / t
        + 4.0 * np.abs(evaluation.normal.dn[:, 1]) * bounds.upper**2
        + np.abs(evaluation.damping.value) * bounds.upper
        + cB * np.abs(ratio)
    )
    return np.linalg.eigvalsh(matrix)[:, 0] / scale


def needed_generic_constant(evaluation: WeightEval, bounds: EllipticityBounds) -> float:
    """Smallest C with 2 D_G + A (Y - F) >= b_tilde + I / t on the samples"""
    residual = gradient_form(evaluation) - b_tilde(evaluation, bounds, 0.0)
    smallest = np.linalg.eigvalsh(residual)[:, 0]
    return float(max(0.0, np.nanmax(1.0 - evaluation.t * smallest)))


def cubic_coefficient(bounds: EllipticityBounds, alpha: float, kappa: float) -> float:
    """2((alpha-1) lambda^2 - (16 n^2 kappa + 8 n^2 + 4n) Lambda E), positive at the default alpha when 0 < E < E0"""
    n = bounds.n
    return 2.0 * (
        (alpha - 1.0) * bounds.lower**2
        - (16.0 * n**2 * kappa + 8.0 * n**2 + 4.0 * n) * bounds.upper * bounds.E
    )


def m2_lower_bound(evaluation: WeightEval, bounds: EllipticityBounds) -> np.ndarray:
    """cubic (Phi1_n)^3/|x| + b d |x|^2/(16 t^3) + 1/t^3"""
    p = evaluation.params
    t = evaluation.t
    radius = np.linalg.norm(evaluation.x, axis=1)
    cubic = cubic_coefficient(bounds, float(p.alpha), p.kappa)
    return cubic * evaluation.normal.dn[:, 0] ** 3 / radius + p.b * p.d * radius**2 / (16.0 * t**3) + 1.0 / t**3


def scalar_margins(
    evaluation: WeightEval,
    bounds: EllipticityBounds,
    generic_constant: float = 1.0,
    terms: Optional[JTerms] = None,
) -> np.ndarray:
    """(M2 - lower bound) divided by a positive scale"""
    t = evaluation.t
    radius = np.linalg.norm(evaluation.x, axis=1)
    if terms is None:
        terms = compute_j_terms(evaluation, bounds, generic_constant)
    total = terms.total
    scale = np.abs(evaluation.normal.dn[:, 0]) ** 3 / radius + (1.0 + radius**2) / t**3
    return (total - m2_lower_bound(evaluation, bounds)) / scale


def j_term_constants(evaluation: WeightEval, terms: JTerms) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise constants C3, C6 with

        J3 >= -C3 ((Phi1_n)^2 + (1 + |x|^2) / t^2)
        J6 >= -C6 (|f'/f| Phi1_n + (Phi1_n)^2 + Phi1_n + (1 + |x|^2) / t^2)
    """
    t = evaluation.t
    K = evaluation.params.K
    slope = evaluation.normal.dn[:, 0]
    spread = (1.0 + np.einsum("mi,mi->m", evaluation.x, evaluation.x)) / t**2
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_rate = K / (t * (1.0 - t**K))
        j3 = np.maximum(0.0, -terms.j3) / (slope**2 + spread)
        j6 = np.maximum(0.0, -terms.j6) / (log_rate * slope + slope**2 + slope + spread)
    return np.nan_to_num(j3), np.nan_to_num(j6)


def _difference_ratio(evaluation: WeightEval, bounds: EllipticityBounds) -> np.ndarray:
    radius = np.linalg.norm(evaluation.x, axis=1)
    lhs = np.linalg.norm(evaluation.grad_F - evaluation.grad_F0, axis=1)
    main = evaluation.normal.dn[:, 0] ** 2 / radius
    excess = np.maximum(0.0, lhs / (32.0 * bounds.n * bounds.E) - main)
    return excess * evaluation.t**2 / radius


def check_half_space_estimates(
    field: CoefficientField,
    params: WeightParams,
    samples: SampleCloud,
    tol: float = 1e-9,
    generic_constant: float = 1.0,
    mollifier: Optional[Mollifier] = None,
    mollified: Optional[CoefficientJet] = None,
    refinement: int = 4,
) -> List[MarginReport]:
    """Sampled check of the half-space weight estimates

    Returns three reports: the matrix lower bound for b_tilde, the lower bound
    for M2 (through the J decomposition) and the mollification-difference
    bound, the last exact when E = 0 and an empirical constant otherwise.
    Samples earlier than the overflow floor of K are skipped and counted.

    Raises:
        HypothesisViolationError: if E >= E0
    """
    bounds = field.bounds
    E0 = critical_decay(bounds)
    if bounds.E >= E0:
        raise HypothesisViolationError(f"decay constant E={bounds.E:.6g} must be below E0={E0:.6g}")

    floor = time_floor(params.K, CUBIC_POWER)
    kept = samples.t >= floor
    if not np.any(kept):
        raise ValueError(f"all samples fall below the overflow floor t={floor:.4g} for K={params.K}")
    cloud = samples.select(kept)
    if mollified is not None:
        mollified = take_rows(mollified, kept)

    weight = HalfSpaceWeight(field, params, mollifier)
    evaluation = weight.evaluate(cloud.x, cloud.t, mollified=mollified)
    locations = cloud.locations
    skipped = float(np.sum(~kept))

    needed = needed_generic_constant(evaluation, bounds)
    matrix_report = MarginReport.from_margins(
        "normal_matrix_lower_bound",
        matrix_margins(evaluation, bounds, generic_constant),
        tol,
        locations,
        empirical_constant=needed,
        details={"generic_constant": generic_constant, "skipped_samples": skipped},
    )

    terms = compute_j_terms(evaluation, bounds, generic_constant)
    j3_constants, j6_constants = j_term_constants(evaluation, terms)
    margins = scalar_margins(evaluation, bounds, generic_constant, terms)
    t = evaluation.t
    radius = np.linalg.norm(evaluation.x, axis=1)
    scale = np.abs(evaluation.normal.dn[:, 0]) ** 3 / radius + (1.0 + radius**2) / t**3
    without_additive = margins + 1.0 / (t**3 * scale)
    scalar_report = MarginReport.from_margins(
        "zeroth_order_lower_bound",
        margins,
        tol,
        locations,
        details={
            "additive_term_only_failures": float(np.sum((margins < -tol) & (without_additive >= -tol))),
            "skipped_samples": skipped,
            "j3_constant": float(np.max(j3_constants)),
            "j6_constant": float(np.max(j6_constants)),
        },
    )

    if bounds.E == 0.0:
        difference = np.linalg.norm(evaluation.grad_F - evaluation.grad_F0, axis=1)
        difference_report = MarginReport.from_margins(
            "mollification_gradient_bound",
            -difference / (1.0 + np.linalg.norm(evaluation.grad_F, axis=1)),
            tol,
            locations,
            empirical_constant=0.0,
        )
    else:
        ratios = _difference_ratio(evaluation, bounds)
        coarse = float(np.nanmax(ratios[: max(1, len(cloud) // refinement)]))
        fine = float(np.nanmax(ratios))
        difference_report = MarginReport.from_margins(
            "mollification_gradient_bound",
            [stability_margin(coarse, fine)],
            tolerance=0.0,
            empirical_constant=fine,
            details={"coarse_constant": coarse, "fine_constant": fine},
        )

    reports = [matrix_report, scalar_report, difference_report]
    logger.info(
        "half_space_estimates_checked",
        samples=len(cloud),
        skipped=int(skipped),
        passed=all(r.passed for r in reports),
        d=params.d,
    )
    return reports

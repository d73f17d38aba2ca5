"""
Carleman Inequalities
Quadrature comparison of int (u^2 + |grad u|^2) G against int (P u)^2 G over a sweep of gamma
"""

from typing import List, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel

from ..calculus.quadrature import QuadratureGrid, scaled_weighted_integrals
from ..calculus.test_functions import TestFunction
from ..fields.base import CoefficientField
from ..identity.integral_identity import SUPPORT_TIME_FLOOR
from ..models.enums import WeightVariant
from ..models.errors import CalibrationError, HypothesisViolationError, NumericalError
from ..models.shared import MarginReport
from ..utils.parallel import map_chunks
from ..weights.carleman_weights import divergence_form_operator, make_weight
from ..weights.constants import critical_decay
from ..weights.params import WeightParams

logger = structlog.get_logger(__name__)

DEFAULT_GAMMAS = (0.1, 1.0, 10.0)
TOL_REL = 1e-2
TOL_ABS = 1e-12

# Integrands below this are a log-space bug, not rounding
NEGATIVE_INTEGRAND_FLOOR = -1e-14


class InequalityOutcome(BaseModel):
    """Both sides of the inequality at one gamma, on a common scale exp(log_scale)"""

    gamma: float
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    log_scale: float = 0.0
    node_count: int = 0


def _require_calibrated(params: WeightParams) -> None:
    if not params.calibrated:
        raise CalibrationError(
            f"d={params.d} has not been calibrated; run calibrate-d first or mark the parameters calibrated"
        )


def _check_grid(u: TestFunction, grid: QuadratureGrid) -> None:
    if grid.dimension != u.lower.size:
        raise ValueError(f"grid dimension {grid.dimension} does not match support dimension {u.lower.size}")
    if np.any(grid.lower > u.lower + 1e-12) or np.any(grid.upper < u.upper - 1e-12):
        raise ValueError("quadrature grid does not cover the support of u")


def compare_sides(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    tol_rel: float = TOL_REL,
    tol_abs: float = TOL_ABS,
) -> InequalityOutcome:
    """Evaluate both sides for one parameter set

    Raises:
        NumericalError: if an integrand is negative beyond rounding or NaN
    """
    nodes = grid.nodes
    x, t = nodes[:, :-1], nodes[:, -1]
    jet = u.evaluate(x, t)
    coefficients = field.evaluate(x, t)
    Pu = jet.dt + divergence_form_operator(coefficients, jet.grad, jet.hess)

    energy = jet.value**2 + np.einsum("mi,mi->m", jet.grad, jet.grad)
    source = Pu**2
    for name, values in (("energy", energy), ("source", source)):
        if np.any(np.isnan(values)) or np.min(values) < NEGATIVE_INTEGRAND_FLOOR:
            raise NumericalError(f"{name} integrand is negative or NaN (min {np.nanmin(values):.3g})")

    log_weight = make_weight(field, params).log_weight(x, t)
    scaled = scaled_weighted_integrals(log_weight, {"lhs": energy, "rhs": source}, grid.weights)
    lhs, rhs = scaled.values["lhs"], scaled.values["rhs"]
    ratio = lhs / rhs if rhs > 0.0 else (0.0 if lhs == 0.0 else np.inf)
    return InequalityOutcome(
        gamma=params.gamma,
        lhs=lhs,
        rhs=rhs,
        ratio=float(ratio),
        passed=lhs <= rhs * (1.0 + tol_rel) + tol_abs,
        log_scale=scaled.log_scale,
        node_count=int(grid.weights.size),
    )


def _sweep(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    gammas: Sequence[float],
    tol_rel: float,
    tol_abs: float,
    serial: bool,
    max_workers: Optional[int],
) -> List[InequalityOutcome]:
    outcomes = map_chunks(
        lambda g: compare_sides(u, field, params.with_gamma(g), grid, tol_rel, tol_abs),
        list(gammas),
        serial=serial,
        max_workers=max_workers,
    )
    for outcome in outcomes:
        if not outcome.passed:
            logger.warning("carleman_inequality_failed", gamma=outcome.gamma, ratio=outcome.ratio)
    logger.info(
        "carleman_sweep",
        variant=WeightVariant(params.variant).value,
        gammas=list(gammas),
        passed=all(o.passed for o in outcomes),
    )
    return outcomes


def check_whole_space_inequality(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    tol_rel: float = TOL_REL,
    tol_abs: float = TOL_ABS,
    serial: bool = True,
    max_workers: Optional[int] = None,
) -> List[InequalityOutcome]:
    """Whole-space inequality with weight exp(2 gamma (t^-K - 1) - (b |x|^2 + K) / t)

    Raises:
        CalibrationError: if params.calibrated is false
        ValueError: if the support leaves (0, 2) in time or the grid
    """
    _require_calibrated(params)
    _check_grid(u, grid)
    if u.lower[-1] < SUPPORT_TIME_FLOOR or u.upper[-1] > 2.0:
        raise ValueError(f"support time range must lie in [{SUPPORT_TIME_FLOOR}, 2]")
    return _sweep(u, field, params, grid, gammas, tol_rel, tol_abs, serial, max_workers)


def check_half_space_inequality(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    tol_rel: float = TOL_REL,
    tol_abs: float = TOL_ABS,
    serial: bool = True,
    max_workers: Optional[int] = None,
) -> List[InequalityOutcome]:
    """Half-space inequality with weight exp(2 gamma (t^-K - 1) x_n^alpha - (b psi + K) / t) on x_n >= 1

    Raises:
        CalibrationError: if params.calibrated is false
        HypothesisViolationError: if E >= E0
        ValueError: if the support leaves {x_n >= 1} x (0, 1] or the grid
    """
    _require_calibrated(params)
    bounds = field.bounds
    E0 = critical_decay(bounds)
    if bounds.E >= E0:
        raise HypothesisViolationError(f"decay constant E={bounds.E:.6g} must be below E0={E0:.6g}")
    _check_grid(u, grid)
    if u.lower[-2] < 1.0:
        raise ValueError(f"support must satisfy x_n >= 1, starts at x_n={u.lower[-2]:.4g}")
    if u.lower[-1] < SUPPORT_TIME_FLOOR or u.upper[-1] > 1.0:
        raise ValueError(f"support time range must lie in [{SUPPORT_TIME_FLOOR}, 1]")
    return _sweep(u, field, params, grid, gammas, tol_rel, tol_abs, serial, max_workers)


def refinement_ratios(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    levels: int = 2,
) -> List[float]:
    """LHS / RHS on successive grid refinements at the parameters' gamma"""
    ratios = []
    for _ in range(levels):
        ratios.append(compare_sides(u, field, params, grid).ratio)
        grid = grid.refine()
    return ratios


def outcomes_report(
    check_name: str, outcomes: Sequence[InequalityOutcome], tol_rel: float = TOL_REL
) -> MarginReport:
    """Fold a sweep into a margin report; the margin is 1 + tol_rel - lhs / rhs per gamma

    Ratios above one that still pass within tolerance are listed in details.
    """
    if not outcomes:
        raise ValueError("no outcomes to report")
    margins = [1.0 + tol_rel - o.ratio for o in outcomes]
    details = {f"ratio_gamma_{o.gamma:g}": o.ratio for o in outcomes}
    details["near_misses"] = float(sum(1 for o in outcomes if o.passed and o.ratio > 1.0))
    locations = np.array([[o.gamma] for o in outcomes])
    return MarginReport.from_margins(
        check_name,
        margins,
        tolerance=0.0,
        locations=locations,
        empirical_constant=max(o.ratio for o in outcomes),
        details=details,
    )

"""
Weighted Integral Identities
Both sides of the weighted energy identity for P u = d_t u + div(A grad u), computed independently by quadrature
"""

from dataclasses import dataclass
from typing import List, Optional, Protocol, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field

from ..calculus.differencing import convergence_order
from ..calculus.quadrature import QuadratureGrid, scaled_weighted_integrals
from ..calculus.test_functions import SpaceTimeJet, TestFunction
from ..estimates.dg import dg_matrix
from ..fields.base import CoefficientField
from ..mollify.kernel import Mollifier
from ..weights.carleman_weights import WeightEval, divergence_form_operator, make_weight, quadratic_form
from ..weights.params import WeightParams

logger = structlog.get_logger(__name__)

# Supports must stay this far from t = 0
SUPPORT_TIME_FLOOR = 0.05


class IdentityResult(BaseModel):
    """Both sides of an identity on a common scale exp(log_scale)"""

    lhs: float
    rhs: float
    residual: float = Field(ge=0.0)
    log_scale: float = 0.0
    node_count: int = 0
    level: int = 0


class TimeProfile(Protocol):
    """Positive increasing sigma(t) with its first two derivatives"""

    def evaluate(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        ...


@dataclass(frozen=True)
class ExponentialProfile:
    """sigma(t) = exp(rate t)"""

    rate: float = 1.0

    def evaluate(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        value = np.exp(self.rate * np.asarray(t, dtype=float))
        return value, self.rate * value, self.rate**2 * value


def exponential_profile(rate: float = 1.0) -> ExponentialProfile:
    if rate <= 0.0:
        raise ValueError(f"sigma must increase; got rate {rate}")
    return ExponentialProfile(rate)


def _check_support(u: TestFunction, grid: QuadratureGrid) -> None:
    if u.lower[-1] < SUPPORT_TIME_FLOOR:
        raise ValueError(
            f"support starts at t={u.lower[-1]:.4g}; it must stay above t={SUPPORT_TIME_FLOOR}"
        )
    if grid.dimension != u.lower.size:
        raise ValueError(f"grid dimension {grid.dimension} does not match support dimension {u.lower.size}")
    if np.any(grid.lower > u.lower + 1e-12) or np.any(grid.upper < u.upper - 1e-12):
        raise ValueError("quadrature grid does not cover the support of u")


def _evaluate(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    mollifier: Optional[Mollifier],
    with_mollified: bool,
) -> Tuple[SpaceTimeJet, WeightEval, np.ndarray]:
    _check_support(u, grid)
    nodes = grid.nodes
    x, t = nodes[:, :-1], nodes[:, -1]
    jet = u.evaluate(x, t)
    evaluation = make_weight(field, params, mollifier).evaluate(x, t, with_mollified=with_mollified)
    Pu = jet.dt + divergence_form_operator(evaluation.coefficients, jet.grad, jet.hess)
    return jet, evaluation, Pu


def _result(
    log_weight: np.ndarray, lhs: np.ndarray, rhs: np.ndarray, grid: QuadratureGrid
) -> IdentityResult:
    with np.errstate(invalid="ignore"):
        scaled = scaled_weighted_integrals(log_weight, {"lhs": lhs, "rhs": rhs}, grid.weights)
    L, R = scaled.values["lhs"], scaled.values["rhs"]
    return IdentityResult(
        lhs=L,
        rhs=R,
        residual=abs(L - R) / (1.0 + abs(L) + abs(R)),
        log_scale=scaled.log_scale,
        node_count=int(grid.weights.size),
        level=grid.level,
    )


def weighted_identity_residual(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    mollifier: Optional[Mollifier] = None,
) -> IdentityResult:
    """Residual of the weighted identity with the mollified correction F0

    With Lu = u_t - <A grad u, grad log G> + F u / 2 and
    M0 = d_t F + F (Y - F) + div(A grad F0) - <A grad(F - F0), grad log G>,
    the left side is

        1/2 int u^2 M0 G + int [2 <D_G grad u, grad u> + <A grad u, grad u>(Y - F)] G
            - int u <A grad u, grad(F - F0)> G

    and the right side is 2 int Lu (Pu - Lu) G. Both integrals are divided by
    the same factor, so the residual does not change when u is rescaled.

    Raises:
        ValueError: if the support of u reaches below the time floor or
            leaves the grid
    """
    jet, ev, Pu = _evaluate(u, field, params, grid, mollifier, with_mollified=True)
    A = ev.coefficients.matrix
    u_val, grad_u = jet.value, jet.grad
    A_grad_u = np.einsum("mij,mj->mi", A, grad_u)
    grad_difference = ev.grad_F - ev.grad_F0

    Lu = jet.dt - np.einsum("mi,mi->m", A_grad_u, ev.grad_log_g) + 0.5 * ev.F * u_val
    with np.errstate(over="ignore", invalid="ignore"):
        M0 = (
            ev.dt_F
            + ev.F * ev.heat_excess
            + ev.lap_F0
            - np.einsum("mij,mj,mi->m", A, grad_difference, ev.grad_log_g)
        )
        lhs = (
            0.5 * u_val**2 * M0
            + 2.0 * quadratic_form(dg_matrix(ev), grad_u)
            + quadratic_form(A, grad_u) * ev.heat_excess
            - u_val * np.einsum("mi,mi->m", A_grad_u, grad_difference)
        )
        rhs = 2.0 * Lu * (Pu - Lu)

    result = _result(ev.log_g, lhs, rhs, grid)
    logger.debug("weighted_identity_evaluated", residual=result.residual, nodes=result.node_count)
    return result


def general_identity_residual(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    profile: TimeProfile,
    alpha_exp: float,
    grid: QuadratureGrid,
    mollifier: Optional[Mollifier] = None,
) -> IdentityResult:
    """Residual of the identity with time profile sigma and exponent alpha

    With omega = sigma^(1 - alpha) / sigma', beta = alpha sigma' / (2 sigma),
    l = sigma'/sigma - sigma''/sigma', Lu = u_t - <A grad u, grad log G> + F u / 2 - beta u and
    M = l F + d_t F + (F - 2 beta)(Y - F) + div(A grad F0) - <A grad(F - F0), grad log G>,

        int omega [u^2 M / 2 + <A grad u, grad u>(l + Y - F)
                   + 2 <D_G grad u, grad u> - u <A grad u, grad(F - F0)>] G
            = 2 int omega Lu (Pu - Lu) G.

    For sigma = e^t and alpha = 0 the weight omega is one, l and beta vanish
    and both integrands coincide with those of the weighted identity.

    Raises:
        ValueError: if sigma or sigma' is not positive on the grid
    """
    jet, ev, Pu = _evaluate(u, field, params, grid, mollifier, with_mollified=True)
    sigma, d_sigma, dd_sigma = profile.evaluate(ev.t)
    if np.any(sigma <= 0.0) or np.any(d_sigma <= 0.0):
        raise ValueError("sigma and its derivative must be positive on the support")

    A = ev.coefficients.matrix
    u_val, grad_u = jet.value, jet.grad
    A_grad_u = np.einsum("mij,mj->mi", A, grad_u)
    grad_difference = ev.grad_F - ev.grad_F0
    beta = alpha_exp * d_sigma / (2.0 * sigma)
    ell = d_sigma / sigma - dd_sigma / d_sigma
    log_omega = (1.0 - alpha_exp) * np.log(sigma) - np.log(d_sigma)

    Lu = jet.dt - np.einsum("mi,mi->m", A_grad_u, ev.grad_log_g) + 0.5 * ev.F * u_val - beta * u_val
    with np.errstate(over="ignore", invalid="ignore"):
        M = (
            ell * ev.F
            + ev.dt_F
            + (ev.F - 2.0 * beta) * ev.heat_excess
            + ev.lap_F0
            - np.einsum("mij,mj,mi->m", A, grad_difference, ev.grad_log_g)
        )
        lhs = (
            0.5 * u_val**2 * M
            + 2.0 * quadratic_form(dg_matrix(ev), grad_u)
            + quadratic_form(A, grad_u) * (ell + ev.heat_excess)
            - u_val * np.einsum("mi,mi->m", A_grad_u, grad_difference)
        )
        rhs = 2.0 * Lu * (Pu - Lu)

    result = _result(ev.log_g + log_omega, lhs, rhs, grid)
    logger.debug(
        "general_identity_evaluated", residual=result.residual, alpha=alpha_exp, nodes=result.node_count
    )
    return result


class ConvergenceStudy(BaseModel):
    """Residuals over successive grid doublings and the measured order"""

    results: List[IdentityResult]
    order: float


def residual_convergence(
    u: TestFunction,
    field: CoefficientField,
    params: WeightParams,
    grid: QuadratureGrid,
    levels: int = 3,
    mollifier: Optional[Mollifier] = None,
) -> ConvergenceStudy:
    """Weighted identity residual on `levels` grids, each refining the previous one"""
    if levels < 3:
        raise ValueError(f"at least three levels are needed to measure an order, got {levels}")
    results = []
    for _ in range(levels):
        results.append(weighted_identity_residual(u, field, params, grid, mollifier))
        grid = grid.refine()
    order = convergence_order([r.residual for r in results])
    logger.info("identity_convergence", residuals=[r.residual for r in results], order=order)
    return ConvergenceStudy(results=results, order=order)

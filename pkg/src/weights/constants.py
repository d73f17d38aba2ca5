"""
Default Weight Constants
Critical decay, default (b, K, alpha) choices and the short-time horizon
"""

import math
from dataclasses import dataclass

from ..models.enums import WeightVariant
from ..models.errors import HypothesisViolationError
from ..models.shared import EllipticityBounds
from .params import WeightParams, damping_exponent

# alpha = 1 + E / E0 degenerates at E = 0
ALPHA_FLOOR = 1e-6


def critical_decay(bounds: EllipticityBounds) -> float:
    """E0 = lambda / (16 n^2 kappa (kappa + 1))"""
    kappa = bounds.kappa
    return bounds.lower / (16.0 * bounds.n**2 * kappa * (kappa + 1.0))


@dataclass(frozen=True)
class DefaultConstants:
    """Default parameters together with the derived horizon constants"""

    params: WeightParams
    critical_decay: float
    horizon: float  # T1
    tau: float      # sqrt(2 T1)


def default_constants(
    bounds: EllipticityBounds,
    variant: WeightVariant,
    d: float = 1.0,
    gamma: float = 1.0,
    N: float = 1.0,
) -> DefaultConstants:
    """Default weight parameters for a field with the given bounds

    Raises:
        HypothesisViolationError: half-space variant with E >= E0
    """
    if d <= 0.0 or N <= 0.0:
        raise ValueError(f"d and N must be positive, got d={d}, N={N}")
    variant = WeightVariant(variant)
    kappa = bounds.kappa
    E0 = critical_decay(bounds)

    if variant is WeightVariant.WHOLE_SPACE:
        b = 1.0 / (8.0 * bounds.upper)
        alpha = None
    else:
        if bounds.E >= E0:
            raise HypothesisViolationError(
                f"decay constant E={bounds.E:.6g} must be below the critical value E0={E0:.6g}"
            )
        b = 1.0 / (64.0 * bounds.upper * (kappa + 1.0) ** 4)
        alpha = max(1.0 + bounds.E / E0, 1.0 + ALPHA_FLOOR)

    params = WeightParams(
        variant=variant,
        gamma=gamma,
        b=b,
        K=damping_exponent(variant, d, kappa),
        d=d,
        kappa=kappa,
        alpha=alpha,
    )
    horizon = min(b / (32.0 * N), 1.0 / (12.0 * N**2), 0.5)
    return DefaultConstants(params, E0, horizon, math.sqrt(2.0 * horizon))

"""
Tensor Quadrature
Gauss-Legendre and midpoint tensor grids on boxes, plus log-space weighted integration
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from ..models.enums import QuadratureRule


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Tensor product grid on the box [lower, upper]

    Nodes are ordered with the last axis varying fastest; in space-time grids
    the last axis is time.
    """

    lower: np.ndarray
    upper: np.ndarray
    axis_nodes: Tuple[np.ndarray, ...]
    axis_weights: Tuple[np.ndarray, ...]
    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE
    level: int = 0

    @classmethod
    def build(
        cls,
        lower: Sequence[float],
        upper: Sequence[float],
        nodes_per_axis: Union[int, Sequence[int]],
        rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE,
        level: int = 0,
    ) -> "QuadratureGrid":
        """Build a tensor grid

        Args:
            lower: Lower corner of the box
            upper: Upper corner of the box
            nodes_per_axis: Node count, shared or per axis
            rule: Gauss-Legendre or midpoint
            level: Refinement level recorded on the grid

        Returns:
            QuadratureGrid
        """
        lo = np.asarray(lower, dtype=float).ravel()
        hi = np.asarray(upper, dtype=float).ravel()
        if lo.shape != hi.shape or lo.size == 0:
            raise ValueError("box corners must be non-empty and of equal dimension")
        if np.any(hi <= lo):
            raise ValueError(f"degenerate box: lower={lo.tolist()}, upper={hi.tolist()}")

        counts = (
            [int(nodes_per_axis)] * lo.size
            if np.isscalar(nodes_per_axis)
            else [int(c) for c in nodes_per_axis]  # type: ignore[union-attr]
        )
        if len(counts) != lo.size or min(counts) < 1:
            raise ValueError(f"invalid nodes_per_axis: {nodes_per_axis}")

        nodes, weights = [], []
        for a, b, count in zip(lo, hi, counts):
            reference, ref_weights = _reference_rule(count, rule)
            half = 0.5 * (b - a)
            nodes.append(half * reference + 0.5 * (a + b))
            weights.append(half * ref_weights)

        return cls(lo, hi, tuple(nodes), tuple(weights), rule, level)

    @property
    def dimension(self) -> int:
        return int(self.lower.size)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(int(a.size) for a in self.axis_nodes)

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    @cached_property
    def nodes(self) -> np.ndarray:
        """All nodes as an (N, dimension) array"""
        mesh = np.meshgrid(*self.axis_nodes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def weights(self) -> np.ndarray:
        """Tensor weights as an (N,) array"""
        mesh = np.meshgrid(*self.axis_weights, indexing="ij")
        return np.prod(np.stack([m.ravel() for m in mesh], axis=-1), axis=-1)

    def refine(self) -> "QuadratureGrid":
        """Grid with twice the nodes per axis, one level up"""
        return QuadratureGrid.build(
            self.lower, self.upper, [2 * c for c in self.counts], self.rule, self.level + 1
        )


def _reference_rule(count: int, rule: QuadratureRule) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]"""
    if QuadratureRule(rule) is QuadratureRule.GAUSS_LEGENDRE:
        return np.polynomial.legendre.leggauss(count)
    edges = np.linspace(-1.0, 1.0, count + 1)
    return 0.5 * (edges[:-1] + edges[1:]), np.full(count, 2.0 / count)


def integrate(func: Callable[[np.ndarray], np.ndarray], grid: QuadratureGrid) -> float:
    """Integrate a vectorized function over the grid box"""
    values = np.asarray(func(grid.nodes), dtype=float)
    return float(grid.weights @ values)


def log_weighted_integral(
    log_weight: np.ndarray, values: np.ndarray, quad_weights: np.ndarray
) -> Tuple[float, float]:
    """Signed log of sum_i w_i v_i exp(log_weight_i)

    Returns:
        (log |integral|, sign); a vanishing integral gives (-inf, 0.0)
    """
    coefficients = np.asarray(quad_weights, dtype=float) * np.asarray(values, dtype=float)
    active = coefficients != 0.0
    if not np.any(active):
        return -np.inf, 0.0
    log_abs, sign = logsumexp(log_weight[active], b=coefficients[active], return_sign=True)
    return float(log_abs), float(sign)


@dataclass(frozen=True)
class ScaledIntegrals:
    """Weighted integrals divided by a common factor exp(log_scale)"""

    values: Dict[str, float]
    log_scale: float


def scaled_weighted_integrals(
    log_weight: np.ndarray,
    integrands: Dict[str, np.ndarray],
    quad_weights: np.ndarray,
) -> ScaledIntegrals:
    """Evaluate several weighted integrals on one shared scale

    The common shift is the largest log magnitude among the integrals, so the
    biggest scaled value has magnitude one and ratios stay exact even when
    the weight itself overflows double precision.
    """
    logs = {
        name: log_weighted_integral(log_weight, values, quad_weights)
        for name, values in integrands.items()
    }
    finite = [log_abs for log_abs, sign in logs.values() if sign != 0.0]
    if not finite:
        return ScaledIntegrals({name: 0.0 for name in integrands}, 0.0)

    shift = max(finite)
    scaled = {
        name: (sign * float(np.exp(log_abs - shift)) if sign != 0.0 else 0.0)
        for name, (log_abs, sign) in logs.items()
    }
    return ScaledIntegrals(scaled, shift)

"""
Finite Differences
Central differences with Richardson extrapolation and empirical convergence orders
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np

VectorFunction = Callable[[np.ndarray], np.ndarray]


def central_difference(func: VectorFunction, points: np.ndarray, axis: int, h: float) -> np.ndarray:
    """(f(p + h e_axis) - f(p - h e_axis)) / 2h for every row of points"""
    step = np.zeros(points.shape[1])
    step[axis] = h
    return (np.asarray(func(points + step)) - np.asarray(func(points - step))) / (2.0 * h)


def richardson_difference(
    func: VectorFunction, points: np.ndarray, axis: int, h: float = 1e-4
) -> np.ndarray:
    """Fourth-order derivative estimate from steps h and h/2"""
    coarse = central_difference(func, points, axis, h)
    fine = central_difference(func, points, axis, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def fd_jacobian(
    func: VectorFunction,
    points: np.ndarray,
    h: float = 1e-4,
    axes: Optional[Sequence[int]] = None,
    richardson: bool = True,
) -> np.ndarray:
    """Derivatives of func along the given axes, stacked on a new last axis

    func maps (m, d) points to (m, ...) values; the result has shape (m, ..., k)
    where k is the number of axes.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    axes = range(points.shape[1]) if axes is None else axes
    diff = richardson_difference if richardson else central_difference
    return np.stack([diff(func, points, axis, h) for axis in axes], axis=-1)


def five_point_laplacian(func: VectorFunction, points: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Second-order Laplacian stencil with a per-point step h (m,)"""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    h = np.broadcast_to(np.asarray(h, dtype=float), (points.shape[0],))
    total = -2.0 * points.shape[1] * np.asarray(func(points))
    for axis in range(points.shape[1]):
        step = np.zeros_like(points)
        step[:, axis] = h
        total = total + np.asarray(func(points + step)) + np.asarray(func(points - step))
    return total / h**2


def convergence_order(residuals: Sequence[float], steps: Optional[Sequence[float]] = None) -> float:
    """Least-squares slope of log(residual) against log(step)

    Steps default to a halving sequence. A non-positive residual means the
    sequence has converged below measurement and gives +inf.
    """
    values = np.asarray(residuals, dtype=float)
    if values.size < 3:
        raise ValueError(f"at least three residuals are needed, got {values.size}")
    h = 0.5 ** np.arange(values.size) if steps is None else np.asarray(steps, dtype=float)
    if h.shape != values.shape:
        raise ValueError(f"{h.size} steps for {values.size} residuals")
    if np.any(values <= 0.0):
        return math.inf
    slope = np.polyfit(np.log(h), np.log(values), 1)[0]
    return float(slope)


def relative_error(approx: np.ndarray, exact: np.ndarray, floor: float = 1.0) -> np.ndarray:
    """|approx - exact| / max(|exact|, floor)"""
    exact = np.asarray(exact, dtype=float)
    return np.abs(np.asarray(approx, dtype=float) - exact) / np.maximum(np.abs(exact), floor)

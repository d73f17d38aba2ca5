"""
Smooth Transitions
The C-infinity step B(s) = e^(-1/s) / (e^(-1/s) + e^(-1/(1-s))) and rescaled ramps built from it
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

Jet = Tuple[np.ndarray, np.ndarray, np.ndarray]

# Inside (0, 1) arguments are clipped here; e^(-1/s) is already zero below it.
_EDGE = 1e-3


def _flat(s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """e^(-1/s) and its first two derivatives for s > 0"""
    value = np.exp(-1.0 / s)
    return value, value / s**2, value * (1.0 / s**4 - 2.0 / s**3)


def smooth_step(s: np.ndarray) -> Jet:
    """B(s) with B' and B''; B = 0 for s <= 0 and B = 1 for s >= 1"""
    s = np.asarray(s, dtype=float)
    inside = (s > 0.0) & (s < 1.0)
    c = np.clip(np.where(inside, s, 0.5), _EDGE, 1.0 - _EDGE)

    p, dp, ddp = _flat(c)
    q0, dq0, ddq0 = _flat(1.0 - c)
    # derivatives of q(s) = e^(-1/(1-s)) with respect to s
    q, dq, ddq = q0, -dq0, ddq0

    total = p + q
    numer = dp * q - p * dq
    value = p / total
    first = numer / total**2
    second = (ddp * q - p * ddq) / total**2 - 2.0 * numer * (dp + dq) / total**3

    value = np.where(inside, value, np.where(s >= 1.0, 1.0, 0.0))
    return value, np.where(inside, first, 0.0), np.where(inside, second, 0.0)


def ramp(p: np.ndarray, start: float, end: float) -> Jet:
    """B((p - start) / (end - start)) with derivatives in p; rises from 0 at start to 1 at end"""
    width = end - start
    if width <= 0.0:
        raise ValueError(f"ramp needs start < end, got ({start}, {end})")
    value, first, second = smooth_step((np.asarray(p, dtype=float) - start) / width)
    return value, first / width, second / width**2


@lru_cache(maxsize=1)
def max_step_slope(resolution: int = 200001) -> float:
    """sup B' sampled on a dense grid (attained at s = 1/2)"""
    _, first, _ = smooth_step(np.linspace(0.0, 1.0, resolution))
    return float(first.max())

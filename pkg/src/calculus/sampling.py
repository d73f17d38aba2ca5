"""
Sample Clouds
Seeded space-time sample points for pointwise margin checks
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class SampleCloud:
    """Points x (m, n) paired with times t (m,)"""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        if self.x.ndim != 2 or self.t.shape != (self.x.shape[0],):
            raise ValueError(f"incompatible sample shapes {self.x.shape} and {self.t.shape}")
        if self.x.shape[0] == 0:
            raise ValueError("empty sample cloud")

    def __len__(self) -> int:
        return int(self.x.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.x.shape[1])

    @property
    def locations(self) -> np.ndarray:
        """(m, n + 1) array of x then t"""
        return np.column_stack([self.x, self.t])

    def head(self, count: int) -> "SampleCloud":
        """First count samples; nested inside the full cloud"""
        count = max(1, min(int(count), len(self)))
        return SampleCloud(self.x[:count], self.t[:count])

    def select(self, mask: np.ndarray) -> "SampleCloud":
        return SampleCloud(self.x[mask], self.t[mask])


def _times(rng: np.random.Generator, count: int, t_min: float, t_max: float, log_time: bool) -> np.ndarray:
    if not 0.0 < t_min < t_max:
        raise ValueError(f"invalid time range ({t_min}, {t_max})")
    if log_time:
        return np.exp(rng.uniform(math.log(t_min), math.log(t_max), count))
    return rng.uniform(t_min, t_max, count)


def shell_samples(
    n: int,
    count: int,
    seed: int,
    r_min: float,
    r_max: float,
    t_min: float,
    t_max: float,
    log_time: bool = True,
) -> SampleCloud:
    """Uniform directions, uniform radii in [r_min, r_max], log-uniform times"""
    if count < 1:
        raise ValueError("count must be positive")
    if not 0.0 <= r_min <= r_max:
        raise ValueError(f"invalid radius range ({r_min}, {r_max})")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.uniform(r_min, r_max, count)
    return SampleCloud(directions * radii[:, None], _times(rng, count, t_min, t_max, log_time))


def half_space_samples(
    n: int,
    count: int,
    seed: int,
    xn_min: float,
    xn_max: float,
    lateral: float,
    t_min: float,
    t_max: float,
    log_time: bool = True,
) -> SampleCloud:
    """Points with x_n in [xn_min, xn_max] and tangential coordinates in [-lateral, lateral]"""
    if count < 1:
        raise ValueError("count must be positive")
    if not xn_min <= xn_max:
        raise ValueError(f"invalid normal range ({xn_min}, {xn_max})")
    rng = np.random.default_rng(seed)
    x = np.empty((count, n))
    x[:, :-1] = rng.uniform(-lateral, lateral, (count, n - 1))
    x[:, -1] = rng.uniform(xn_min, xn_max, count)
    return SampleCloud(x, _times(rng, count, t_min, t_max, log_time))


def time_floor(K: float, power: int = 1, ceiling: float = 1e250) -> float:
    """Smallest t with t^-(power (K + 2)) <= ceiling

    Margins built from t^-K weights overflow below this time; sweeps start
    from max(t_min, time_floor(K, power)).
    """
    return math.exp(-math.log(ceiling) / (power * (K + 2.0)))

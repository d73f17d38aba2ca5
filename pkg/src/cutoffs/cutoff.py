"""
Space-Time Cutoff
eta(y, s) = eta1(y_n) eta2(f(s) y_n^alpha / (2 C*) - 1) localising the half-space argument
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..calculus.sampling import SampleCloud
from ..models.shared import MarginReport, stability_margin
from .transitions import ramp

# eta2 rises over this interval of its argument
INNER_RAMP = (-0.75, -0.5)


def time_singularity(s: np.ndarray, K: float) -> Tuple[np.ndarray, np.ndarray]:
    """f(s) = s^-K - 1 and f'(s)"""
    s = np.asarray(s, dtype=float)
    power = s ** (-K)
    return power - 1.0, -K * power / s


class CutoffSpec(BaseModel):
    """Cutoff parameters; C* defaults to 1 + f(1/2) (1/tau + 2)^alpha"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: float = Field(1.0, gt=0.0, description="Short-time horizon")
    K: float = Field(1.0, gt=0.0, description="Time exponent of f")
    alpha: float = Field(1.5, ge=1.0, lt=2.0, description="Normal exponent")
    cstar: float = Field(0.0, description="Cutoff level C*")

    @model_validator(mode="before")
    @classmethod
    def fill_level(cls, data: Any) -> Any:
        """Compute C* when it is not given"""
        if isinstance(data, dict) and data.get("cstar") is None:
            tau = float(data.get("tau", 1.0))
            if tau <= 0.0:
                return data
            K = float(data.get("K", 1.0))
            alpha = float(data.get("alpha", 1.5))
            data = {**data, "cstar": 1.0 + (0.5**-K - 1.0) * (1.0 / tau + 2.0) ** alpha}
        return data

    @property
    def strip(self) -> Tuple[float, float]:
        """y_n interval on which eta1 rises"""
        return 1.0 / self.tau + 1.0, 1.0 / self.tau + 2.0


@dataclass(frozen=True, eq=False)
class CutoffJet:
    value: np.ndarray  # (m,)
    ds: np.ndarray     # (m,)
    grad: np.ndarray   # (m, n)
    hess: np.ndarray   # (m, n, n)


def eta(y: np.ndarray, s: np.ndarray, spec: CutoffSpec) -> CutoffJet:
    """Cutoff and its derivatives at points y (m, n) with y_n > 0, times s in (0, 1)"""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    s = np.broadcast_to(np.asarray(s, dtype=float), (y.shape[0],))
    if np.any(s <= 0.0) or np.any(s >= 1.0):
        raise ValueError("cutoff time must lie in (0, 1)")
    if np.any(y[:, -1] <= 0.0):
        raise ValueError("cutoff needs y_n > 0")

    m, n = y.shape
    yn = y[:, -1]
    a = spec.alpha
    f, df = time_singularity(s, spec.K)
    scale = 1.0 / (2.0 * spec.cstar)

    arg = f * yn**a * scale - 1.0
    arg_s = df * yn**a * scale
    arg_n = f * a * yn ** (a - 1.0) * scale
    arg_nn = f * a * (a - 1.0) * yn ** (a - 2.0) * scale

    outer, outer1, outer2 = ramp(yn, *spec.strip)
    inner, inner1, inner2 = ramp(arg, *INNER_RAMP)

    dn = outer1 * inner + outer * inner1 * arg_n
    dnn = outer2 * inner + 2.0 * outer1 * inner1 * arg_n + outer * (inner2 * arg_n**2 + inner1 * arg_nn)

    grad = np.zeros((m, n))
    grad[:, -1] = dn
    hess = np.zeros((m, n, n))
    hess[:, -1, -1] = dnn
    return CutoffJet(value=outer * inner, ds=outer * inner1 * arg_s, grad=grad, hess=hess)


def cutoff_samples(spec: CutoffSpec, count: int, seed: int, n: int = 2) -> SampleCloud:
    """y_n across and beyond the strip, s uniform in (1/2, 1)"""
    rng = np.random.default_rng(seed)
    lo, hi = spec.strip
    y = np.zeros((count, n))
    y[:, :-1] = rng.uniform(-1.0, 1.0, (count, n - 1))
    y[:, -1] = rng.uniform(lo - 0.5, hi + 2.0, count)
    s = rng.uniform(0.5, 1.0, count)
    s = np.clip(s, 0.5 + 1e-9, 1.0 - 1e-9)
    return SampleCloud(y, s)


def verify_omega_identity(spec: CutoffSpec, samples: SampleCloud, tol: float = 1e-12) -> MarginReport:
    """Check that f(s) y_n^alpha < C* across the strip for s > 1/2

    The margin is C* - f(s) y_n^alpha on strip samples. The transition set
    {0 < eta < 1} is also compared with its closed description away from
    thin bands around the thresholds; any disagreement forces a failing
    margin equal to minus the number of mismatches.
    """
    y, s = samples.x, samples.t
    yn = y[:, -1]
    lo, hi = spec.strip
    f, _ = time_singularity(s, spec.K)
    level = f * yn**spec.alpha

    on_strip = (yn > lo) & (yn < hi) & (s > 0.5)
    if not np.any(on_strip):
        raise ValueError("no samples on the transition strip")
    margins = spec.cstar - level[on_strip]

    ratio = level / spec.cstar
    values = eta(y, s, spec).value
    observed = (values > 0.0) & (values < 1.0)
    predicted = ((yn > lo) & (yn < hi) & (ratio > 0.5)) | ((yn >= hi) & (ratio > 0.5) & (ratio < 1.0))
    clear = (
        (np.abs(yn - lo) > 0.02)
        & (np.abs(yn - hi) > 0.02)
        & (np.abs(ratio - 0.5) > 0.02)
        & (np.abs(ratio - 1.0) > 0.02)
        & (s > 0.5)
    )
    mismatches = int(np.sum(observed[clear] != predicted[clear]))
    if mismatches:
        margins = np.append(margins, -float(mismatches))

    details: Dict[str, float] = {
        "cstar": spec.cstar,
        "strip_samples": float(on_strip.sum()),
        "set_mismatches": float(mismatches),
    }
    points = np.column_stack([y, s])
    locations = points[on_strip]
    if mismatches:
        first = int(np.argmax(clear & (observed != predicted)))
        locations = np.vstack([locations, points[first]])
    return MarginReport.from_margins(
        "cutoff_level_set", margins, tolerance=tol, locations=locations, details=details
    )


def _derivative_constant(spec: CutoffSpec, samples: SampleCloud) -> float:
    jet = eta(samples.x, samples.t, spec)
    total = np.abs(jet.ds) + np.linalg.norm(jet.grad, axis=1) + np.linalg.norm(jet.hess, axis=(1, 2))
    return float(np.max(total / samples.x[:, -1] ** spec.alpha))


def verify_cutoff_derivative_bound(spec: CutoffSpec, samples: SampleCloud) -> MarginReport:
    """Empirical C with |d_s eta| + |grad eta| + |grad^2 eta| <= C y_n^alpha, stable under 4x samples"""
    coarse = _derivative_constant(spec, samples.head(len(samples) // 4))
    fine = _derivative_constant(spec, samples)
    return MarginReport.from_margins(
        "cutoff_derivative_bound",
        [stability_margin(coarse, fine)],
        tolerance=0.0,
        empirical_constant=fine,
        details={"coarse_constant": coarse, "fine_constant": fine},
    )

"""
Cone Checks
Gradient decay margins, Laplacian pull-back residuals and the backward uniqueness threshold
"""

import math
from typing import Optional, Protocol, Tuple

import numpy as np

from ..calculus.differencing import five_point_laplacian
from ..fields.structure import entry_gradient_norms
from ..models.enums import ThresholdVerdict
from ..models.errors import DomainError
from ..models.shared import MarginReport
from .construction import ConeParams, cone_matrix, cone_matrix_gradient, shifted_field

# Below this the backward uniqueness argument applies; above BU_UPPER_THRESHOLD
# a cone counterexample exists.
BU_LOWER_THRESHOLD = (math.pi / (2.0 * math.acos(1.0 / math.sqrt(3.0)))) ** 2 - 1.0
BU_UPPER_THRESHOLD = 3.0


class PlanarProfile(Protocol):
    def evaluate(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]: ...


def critical_angle_degrees() -> float:
    """Sector opening at which the lower threshold is reached"""
    return math.degrees(2.0 * math.acos(1.0 / math.sqrt(3.0)))


def threshold_classify(E1: float) -> ThresholdVerdict:
    """Classify a decay constant against the two thresholds"""
    if E1 < 0.0:
        raise ValueError(f"decay constant must be non-negative, got {E1}")
    if E1 > BU_UPPER_THRESHOLD:
        return ThresholdVerdict.BU_FAILS
    if E1 < BU_LOWER_THRESHOLD:
        return ThresholdVerdict.BU_HOLDS
    return ThresholdVerdict.INDETERMINATE


def gradient_bound_check(
    params: ConeParams,
    samples: np.ndarray,
    tol: float = 1e-12,
    decay: Optional[float] = None,
) -> MarginReport:
    """Margins of the shifted cone field gradient against three decay references

    The entrywise gradient norm is compared with the constant E1, with
    E1 / |y + e_2| and with E1 / |y| (points at the origin skip the last one).

    Args:
        params: Cone parameters
        samples: Points y (m, 2) with y_2 >= 0
        tol: Allowed negative slack
        decay: Decay constant to test; l^2 - 1 by default
    """
    y = np.atleast_2d(np.asarray(samples, dtype=float))
    field = shifted_field(params)
    E1 = params.excess if decay is None else float(decay)

    jet = field.evaluate(y, np.zeros(y.shape[0]))
    worst = entry_gradient_norms(jet.gradient).max(axis=(1, 2))
    shifted_radius = np.linalg.norm(y + np.array([0.0, field.shift]), axis=1)
    radius = np.linalg.norm(y, axis=1)

    components = {
        "uniform": E1 - worst,
        "shifted_radius": E1 / shifted_radius - worst,
        "plain_radius": np.where(radius > 1e-12, E1 / np.maximum(radius, 1e-300) - worst, np.inf),
    }
    margins = np.min(np.stack(list(components.values())), axis=0)
    return MarginReport.from_margins(
        "cone_gradient_bound",
        margins,
        tolerance=tol,
        locations=y,
        empirical_constant=float(np.max(worst * shifted_radius)),
        details={name: float(values.min()) for name, values in components.items()},
    )


def _pulled_back(profile: PlanarProfile, params: ConeParams, anchors: np.ndarray, angles: np.ndarray):
    """u(x) = profile(y(x)) near each anchor, with angles measured from the anchor"""

    def u(points: np.ndarray) -> np.ndarray:
        cross = anchors[:, 0] * points[:, 1] - anchors[:, 1] * points[:, 0]
        dot = np.einsum("mi,mi->m", anchors, points)
        theta = angles + np.arctan2(cross, dot)
        rho = np.linalg.norm(points, axis=1)
        y = np.column_stack([rho * np.cos(params.l * theta), rho * np.sin(params.l * theta)])
        return profile.evaluate(y)[0]

    return u


def operator_equivalence_residual(
    profile: PlanarProfile,
    params: ConeParams,
    samples: np.ndarray,
    r_min: float = 0.1,
    h: Optional[float] = None,
    tol: float = 1e-6,
) -> MarginReport:
    """Compare the x-Laplacian of the pulled-back profile with div(A grad phi)

    The Laplacian uses a five-point stencil in the sector variables; the
    reference is assembled from the closed-form cone matrix and its gradient.
    The report margin is minus the relative residual |diff| / (1 + |ref|).

    Raises:
        DomainError: if a sample is within r_min of the vertex or below the axis
    """
    y = np.atleast_2d(np.asarray(samples, dtype=float))
    radius = np.linalg.norm(y, axis=1)
    if np.any(radius < r_min):
        bad = int(np.argmin(radius))
        raise DomainError(f"sample {y[bad].tolist()} closer than {r_min} to the vertex")
    if np.any(y[:, 1] <= 0.0):
        raise DomainError("samples must lie in the open upper half-plane")

    angles = np.arctan2(y[:, 1], y[:, 0]) / params.l
    anchors = radius[:, None] * np.column_stack([np.cos(angles), np.sin(angles)])
    steps = np.minimum(1e-3, radius / 100.0) if h is None else np.full(y.shape[0], float(h))

    laplacian = five_point_laplacian(_pulled_back(profile, params, anchors, angles), anchors, steps)

    _, grad, hess = profile.evaluate(y)
    A = cone_matrix(y, params)
    dA = cone_matrix_gradient(y, params)
    reference = np.einsum("mij,mij->m", A, hess) + np.einsum("miij,mj->m", dA, grad)

    residual = np.abs(laplacian - reference) / (1.0 + np.abs(reference))
    return MarginReport.from_margins(
        "operator_equivalence",
        -residual,
        tolerance=tol,
        locations=y,
        empirical_constant=float(residual.max()),
        details={"mean_residual": float(residual.mean())},
    )

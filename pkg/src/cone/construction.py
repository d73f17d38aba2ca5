"""
Cone Coefficient Construction
Angular stretching matrices that pull the Laplacian on a sector back to the half-plane
"""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq

from ..fields.base import CoefficientField, CoefficientJet
from ..models.enums import DomainTag, FieldFamily
from ..models.errors import DomainError
from ..models.shared import EllipticityBounds
from ..weights.constants import critical_decay


class ConeParams(BaseModel):
    """Sector opening theta0 in (0, pi]; the stretch factor is l = pi / theta0"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta0: float = Field(math.pi / 2.0, gt=0.0, le=math.pi, description="Sector opening angle")

    @property
    def l(self) -> float:
        return math.pi / self.theta0

    @property
    def excess(self) -> float:
        """l^2 - 1, the decay constant of the shifted field"""
        return self.l**2 - 1.0

    @classmethod
    def from_l(cls, l: float) -> "ConeParams":
        if l < 1.0:
            raise ValueError(f"stretch factor must be >= 1, got {l}")
        return cls(theta0=math.pi / l)


def params_for_decay(E1: float) -> ConeParams:
    """Cone whose shifted field has decay constant E1 = l^2 - 1"""
    if E1 < 0.0:
        raise ValueError(f"decay constant must be non-negative, got {E1}")
    return ConeParams.from_l(math.sqrt(1.0 + E1))


def decay_matched_params(fraction: float = 0.5, n: int = 2) -> ConeParams:
    """Cone whose decay constant is the given fraction of its own critical decay

    With lambda = 1 and kappa = l^2 = 1 + e the condition e = fraction * E0
    is solved for e by bracketing on [0, 1].
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")

    def mismatch(e: float) -> float:
        bounds = EllipticityBounds(n=n, lower=1.0, upper=1.0 + e, M=e, E=e)
        return e - fraction * critical_decay(bounds)

    return params_for_decay(brentq(mismatch, 0.0, 1.0, xtol=1e-15))


def _shifted(y: np.ndarray, shift: float) -> Tuple[np.ndarray, np.ndarray]:
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if y.shape[1] != 2:
        raise ValueError(f"cone matrices are planar, got dimension {y.shape[1]}")
    z = y + np.array([0.0, shift])
    r2 = np.einsum("mi,mi->m", z, z)
    if np.any(r2 == 0.0):
        raise DomainError("cone matrix undefined at the vertex")
    return z, r2


def cone_matrix(y: np.ndarray, params: ConeParams, shift: float = 0.0) -> np.ndarray:
    """I + (l^2 - 1) v v^T / |z|^2 with z = y + shift e_2 and v = (z_2, -z_1)"""
    z, r2 = _shifted(y, shift)
    v = np.column_stack([z[:, 1], -z[:, 0]])
    return np.eye(2) + params.excess * np.einsum("mi,mj->mij", v, v) / r2[:, None, None]


def cone_matrix_gradient(y: np.ndarray, params: ConeParams, shift: float = 0.0) -> np.ndarray:
    """d_k of the cone matrix, indexed [m, k, i, j]"""
    z, r2 = _shifted(y, shift)
    z1, z2 = z[:, 0], z[:, 1]
    r4 = r2**2
    d_z2sq = np.column_stack([-2.0 * z1 * z2**2, 2.0 * z2 * z1**2]) / r4[:, None]
    d_z1sq = np.column_stack([2.0 * z1 * z2**2, -2.0 * z1**2 * z2]) / r4[:, None]
    d_cross = np.column_stack([z2 * (z2**2 - z1**2), z1 * (z1**2 - z2**2)]) / r4[:, None]

    grad = np.empty((z.shape[0], 2, 2, 2))
    grad[:, :, 0, 0] = d_z2sq
    grad[:, :, 1, 1] = d_z1sq
    grad[:, :, 0, 1] = -d_cross
    grad[:, :, 1, 0] = -d_cross
    return params.excess * grad


class ConeField(CoefficientField):
    """Cone matrix translated by one unit into the upper half-plane

    On {y_2 >= 0} it satisfies lambda = 1, Lambda = l^2 and
    |grad b^{ij}| <= (l^2 - 1) / |y + e_2| <= (l^2 - 1) / |y|.
    """

    family = FieldFamily.CONE

    def __init__(self, params: ConeParams, shift: float = 1.0) -> None:
        if shift <= 0.0:
            raise ValueError("the shifted cone field needs a positive shift")
        self.params = params
        self.shift = float(shift)
        excess = params.excess
        bounds = EllipticityBounds(n=2, lower=1.0, upper=params.l**2, M=excess, E=excess)
        super().__init__(bounds, DomainTag.SHIFTED_HALF_SPACE)

    @property
    def is_constant(self) -> bool:  # type: ignore[override]
        return self.params.excess == 0.0

    def _evaluate(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        m = x.shape[0]
        return CoefficientJet(
            matrix=cone_matrix(x, self.params, self.shift),
            gradient=cone_matrix_gradient(x, self.params, self.shift),
            time_derivative=np.zeros((m, 2, 2)),
        )


def shifted_field(params: ConeParams) -> ConeField:
    return ConeField(params, shift=1.0)

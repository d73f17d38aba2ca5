"""
Coefficient Field Interface
Space-time coefficient matrices with first derivatives and the domains they live on
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from ..models.enums import DomainTag, FieldFamily
from ..models.errors import DomainError
from ..models.shared import EllipticityBounds

logger = structlog.get_logger(__name__)

_TIME_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class CoefficientJet:
    """Coefficients and derivatives at m sample points

    gradient[:, k, i, j] = d_k a^{ij}; hessian[:, k, l, i, j] = d_k d_l a^{ij}.
    """

    matrix: np.ndarray           # (m, n, n)
    gradient: np.ndarray         # (m, n, n, n)
    time_derivative: np.ndarray  # (m, n, n)
    hessian: Optional[np.ndarray] = None  # (m, n, n, n, n)

    @property
    def divergence(self) -> np.ndarray:
        """Column divergence sum_i d_i a^{ij}, shape (m, n)"""
        return np.einsum("miij->mj", self.gradient)

    def as_tuple(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.matrix, self.gradient, self.time_derivative


class CoefficientField(ABC):
    """Symmetric, uniformly elliptic coefficient field a(x, t)"""

    family: FieldFamily
    is_constant: bool = False

    def __init__(self, bounds: EllipticityBounds, domain_tag: DomainTag) -> None:
        self.bounds = bounds
        self.domain_tag = DomainTag(domain_tag)

    @property
    def n(self) -> int:
        return self.bounds.n

    def contains(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Mask of space-time points inside the domain"""
        x = np.atleast_2d(x)
        t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
        if self.domain_tag is DomainTag.WHOLE_SPACE:
            return (t >= -_TIME_SLACK) & (t <= 2.0 + _TIME_SLACK)
        if self.domain_tag is DomainTag.HALF_SPACE:
            return (x[:, -1] >= 0.0) & (t >= -_TIME_SLACK) & (t <= 1.0 + _TIME_SLACK)
        return x[:, -1] >= 0.0

    def contains_ball(self, x: np.ndarray, radius: float) -> np.ndarray:
        """Mask of points whose closed spatial ball of the given radius stays in the domain"""
        x = np.atleast_2d(x)
        if self.domain_tag is DomainTag.WHOLE_SPACE:
            return np.ones(x.shape[0], dtype=bool)
        return x[:, -1] - radius >= 0.0

    def project(self, x: np.ndarray) -> np.ndarray:
        """Map points onto the spatial domain along the normal ray"""
        if self.domain_tag is DomainTag.WHOLE_SPACE:
            return x
        projected = np.array(x, dtype=float, copy=True)
        projected[..., -1] = np.maximum(projected[..., -1], 0.0)
        return projected

    def evaluate(self, x: np.ndarray, t: np.ndarray, validate: bool = True) -> CoefficientJet:
        """Coefficients at points x (m, n) and times t (m,)

        Raises:
            DomainError: if a point lies outside the field's domain
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
        if x.shape[1] != self.n:
            raise ValueError(f"expected points of dimension {self.n}, got {x.shape[1]}")
        if validate:
            inside = self.contains(x, t)
            if not np.all(inside):
                bad = int(np.argmin(inside))
                raise DomainError(
                    f"{self.family.value} field evaluated outside {self.domain_tag.value}: "
                    f"x={x[bad].tolist()}, t={float(t[bad])}"
                )
        return self._evaluate(x, t)

    @abstractmethod
    def _evaluate(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        """Evaluate at validated points"""


def eval_coefficients(
    field: CoefficientField, x: np.ndarray, t: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(A, grad A, d_t A) at the given points"""
    return field.evaluate(x, t).as_tuple()


def take_rows(jet: CoefficientJet, rows: np.ndarray) -> CoefficientJet:
    """Subset of a jet selected by a mask or index array"""
    return CoefficientJet(
        jet.matrix[rows],
        jet.gradient[rows],
        jet.time_derivative[rows],
        None if jet.hessian is None else jet.hessian[rows],
    )

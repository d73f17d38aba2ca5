"""
Mollifier Kernel
Normalised bump kernel on the unit ball and space convolution of coefficient fields
"""

import math
from functools import partial
from typing import Optional, Tuple

import numpy as np
import structlog
from scipy.integrate import quad
from scipy.special import gamma as gamma_function

from ..calculus.quadrature import QuadratureGrid
from ..fields.base import CoefficientField, CoefficientJet
from ..models.enums import DomainTag
from ..models.errors import DomainError
from ..utils.parallel import chunk_slices, concatenate_chunks, map_chunks

logger = structlog.get_logger(__name__)

# Kernel nodes with 1 - |s|^2 below this carry exactly zero weight in double precision.
_KERNEL_EDGE = 2e-3
# Upper bound on (points x kernel nodes) evaluated per chunk
_CHUNK_BUDGET = 40_000
# Coarse step of the Richardson-extrapolated Hessian, relative to epsilon
_HESSIAN_STEP = 0.05


def _sphere_area(n: int) -> float:
    return 2.0 * math.pi ** (n / 2.0) / float(gamma_function(n / 2.0))


def _radial_integral(n: int, integrand) -> float:
    value, _ = quad(lambda r: r ** (n - 1) * integrand(r), 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return _sphere_area(n) * value


def _raw_profile(r: float) -> float:
    q = 1.0 - r * r
    return math.exp(-1.0 / q) if q > 0.0 else 0.0


class Mollifier:
    """phi(s) = C exp(-1 / (1 - |s|^2)) on the unit ball, scaled to radius epsilon

    The normalising constant C, the second moment of phi and the L1 norm of
    grad phi come from radial integrals. Convolutions use a tensor
    Gauss-Legendre rule on [-1, 1]^n whose weights are rescaled so the
    discrete rule reproduces the mass and the second moment of phi exactly.
    """

    def __init__(
        self,
        n: int,
        epsilon: float = 0.5,
        order: int = 24,
        serial: bool = True,
        max_workers: Optional[int] = None,
    ) -> None:
        if epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        if order < 2:
            raise ValueError(f"quadrature order must be at least 2, got {order}")
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")

        self.n = n
        self.epsilon = float(epsilon)
        self.order = order
        self.serial = serial
        self.max_workers = max_workers

        self.constant = 1.0 / _radial_integral(n, _raw_profile)
        self.grad_l1 = self.constant * _radial_integral(
            n, lambda r: _raw_profile(r) * 2.0 * r / (1.0 - r * r) ** 2 if r < 1.0 else 0.0
        )
        # int |s|^2 phi(s) ds
        self.second_moment = self.constant * _radial_integral(n, lambda r: r * r * _raw_profile(r))

        grid = QuadratureGrid.build(-np.ones(n), np.ones(n), order)
        s = grid.nodes
        q = 1.0 - np.einsum("qi,qi->q", s, s)
        inside = q > _KERNEL_EDGE
        s, w, q = s[inside], grid.weights[inside], q[inside]

        raw = w * self.constant * np.exp(-1.0 / q)
        r2 = 1.0 - q
        # weights raw * (alpha + beta |s|^2) with unit mass and the exact second moment
        moments = np.array([[raw.sum(), raw @ r2], [raw @ r2, raw @ r2**2]])
        alpha, beta = np.linalg.solve(moments, np.array([1.0, self.second_moment]))

        self.nodes = s
        self.value_weights = raw * (alpha + beta * r2)
        logger.debug("mollifier_ready", n=n, epsilon=epsilon, order=order, nodes=int(s.shape[0]))

    @property
    def node_count(self) -> int:
        return int(self.nodes.shape[0])

    def profile(self, s: np.ndarray) -> np.ndarray:
        """Normalised kernel values at points s (m, n)"""
        s = np.atleast_2d(np.asarray(s, dtype=float))
        q = 1.0 - np.einsum("mi,mi->m", s, s)
        inside = q > 0.0
        return np.where(inside, self.constant * np.exp(-1.0 / np.where(inside, q, 1.0)), 0.0)

    def mass(self) -> float:
        """Integral of the normalised kernel, from the radial rule"""
        return self.constant * _radial_integral(self.n, _raw_profile)


class MollifiedField(CoefficientField):
    """Spatial convolution a_eps(x, t) = int a(x - eps s, t) phi(s) ds

    The gradient is the convolution of grad a with the kernel. The Hessian is
    the Richardson extrapolation of central differences of that gradient.
    """

    def __init__(self, field: CoefficientField, mollifier: Mollifier, extend: bool = False) -> None:
        if mollifier.n != field.n:
            raise ValueError(f"mollifier dimension {mollifier.n} does not match field dimension {field.n}")
        super().__init__(field.bounds, field.domain_tag)
        self.family = field.family
        self.base = field
        self.mollifier = mollifier
        self.extend = extend

    @property
    def is_constant(self) -> bool:  # type: ignore[override]
        return self.base.is_constant

    def evaluate(self, x: np.ndarray, t: np.ndarray, validate: bool = True) -> CoefficientJet:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if validate and not self.extend:
            covered = self.base.contains_ball(x, self.mollifier.epsilon)
            if not np.all(covered):
                bad = int(np.argmin(covered))
                raise DomainError(
                    f"mollifier ball of radius {self.mollifier.epsilon} around {x[bad].tolist()} "
                    f"leaves {self.base.domain_tag.value}"
                )
        return super().evaluate(x, t, validate=validate)

    def _evaluate(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        m, n = x.shape
        if self.base.is_constant:
            jet = self.base.evaluate(x, t, validate=False)
            return CoefficientJet(
                jet.matrix, np.zeros((m, n, n, n)), jet.time_derivative, np.zeros((m, n, n, n, n))
            )

        # each point costs one convolution plus four per direction for the Hessian stencil
        per_chunk = max(1, _CHUNK_BUDGET // (self.mollifier.node_count * (1 + 4 * n)))
        chunks = chunk_slices(m, per_chunk)
        parts = map_chunks(
            partial(self._convolve, x, t),
            chunks,
            serial=self.mollifier.serial,
            max_workers=self.mollifier.max_workers,
        )
        return CoefficientJet(
            matrix=concatenate_chunks([p[0] for p in parts]),
            gradient=concatenate_chunks([p[1] for p in parts]),
            time_derivative=concatenate_chunks([p[2] for p in parts]),
            hessian=concatenate_chunks([p[3] for p in parts]),
        )

    def _smoothed(self, x: np.ndarray, t: np.ndarray, validate: bool) -> Tuple[np.ndarray, ...]:
        """Convolved matrix, gradient and time derivative at points x (m, n)"""
        k = self.mollifier
        m, n = x.shape
        q = k.node_count

        shifted = (x[:, None, :] - k.epsilon * k.nodes[None, :, :]).reshape(-1, n)
        outside = np.zeros(shifted.shape[0], dtype=bool)
        if self.extend and self.base.domain_tag is not DomainTag.WHOLE_SPACE:
            outside = shifted[:, -1] < 0.0
        if self.extend:
            shifted = self.base.project(shifted)
        jet = self.base.evaluate(shifted, np.repeat(t, q), validate=validate)
        grad = np.array(jet.gradient, copy=True)
        # the normal continuation is constant along x_n
        grad[outside, -1] = 0.0

        A = jet.matrix.reshape(m, q, n, n)
        dA = grad.reshape(m, q, n, n, n)
        At = jet.time_derivative.reshape(m, q, n, n)
        matrix = np.einsum("q,mqij->mij", k.value_weights, A)
        gradient = np.einsum("q,mqkij->mkij", k.value_weights, dA)
        time_derivative = np.einsum("q,mqij->mij", k.value_weights, At)
        return matrix, gradient, time_derivative

    def _gradient_difference(self, x: np.ndarray, t: np.ndarray, step: float) -> np.ndarray:
        """Central differences of the convolved gradient, indexed [m, l, k, i, j]"""
        m, n = x.shape
        offsets = step * np.eye(n)
        # stencil rows: +e_0, -e_0, +e_1, -e_1, ...
        stencil = (x[:, None, None, :] + np.stack([offsets, -offsets], axis=1)[None]).reshape(-1, n)
        _, gradient, _ = self._smoothed(stencil, np.repeat(t, 2 * n), validate=False)
        gradient = gradient.reshape(m, n, 2, n, n, n)
        return (gradient[:, :, 0] - gradient[:, :, 1]) / (2.0 * step)

    def _convolve(self, x: np.ndarray, t: np.ndarray, rows: slice) -> Tuple[np.ndarray, ...]:
        xc, tc = x[rows], t[rows]
        matrix, gradient, time_derivative = self._smoothed(xc, tc, validate=not self.extend)

        h = _HESSIAN_STEP * self.mollifier.epsilon
        coarse = self._gradient_difference(xc, tc, h)
        fine = self._gradient_difference(xc, tc, 0.5 * h)
        hessian = (4.0 * fine - coarse) / 3.0
        hessian = 0.5 * (hessian + np.swapaxes(hessian, 1, 2))
        return matrix, gradient, time_derivative, hessian


def mollify_field(field: CoefficientField, mollifier: Mollifier, extend: bool = False) -> MollifiedField:
    """Mollified view of a field; extend=True continues the field along the normal ray"""
    return MollifiedField(field, mollifier, extend)

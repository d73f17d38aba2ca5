"""
Carleman Weights
Whole-space and half-space weights G = exp(2 Phi) with F, its mollified twin F0 and the heat ratio

Both weights share one representation,

    Phi = gamma f(t) m(x) - (b q(x) + K) / (2t),   f(t) = t^-K - 1,
    F(a) = 2 Phi_t - 2 a^{ij} Phi_ij - 4 <a grad Phi, grad Phi> - H,

where the whole-space weight has m = 1, q = |x|^2, H = d (1/t + 1) and the
half-space weight has m = x_n^alpha, q = psi, H = 16 n^2 kappa E Phi1_n / |x| + d/t.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import Optional, Tuple

import numpy as np
import structlog

from ..fields.base import CoefficientField, CoefficientJet
from ..models.enums import WeightVariant
from ..models.errors import DomainError
from ..mollify.kernel import Mollifier, mollify_field
from .params import WeightParams
from .psi import PsiJet, psi_eval, psi_value

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PhaseJet:
    """Phi with spatial derivatives to order four and the mixed time derivatives"""

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray
    fourth: np.ndarray
    dt: np.ndarray
    dtt: np.ndarray
    grad_dt: np.ndarray
    hess_dt: np.ndarray

    def __add__(self, other: "PhaseJet") -> "PhaseJet":
        return PhaseJet(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))


@dataclass(frozen=True, eq=False)
class ScalarJet:
    value: np.ndarray
    dt: np.ndarray
    grad: np.ndarray
    hess: np.ndarray


@dataclass(frozen=True, eq=False)
class NormalProfile:
    """Normal part Phi1 = gamma f(t) x_n^alpha of the half-space phase

    ratio is Phi1_n / |x| with its spatial derivatives and time derivative.
    """

    value: np.ndarray
    dn: np.ndarray  # (m, 4): d_n^k Phi1 for k = 1..4
    dt: np.ndarray
    dtt: np.ndarray
    dnt: np.ndarray
    dnnt: np.ndarray
    ratio: np.ndarray
    ratio_dt: np.ndarray
    ratio_grad: np.ndarray
    ratio_hess: np.ndarray


@dataclass(frozen=True, eq=False)
class WeightEval:
    """Everything a weight produces at a batch of space-time points"""

    params: WeightParams
    x: np.ndarray
    t: np.ndarray
    coefficients: CoefficientJet
    phase: PhaseJet
    damping: ScalarJet
    log_g: np.ndarray
    grad_log_g: np.ndarray
    hess_log_g: np.ndarray
    dt_log_g: np.ndarray
    heat_ratio: np.ndarray
    F: np.ndarray
    dt_F: np.ndarray
    grad_F: np.ndarray
    decay_coefficient: float = 0.0
    normal: Optional[NormalProfile] = None
    psi: Optional[PsiJet] = None
    mollified: Optional[CoefficientJet] = None
    F0: Optional[np.ndarray] = None
    grad_F0: Optional[np.ndarray] = None
    hess_F0: Optional[np.ndarray] = None
    lap_F0: Optional[np.ndarray] = None

    @property
    def heat_excess(self) -> np.ndarray:
        """Y - F = H - 2 (div A) . grad Phi, formed without subtracting Y and F"""
        divergence = self.coefficients.divergence
        return self.damping.value - 2.0 * np.einsum("mj,mj->m", divergence, self.phase.grad)


# Building blocks shared by F, F0 and the heat ratio


def quadratic_form(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("mi,mij,mj->m", v, A, v)


def f_value(A: np.ndarray, phase: PhaseJet, damping: ScalarJet) -> np.ndarray:
    return (
        2.0 * phase.dt
        - 2.0 * np.einsum("mij,mij->m", A, phase.hess)
        - 4.0 * quadratic_form(A, phase.grad)
        - damping.value
    )


def f_time_derivative(A: np.ndarray, At: np.ndarray, phase: PhaseJet, damping: ScalarJet) -> np.ndarray:
    g, Hs = phase.grad, phase.hess
    return (
        2.0 * phase.dtt
        - 2.0 * (np.einsum("mij,mij->m", At, Hs) + np.einsum("mij,mij->m", A, phase.hess_dt))
        - 4.0 * (quadratic_form(At, g) + 2.0 * np.einsum("mi,mij,mj->m", phase.grad_dt, A, g))
        - damping.dt
    )


def f_gradient(A: np.ndarray, dA: np.ndarray, phase: PhaseJet, damping: ScalarJet) -> np.ndarray:
    g, Hs = phase.grad, phase.hess
    Ag = np.einsum("mij,mj->mi", A, g)
    return (
        2.0 * phase.grad_dt
        - 2.0 * (np.einsum("mkij,mij->mk", dA, Hs) + np.einsum("mij,mkij->mk", A, phase.third))
        - 4.0 * (np.einsum("mi,mkij,mj->mk", g, dA, g) + 2.0 * np.einsum("mki,mi->mk", Hs, Ag))
        - damping.grad
    )


def f_hessian(
    A: np.ndarray, dA: np.ndarray, d2A: np.ndarray, phase: PhaseJet, damping: ScalarJet
) -> np.ndarray:
    """Second spatial derivatives of F for coefficients with a known Hessian"""
    g, Hs, T3, T4 = phase.grad, phase.hess, phase.third, phase.fourth
    Ag = np.einsum("mij,mj->mi", A, g)
    dAg = np.einsum("mkij,mj->mki", dA, g)

    trace_part = (
        np.einsum("mklij,mij->mkl", d2A, Hs)
        + np.einsum("mkij,mlij->mkl", dA, T3)
        + np.einsum("mlij,mkij->mkl", dA, T3)
        + np.einsum("mij,mklij->mkl", A, T4)
    )
    cross = np.einsum("mli,mki->mkl", Hs, dAg)
    quadratic_part = (
        np.einsum("mi,mklij,mj->mkl", g, d2A, g)
        + 2.0 * cross
        + 2.0 * np.swapaxes(cross, 1, 2)
        + 2.0 * np.einsum("mkil,mi->mkl", T3, Ag)
        + 2.0 * np.einsum("mki,mij,mjl->mkl", Hs, A, Hs)
    )
    return 2.0 * phase.hess_dt - 2.0 * trace_part - 4.0 * quadratic_part - damping.hess


def heat_ratio(A: np.ndarray, dA: np.ndarray, phase: PhaseJet) -> np.ndarray:
    """(d_t G - div(A grad G)) / G for G = exp(2 Phi)"""
    divergence = np.einsum("miij->mj", dA)
    return (
        2.0 * phase.dt
        - 2.0 * np.einsum("mj,mj->m", divergence, phase.grad)
        - 2.0 * np.einsum("mij,mij->m", A, phase.hess)
        - 4.0 * quadratic_form(A, phase.grad)
    )


def divergence_form_operator(jet: CoefficientJet, grad: np.ndarray, hess: np.ndarray) -> np.ndarray:
    """a^{kl} d_kl w + d_k a^{kl} d_l w from the derivatives of w"""
    return np.einsum("mkl,mkl->m", jet.matrix, hess) + np.einsum("ml,ml->m", jet.divergence, grad)


class CarlemanWeight(ABC):
    """Weight G = exp(2 Phi) attached to a coefficient field"""

    variant: WeightVariant

    def __init__(
        self,
        field: CoefficientField,
        params: WeightParams,
        mollifier: Optional[Mollifier] = None,
    ) -> None:
        if WeightVariant(params.variant) is not self.variant:
            raise ValueError(f"{type(self).__name__} needs {self.variant.value} parameters")
        self.field = field
        self.params = params
        self.mollifier = mollifier

    @property
    def n(self) -> int:
        return self.field.n

    def time_profile(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """f = t^-K - 1 with f' and f''"""
        K = self.params.K
        with np.errstate(over="ignore"):
            power = np.power(t, -K)
            return power - 1.0, -K * power / t, K * (K + 1.0) * power / t**2

    def mollified_jet(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        mollifier = self.mollifier or Mollifier(self.n)
        return mollify_field(self.field, mollifier).evaluate(x, t)

    @abstractmethod
    def validate(self, x: np.ndarray, t: np.ndarray) -> None:
        """Raise DomainError for points outside the weight's domain"""

    @abstractmethod
    def phase(self, x: np.ndarray, t: np.ndarray) -> PhaseJet:
        """Phi and its derivatives"""

    @abstractmethod
    def damping(self, x: np.ndarray, t: np.ndarray) -> ScalarJet:
        """The lower-order term H subtracted in F"""

    @abstractmethod
    def log_weight(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """log G = 2 Phi without touching the field"""

    def normal_profile(self, x: np.ndarray, t: np.ndarray) -> Optional[NormalProfile]:
        return None

    @property
    def decay_coefficient(self) -> float:
        return 0.0

    def evaluate(
        self,
        x: np.ndarray,
        t: np.ndarray,
        mollified: Optional[CoefficientJet] = None,
        with_mollified: bool = True,
        validate: bool = True,
    ) -> WeightEval:
        """Evaluate the weight and its derived quantities

        Args:
            x: Points (m, n)
            t: Times (m,)
            mollified: Precomputed mollified coefficients at the same points
            with_mollified: Compute F0 and its derivatives
            validate: Check the domain of the weight and the field

        Returns:
            WeightEval
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],)).copy()
        if validate:
            self.validate(x, t)

        coefficients = self.field.evaluate(x, t, validate=validate)
        if with_mollified and mollified is None:
            mollified = self.mollified_jet(x, t)

        with np.errstate(over="ignore", invalid="ignore"):
            phase = self.phase(x, t)
            damping = self.damping(x, t)
            A, dA, At = coefficients.as_tuple()

            extras = {}
            if with_mollified and mollified is not None:
                hess_F0 = f_hessian(mollified.matrix, mollified.gradient, mollified.hessian, phase, damping)
                grad_F0 = f_gradient(mollified.matrix, mollified.gradient, phase, damping)
                extras = {
                    "mollified": mollified,
                    "F0": f_value(mollified.matrix, phase, damping),
                    "grad_F0": grad_F0,
                    "hess_F0": hess_F0,
                    "lap_F0": divergence_form_operator(coefficients, grad_F0, hess_F0),
                }

            return WeightEval(
                params=self.params,
                x=x,
                t=t,
                coefficients=coefficients,
                phase=phase,
                damping=damping,
                log_g=2.0 * phase.value,
                grad_log_g=2.0 * phase.grad,
                hess_log_g=2.0 * phase.hess,
                dt_log_g=2.0 * phase.dt,
                heat_ratio=heat_ratio(A, dA, phase),
                F=f_value(A, phase, damping),
                dt_F=f_time_derivative(A, At, phase, damping),
                grad_F=f_gradient(A, dA, phase, damping),
                decay_coefficient=self.decay_coefficient,
                normal=self.normal_profile(x, t),
                psi=self._psi(x),
                **extras,
            )

    def _psi(self, x: np.ndarray) -> Optional[PsiJet]:
        return None


class WholeSpaceWeight(CarlemanWeight):
    """Phi = gamma f(t) - (b |x|^2 + K) / (2t) on R^n x (0, 2)"""

    variant = WeightVariant.WHOLE_SPACE

    def validate(self, x: np.ndarray, t: np.ndarray) -> None:
        if np.any(t <= 0.0) or np.any(t > 2.0):
            raise DomainError(f"whole-space weight needs t in (0, 2], got range [{t.min()}, {t.max()}]")

    def phase(self, x: np.ndarray, t: np.ndarray) -> PhaseJet:
        m, n = x.shape
        p = self.params
        f, df, ddf = self.time_profile(t)
        spread = p.b * np.einsum("mi,mi->m", x, x) + p.K
        eye = np.broadcast_to(np.eye(n), (m, n, n))
        return PhaseJet(
            value=p.gamma * f - spread / (2.0 * t),
            grad=-p.b * x / t[:, None],
            hess=-(p.b / t)[:, None, None] * eye,
            third=np.zeros((m, n, n, n)),
            fourth=np.zeros((m, n, n, n, n)),
            dt=p.gamma * df + spread / (2.0 * t**2),
            dtt=p.gamma * ddf - spread / t**3,
            grad_dt=p.b * x / t[:, None] ** 2,
            hess_dt=(p.b / t**2)[:, None, None] * eye,
        )

    def damping(self, x: np.ndarray, t: np.ndarray) -> ScalarJet:
        m, n = x.shape
        d = self.params.d
        return ScalarJet(
            value=d * (1.0 / t + 1.0),
            dt=-d / t**2,
            grad=np.zeros((m, n)),
            hess=np.zeros((m, n, n)),
        )

    def log_weight(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.asarray(t, dtype=float)
        self.validate(x, t)
        p = self.params
        f, _, _ = self.time_profile(t)
        with np.errstate(over="ignore", invalid="ignore"):
            return 2.0 * p.gamma * f - (p.b * np.einsum("mi,mi->m", x, x) + p.K) / t


class HalfSpaceWeight(CarlemanWeight):
    """Phi = gamma f(t) x_n^alpha - (b psi(x) + K) / (2t) on {x_n >= 1} x (0, 1]"""

    variant = WeightVariant.HALF_SPACE

    @property
    def decay_coefficient(self) -> float:
        """16 n^2 kappa E, the coefficient of Phi1_n / |x| in H"""
        return 16.0 * self.n**2 * self.params.kappa * self.field.bounds.E

    def validate(self, x: np.ndarray, t: np.ndarray) -> None:
        if np.any(t <= 0.0) or np.any(t > 1.0):
            raise DomainError(f"half-space weight needs t in (0, 1], got range [{t.min()}, {t.max()}]")
        if np.any(x[:, -1] < 1.0):
            raise DomainError(f"half-space weight needs x_n >= 1, got min {x[:, -1].min()}")

    def normal_profile(self, x: np.ndarray, t: np.ndarray) -> NormalProfile:
        p = self.params
        alpha = float(p.alpha)  # type: ignore[arg-type]
        m, n = x.shape
        xn = x[:, -1]
        f, df, ddf = self.time_profile(t)

        falling = np.cumprod([alpha - k for k in range(4)])
        dn = np.column_stack([p.gamma * f * c * xn ** (alpha - k) for k, c in enumerate(falling, start=1)])

        # h = x_n^beta / |x| so that Phi1_n / |x| = gamma alpha f h
        beta = alpha - 1.0
        r = np.linalg.norm(x, axis=1)
        e = np.zeros(n)
        e[-1] = 1.0
        xb = xn**beta
        h = xb / r
        grad_h = (beta * xn ** (beta - 1.0) / r)[:, None] * e - (xb / r**3)[:, None] * x
        ex = np.einsum("i,mj->mij", e, x)
        hess_h = (
            (beta * (beta - 1.0) * xn ** (beta - 2.0) / r)[:, None, None] * np.outer(e, e)
            - (beta * xn ** (beta - 1.0) / r**3)[:, None, None] * (ex + np.swapaxes(ex, 1, 2))
            - (xb / r**3)[:, None, None] * np.eye(n)
            + (3.0 * xb / r**5)[:, None, None] * np.einsum("mi,mj->mij", x, x)
        )
        scale = p.gamma * alpha * f

        return NormalProfile(
            value=p.gamma * f * xn**alpha,
            dn=dn,
            dt=p.gamma * df * xn**alpha,
            dtt=p.gamma * ddf * xn**alpha,
            dnt=p.gamma * df * alpha * xn ** (alpha - 1.0),
            dnnt=p.gamma * df * alpha * (alpha - 1.0) * xn ** (alpha - 2.0),
            ratio=scale * h,
            ratio_dt=p.gamma * alpha * df * h,
            ratio_grad=scale[:, None] * grad_h,
            ratio_hess=scale[:, None, None] * hess_h,
        )

    def phase(self, x: np.ndarray, t: np.ndarray) -> PhaseJet:
        m, n = x.shape
        p = self.params
        normal = self.normal_profile(x, t)
        psi = psi_eval(x, p.kappa)

        def along_normal(values: np.ndarray, order: int) -> np.ndarray:
            out = np.zeros((m,) + (n,) * order)
            out[(slice(None),) + (n - 1,) * order] = values
            return out

        first = PhaseJet(
            value=normal.value,
            grad=along_normal(normal.dn[:, 0], 1),
            hess=along_normal(normal.dn[:, 1], 2),
            third=along_normal(normal.dn[:, 2], 3),
            fourth=along_normal(normal.dn[:, 3], 4),
            dt=normal.dt,
            dtt=normal.dtt,
            grad_dt=along_normal(normal.dnt, 1),
            hess_dt=along_normal(normal.dnnt, 2),
        )

        spread = p.b * psi.value + p.K
        half_b = 0.5 * p.b
        second = PhaseJet(
            value=-spread / (2.0 * t),
            grad=-(half_b / t)[:, None] * psi.grad,
            hess=-(half_b / t)[:, None, None] * psi.hess,
            third=-(half_b / t)[:, None, None, None] * psi.third,
            fourth=-(half_b / t)[:, None, None, None, None] * psi.fourth,
            dt=spread / (2.0 * t**2),
            dtt=-spread / t**3,
            grad_dt=(half_b / t**2)[:, None] * psi.grad,
            hess_dt=(half_b / t**2)[:, None, None] * psi.hess,
        )
        return first + second

    def damping(self, x: np.ndarray, t: np.ndarray) -> ScalarJet:
        normal = self.normal_profile(x, t)
        c = self.decay_coefficient
        d = self.params.d
        return ScalarJet(
            value=c * normal.ratio + d / t,
            dt=c * normal.ratio_dt - d / t**2,
            grad=c * normal.ratio_grad,
            hess=c * normal.ratio_hess,
        )

    def log_weight(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.asarray(t, dtype=float)
        self.validate(x, t)
        p = self.params
        f, _, _ = self.time_profile(t)
        with np.errstate(over="ignore", invalid="ignore"):
            return 2.0 * p.gamma * f * x[:, -1] ** p.alpha - (p.b * psi_value(x, p.kappa) + p.K) / t

    def _psi(self, x: np.ndarray) -> Optional[PsiJet]:
        return psi_eval(x, self.params.kappa)


def make_weight(
    field: CoefficientField, params: WeightParams, mollifier: Optional[Mollifier] = None
) -> CarlemanWeight:
    """Weight of the variant named by the parameters"""
    if WeightVariant(params.variant) is WeightVariant.WHOLE_SPACE:
        return WholeSpaceWeight(field, params, mollifier)
    return HalfSpaceWeight(field, params, mollifier)


def heat_weight_eval(
    x: np.ndarray,
    t: np.ndarray,
    field: CoefficientField,
    params: WeightParams,
    mollifier: Optional[Mollifier] = None,
) -> WeightEval:
    """Whole-space weight and derived quantities at (x, t)"""
    return WholeSpaceWeight(field, params, mollifier).evaluate(x, t)


def half_space_weight_eval(
    x: np.ndarray,
    t: np.ndarray,
    field: CoefficientField,
    params: WeightParams,
    mollifier: Optional[Mollifier] = None,
) -> WeightEval:
    """Half-space weight and derived quantities at (x, t)"""
    return HalfSpaceWeight(field, params, mollifier).evaluate(x, t)

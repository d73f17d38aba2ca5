"""
Coefficient Field Families
Constant matrices and smooth radial perturbations of the identity
"""

import math
from typing import Optional

import numpy as np

from ..cutoffs.transitions import max_step_slope, smooth_step
from ..models.enums import DomainTag, FieldFamily
from ..models.shared import EllipticityBounds
from .base import CoefficientField, CoefficientJet


class ConstantField(CoefficientField):
    """a(x, t) = A for a fixed symmetric positive definite A"""

    family = FieldFamily.CONSTANT
    is_constant = True

    def __init__(
        self,
        matrix: Optional[np.ndarray] = None,
        n: int = 2,
        domain_tag: DomainTag = DomainTag.WHOLE_SPACE,
    ) -> None:
        A = np.eye(n) if matrix is None else np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got shape {A.shape}")
        if not np.allclose(A, A.T, atol=1e-14):
            raise ValueError("coefficient matrix must be symmetric")
        eigenvalues = np.linalg.eigvalsh(A)
        if eigenvalues[0] <= 0.0:
            raise ValueError(f"coefficient matrix must be positive definite, eigenvalues={eigenvalues}")

        self.matrix = A
        bounds = EllipticityBounds(
            n=A.shape[0], lower=float(eigenvalues[0]), upper=float(eigenvalues[-1]), M=0.0, E=0.0
        )
        super().__init__(bounds, domain_tag)

    def _evaluate(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        m, n = x.shape
        return CoefficientJet(
            matrix=np.broadcast_to(self.matrix, (m, n, n)).copy(),
            gradient=np.zeros((m, n, n, n)),
            time_derivative=np.zeros((m, n, n)),
            hessian=np.zeros((m, n, n, n, n)),
        )


class RadialPerturbationField(CoefficientField):
    """a = I + c m(t) rho(|x|) x x^T / |x|^2 with m(t) = 1 + mu sin(omega t)

    rho switches on smoothly on a logarithmic scale between r0 and 1/2 and is
    built so that (|x| rho')^2 + rho^2 <= 1; the declared decay constant
    E = |c| (1 + |mu|) is then attained far from the origin.
    """

    family = FieldFamily.RADIAL

    OUTER_RADIUS = 0.5

    def __init__(
        self,
        n: int = 2,
        amplitude: float = 0.5,
        modulation: float = 0.0,
        frequency: float = 1.0,
        domain_tag: DomainTag = DomainTag.WHOLE_SPACE,
    ) -> None:
        if not 0.0 <= modulation < 1.0:
            raise ValueError(f"modulation must lie in [0, 1), got {modulation}")
        peak = abs(amplitude) * (1.0 + modulation)
        if amplitude < 0.0 and peak >= 1.0:
            raise ValueError(f"amplitude {amplitude} destroys ellipticity")

        self.amplitude = float(amplitude)
        self.modulation = float(modulation)
        self.frequency = float(frequency)
        self.log_width = 0.5 * math.pi * max_step_slope()
        self.inner_radius = self.OUTER_RADIUS * math.exp(-self.log_width)

        signed_peak = math.copysign(peak, amplitude)
        bounds = EllipticityBounds(
            n=n,
            lower=1.0 + min(0.0, signed_peak),
            upper=1.0 + max(0.0, signed_peak),
            M=peak / self.inner_radius + abs(amplitude * modulation * frequency),
            E=peak,
        )
        super().__init__(bounds, domain_tag)

    def profile(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """rho(r) and rho'(r)"""
        r = np.asarray(r, dtype=float)
        positive = r > 0.0
        r_safe = np.where(positive, r, 1.0)
        u = (np.log(r_safe) - math.log(self.inner_radius)) / self.log_width
        step, slope, _ = smooth_step(u)
        angle = 0.5 * math.pi * step
        rho = np.where(positive, np.sin(angle), 0.0)
        drho = np.where(positive, np.cos(angle) * 0.5 * math.pi * slope / (self.log_width * r_safe), 0.0)
        return rho, drho

    def _evaluate(self, x: np.ndarray, t: np.ndarray) -> CoefficientJet:
        m, n = x.shape
        r = np.linalg.norm(x, axis=1)
        r_safe = np.where(r > 0.0, r, 1.0)
        unit = x / r_safe[:, None]
        rho, drho = self.profile(r)

        modulation = 1.0 + self.modulation * np.sin(self.frequency * t)
        dmodulation = self.modulation * self.frequency * np.cos(self.frequency * t)
        eye = np.eye(n)

        P = np.einsum("mi,mj->mij", unit, unit)
        dP = (
            np.einsum("ki,mj->mkij", eye, unit)
            + np.einsum("kj,mi->mkij", eye, unit)
            - 2.0 * np.einsum("mi,mj,mk->mkij", unit, unit, unit)
        ) / r_safe[:, None, None, None]

        scale = self.amplitude * modulation
        matrix = eye + (scale * rho)[:, None, None] * P
        gradient = scale[:, None, None, None] * (
            np.einsum("m,mk,mij->mkij", drho, unit, P) + rho[:, None, None, None] * dP
        )
        time_derivative = (self.amplitude * dmodulation * rho)[:, None, None] * P
        return CoefficientJet(matrix, gradient, time_derivative)

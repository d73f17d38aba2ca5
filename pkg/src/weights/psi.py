"""
Quadratic Distance Weight
psi(x) = |x|^2 - 2 kappa |x| x_n + 2 kappa^2 x_n^2 and its derivatives up to order four
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..models.errors import DomainError


@dataclass(frozen=True, eq=False)
class PsiJet:
    value: np.ndarray   # (m,)
    grad: np.ndarray    # (m, n)
    hess: np.ndarray    # (m, n, n)
    third: np.ndarray   # (m, n, n, n)
    fourth: np.ndarray  # (m, n, n, n, n)


def radius_derivatives(x: np.ndarray) -> Tuple[np.ndarray, ...]:
    """|x| and its derivative tensors of orders one to four; x must avoid the origin"""
    m, n = x.shape
    r = np.linalg.norm(x, axis=1)
    eye = np.eye(n)
    r3 = r[:, None, None, None] ** 3
    r5 = r[:, None, None, None] ** 5

    d1 = x / r[:, None]
    d2 = eye / r[:, None, None] - np.einsum("mi,mj->mij", x, x) / r[:, None, None] ** 3

    d3 = (
        -(
            np.einsum("ij,mk->mijk", eye, x)
            + np.einsum("ik,mj->mijk", eye, x)
            + np.einsum("jk,mi->mijk", eye, x)
        )
        / r3
        + 3.0 * np.einsum("mi,mj,mk->mijk", x, x, x) / r5
    )

    xx = np.einsum("mi,mj->mij", x, x)
    pairs = (
        np.einsum("ij,mkl->mijkl", eye, xx)
        + np.einsum("ik,mjl->mijkl", eye, xx)
        + np.einsum("il,mjk->mijkl", eye, xx)
        + np.einsum("jk,mil->mijkl", eye, xx)
        + np.einsum("jl,mik->mijkl", eye, xx)
        + np.einsum("kl,mij->mijkl", eye, xx)
    )
    deltas = (
        np.einsum("ij,kl->ijkl", eye, eye)
        + np.einsum("ik,jl->ijkl", eye, eye)
        + np.einsum("il,jk->ijkl", eye, eye)
    )
    rr = r[:, None, None, None, None]
    d4 = (
        -deltas[None] / rr**3
        + 3.0 * pairs / rr**5
        - 15.0 * np.einsum("mi,mj,mk,ml->mijkl", x, x, x, x) / rr**7
    )
    return r, d1, d2, d3, d4


def _validated(x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(x[:, -1] <= 0.0):
        raise DomainError("psi is evaluated on the open half-space x_n > 0")
    return x


def psi_value(x: np.ndarray, kappa: float) -> np.ndarray:
    x = _validated(x)
    r = np.linalg.norm(x, axis=1)
    xn = x[:, -1]
    return r**2 - 2.0 * kappa * r * xn + 2.0 * kappa**2 * xn**2


def psi_eval(x: np.ndarray, kappa: float) -> PsiJet:
    """psi and its derivative tensors at points with x_n > 0"""
    x = _validated(x)
    m, n = x.shape
    r, d1, d2, d3, d4 = radius_derivatives(x)
    xn = x[:, -1]
    e = np.zeros(n)
    e[-1] = 1.0

    # p = |x| x_n by the Leibniz rule; x_n is linear
    p = r * xn
    p1 = xn[:, None] * d1 + r[:, None] * e
    p2 = xn[:, None, None] * d2 + np.einsum("i,mj->mij", e, d1) + np.einsum("j,mi->mij", e, d1)
    p3 = (
        xn[:, None, None, None] * d3
        + np.einsum("i,mjk->mijk", e, d2)
        + np.einsum("j,mik->mijk", e, d2)
        + np.einsum("k,mij->mijk", e, d2)
    )
    p4 = (
        xn[:, None, None, None, None] * d4
        + np.einsum("i,mjkl->mijkl", e, d3)
        + np.einsum("j,mikl->mijkl", e, d3)
        + np.einsum("k,mijl->mijkl", e, d3)
        + np.einsum("l,mijk->mijkl", e, d3)
    )

    ee = np.outer(e, e)
    return PsiJet(
        value=r**2 - 2.0 * kappa * p + 2.0 * kappa**2 * xn**2,
        grad=2.0 * x - 2.0 * kappa * p1 + 4.0 * kappa**2 * xn[:, None] * e,
        hess=2.0 * np.eye(n) - 2.0 * kappa * p2 + 4.0 * kappa**2 * ee,
        third=-2.0 * kappa * p3,
        fourth=-2.0 * kappa * p4,
    )

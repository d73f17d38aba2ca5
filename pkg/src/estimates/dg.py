"""
Weighted Gradient Form
The symmetric matrix D_G that multiplies |grad u|^2 in the weighted energy identity
"""

import numpy as np

from ..weights.carleman_weights import WeightEval


def dg_matrix(evaluation: WeightEval) -> np.ndarray:
    """D_G = A D^2 log G A + (d_l log G / 2)(a^{ki} d_k a^{lj} + a^{kj} d_k a^{li} - a^{kl} d_k a^{ij}) + d_t A / 2

    Returns:
        Symmetric (m, n, n) array
    """
    A, dA, At = evaluation.coefficients.as_tuple()
    half = 0.5 * evaluation.grad_log_g

    curvature = np.einsum("mik,mkl,mlj->mij", A, evaluation.hess_log_g, A)
    transport = (
        np.einsum("ml,mki,mklj->mij", half, A, dA)
        + np.einsum("ml,mkj,mkli->mij", half, A, dA)
        - np.einsum("ml,mkl,mkij->mij", half, A, dA)
    )
    D = curvature + transport + 0.5 * At
    return 0.5 * (D + np.swapaxes(D, 1, 2))


def gradient_form(evaluation: WeightEval) -> np.ndarray:
    """B = 2 D_G + A (Y - F), the full coefficient of the gradient energy"""
    A = evaluation.coefficients.matrix
    return 2.0 * dg_matrix(evaluation) + A * evaluation.heat_excess[:, None, None]

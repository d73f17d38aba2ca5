"""
Structural Bound Verification
Sampled check that a field honours its declared ellipticity, Lipschitz and decay constants
"""

from typing import Optional

import numpy as np

from ..calculus.sampling import SampleCloud
from ..models.shared import EllipticityBounds, MarginReport
from .base import CoefficientField


def entry_gradient_norms(gradient: np.ndarray) -> np.ndarray:
    """Euclidean norm over k of d_k a^{ij}, shape (m, n, n)"""
    return np.sqrt(np.einsum("mkij,mkij->mij", gradient, gradient))


def verify_structure_bounds(
    field: CoefficientField,
    samples: SampleCloud,
    tol: float = 1e-9,
    bounds: Optional[EllipticityBounds] = None,
) -> MarginReport:
    """Check symmetry, ellipticity, Lipschitz and decay bounds on a sample cloud

    Per entry the Lipschitz bound is |grad_x a^{ij}| + |d_t a^{ij}| <= M and
    the decay bound is |grad_x a^{ij}| <= E / |x|, the latter only for |x| >= 1.

    Args:
        field: Field under test
        samples: Space-time samples inside the field's domain
        tol: Allowed negative slack
        bounds: Constants to check against; the field's declared ones by default

    Returns:
        MarginReport whose details hold the worst margin of each bound
    """
    bounds = bounds or field.bounds
    jet = field.evaluate(samples.x, samples.t)

    asymmetry = np.abs(jet.matrix - np.swapaxes(jet.matrix, 1, 2)).max(axis=(1, 2))
    symmetric = 0.5 * (jet.matrix + np.swapaxes(jet.matrix, 1, 2))
    eigenvalues = np.linalg.eigvalsh(symmetric)

    grad_norms = entry_gradient_norms(jet.gradient)
    lipschitz = (grad_norms + np.abs(jet.time_derivative)).max(axis=(1, 2))
    radius = np.linalg.norm(samples.x, axis=1)
    far = radius >= 1.0
    decay = bounds.E / np.where(far, radius, 1.0) - grad_norms.max(axis=(1, 2))

    components = {
        "symmetry": -asymmetry,
        "ellipticity_lower": eigenvalues[:, 0] - bounds.lower,
        "ellipticity_upper": bounds.upper - eigenvalues[:, -1],
        "lipschitz": bounds.M - lipschitz,
        "decay": np.where(far, decay, np.inf),
    }
    margins = np.min(np.stack(list(components.values())), axis=0)
    details = {name: float(values.min()) for name, values in components.items()}

    return MarginReport.from_margins(
        "structure_bounds",
        margins,
        tolerance=tol,
        locations=samples.locations,
        details=details,
    )

"""
Mollification Properties
Sampled checks of the four structural bounds inherited by mollified coefficients
"""

from typing import List, Optional, Sequence

import numpy as np

from ..calculus.sampling import SampleCloud
from ..fields.base import CoefficientField
from ..fields.structure import entry_gradient_norms
from ..models.shared import EllipticityBounds, MarginReport
from .kernel import Mollifier, mollify_field


def hessian_constant(mollifier: Mollifier) -> float:
    """c(n) = 4 ||grad phi||_1 used in the second-derivative bound"""
    return 4.0 * mollifier.grad_l1


def verify_mollify_props(
    field: CoefficientField,
    mollifier: Mollifier,
    samples: SampleCloud,
    tol: float = 1e-9,
    bounds: Optional[EllipticityBounds] = None,
    extend: bool = False,
) -> List[MarginReport]:
    """Check the mollified coefficients clause by clause

    Clauses, all at |x| >= 1:
        ellipticity: lambda <= eig(a_eps) <= Lambda
        gradient: |grad a_eps^{ij}| <= min(M, 2E / |x|)
        deviation: |a_eps - a| <= min(2 Lambda, E / |x|) entrywise
        hessian: |d_kl a_eps^{ij}| <= c(n) min(M, E / |x|)

    Returns:
        One MarginReport per clause
    """
    bounds = bounds or field.bounds
    radius = np.linalg.norm(samples.x, axis=1)
    if np.any(radius < 1.0):
        raise ValueError("mollification bounds are checked at |x| >= 1")

    exact = field.evaluate(samples.x, samples.t)
    smooth = mollify_field(field, mollifier, extend=extend).evaluate(samples.x, samples.t)
    locations = samples.locations

    eigenvalues = np.linalg.eigvalsh(smooth.matrix)
    gradient = entry_gradient_norms(smooth.gradient).max(axis=(1, 2))
    deviation = np.abs(smooth.matrix - exact.matrix).max(axis=(1, 2))
    hessian = np.abs(smooth.hessian).max(axis=(1, 2, 3, 4))
    c_n = hessian_constant(mollifier)

    clauses = {
        "mollify_ellipticity": {
            "lower": eigenvalues[:, 0] - bounds.lower,
            "upper": bounds.upper - eigenvalues[:, -1],
        },
        "mollify_gradient": {
            "lipschitz": bounds.M - gradient,
            "decay": 2.0 * bounds.E / radius - gradient,
        },
        "mollify_deviation": {
            "uniform": 2.0 * bounds.upper - deviation,
            "decay": bounds.E / radius - deviation,
        },
        "mollify_hessian": {
            "lipschitz": c_n * bounds.M - hessian,
            "decay": c_n * bounds.E / radius - hessian,
        },
    }

    reports = []
    for name, parts in clauses.items():
        margins = np.minimum(*parts.values())
        details = {key: float(values.min()) for key, values in parts.items()}
        if name == "mollify_hessian":
            details["c_n"] = c_n
        reports.append(
            MarginReport.from_margins(name, margins, tolerance=tol, locations=locations, details=details)
        )
    return reports


def mollification_error(
    field: CoefficientField,
    epsilons: Sequence[float],
    samples: SampleCloud,
    order: int = 24,
) -> List[float]:
    """max |a_eps - a| over the samples for each epsilon"""
    exact = field.evaluate(samples.x, samples.t).matrix
    errors = []
    for epsilon in epsilons:
        mollifier = Mollifier(field.n, epsilon=epsilon, order=order)
        smooth = mollify_field(field, mollifier).evaluate(samples.x, samples.t).matrix
        errors.append(float(np.abs(smooth - exact).max()))
    return errors

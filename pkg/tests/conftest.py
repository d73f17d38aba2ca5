"""
Shared fixtures for the verification lab tests
Small fields, sample clouds and parameter sets that keep every check fast
"""

import numpy as np
import pytest

from src.calculus.sampling import half_space_samples, shell_samples
from src.fields.families import ConstantField, RadialPerturbationField
from src.models.enums import DomainTag, WeightVariant
from src.mollify.kernel import Mollifier
from src.weights.params import WeightParams


@pytest.fixture
def identity_field():
    """A = I on R^2 x [0, 2]"""
    return ConstantField(n=2)


@pytest.fixture
def half_identity_field():
    """A = I on the closed upper half-space"""
    return ConstantField(n=2, domain_tag=DomainTag.HALF_SPACE)


@pytest.fixture
def radial_field():
    """Radial perturbation with a small time modulation"""
    return RadialPerturbationField(n=2, amplitude=0.3, modulation=0.2, frequency=1.0)


@pytest.fixture
def mollifier():
    """Coarse kernel quadrature for fast convolutions"""
    return Mollifier(2, epsilon=0.5, order=16)


@pytest.fixture
def shell_cloud():
    """Whole-space samples with 1 <= |x| <= 5 and t in [1e-3, 2)"""
    return shell_samples(2, 200, seed=7, r_min=1.0, r_max=5.0, t_min=1e-3, t_max=2.0)


@pytest.fixture
def half_cloud():
    """Half-space samples with 1 <= x_n <= 5 and t in [0.05, 1)"""
    return half_space_samples(2, 120, seed=11, xn_min=1.0, xn_max=5.0, lateral=3.0, t_min=0.05, t_max=1.0)


@pytest.fixture
def mild_whole_space_params():
    """Whole-space weight whose log G stays of order one on t in [0.5, 1.5]"""
    return WeightParams(variant=WeightVariant.WHOLE_SPACE, gamma=0.1, b=0.125, K=2.0, d=0.25, calibrated=True)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

"""
Unit tests for coefficient fields
Tests the constant and radial families, domain handling and structural bound checks
"""

import numpy as np
import pytest

from src.calculus.differencing import fd_jacobian
from src.calculus.sampling import SampleCloud
from src.fields.base import take_rows
from src.fields.families import ConstantField, RadialPerturbationField
from src.fields.structure import entry_gradient_norms, verify_structure_bounds
from src.models.enums import DomainTag
from src.models.errors import DomainError
from src.models.shared import EllipticityBounds


class TestConstantField:
    """Test constant coefficient matrices"""

    def test_bounds_from_eigenvalues(self):
        """Test lambda and Lambda come from the spectrum"""
        field = ConstantField(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert field.bounds.lower == pytest.approx(1.0)
        assert field.bounds.upper == pytest.approx(3.0)
        assert field.bounds.M == 0.0
        assert field.bounds.E == 0.0
        assert field.is_constant

    def test_jet(self, identity_field):
        """Test the jet broadcasts A with zero derivatives"""
        jet = identity_field.evaluate(np.zeros((3, 2)), np.full(3, 0.5))
        np.testing.assert_array_equal(jet.matrix, np.broadcast_to(np.eye(2), (3, 2, 2)))
        assert not np.any(jet.gradient)
        assert not np.any(jet.hessian)
        assert not np.any(jet.divergence)

    def test_invalid_matrices(self):
        """Test non-square, asymmetric and indefinite matrices are rejected"""
        with pytest.raises(ValueError):
            ConstantField(np.ones((2, 3)))
        with pytest.raises(ValueError):
            ConstantField(np.array([[1.0, 0.5], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            ConstantField(np.array([[1.0, 0.0], [0.0, -1.0]]))

    def test_whole_space_time_range(self, identity_field):
        """Test evaluation outside [0, 2] raises DomainError"""
        with pytest.raises(DomainError):
            identity_field.evaluate(np.zeros((1, 2)), np.array([2.5]))

    def test_half_space_domain(self, half_identity_field):
        """Test negative x_n and t > 1 leave the half-space domain"""
        with pytest.raises(DomainError):
            half_identity_field.evaluate(np.array([[0.0, -0.1]]), np.array([0.5]))
        with pytest.raises(DomainError):
            half_identity_field.evaluate(np.array([[0.0, 1.0]]), np.array([1.5]))
        jet = half_identity_field.evaluate(np.array([[0.0, -0.1]]), np.array([0.5]), validate=False)
        assert jet.matrix.shape == (1, 2, 2)

    def test_dimension_mismatch(self, identity_field):
        """Test points of the wrong dimension"""
        with pytest.raises(ValueError):
            identity_field.evaluate(np.zeros((2, 3)), np.ones(2))

    def test_project_and_balls(self, half_identity_field, identity_field):
        """Test normal projection and ball containment"""
        x = np.array([[1.0, -2.0], [0.5, 3.0]])
        np.testing.assert_array_equal(half_identity_field.project(x), [[1.0, 0.0], [0.5, 3.0]])
        assert half_identity_field.contains_ball(x, 1.0).tolist() == [False, True]
        assert identity_field.contains_ball(x, 10.0).all()

    def test_take_rows(self, identity_field):
        """Test jet subsetting by mask"""
        jet = identity_field.evaluate(np.zeros((4, 2)), np.full(4, 1.0))
        subset = take_rows(jet, np.array([True, False, True, False]))
        assert subset.matrix.shape == (2, 2, 2)
        assert subset.hessian.shape == (2, 2, 2, 2, 2)


class TestRadialPerturbationField:
    """Test the radial perturbation family"""

    def setup_method(self):
        self.field = RadialPerturbationField(n=2, amplitude=0.3, modulation=0.2, frequency=1.5)
        rng = np.random.default_rng(5)
        angles = rng.uniform(0.0, 2.0 * np.pi, 12)
        radii = rng.uniform(0.3, 3.0, 12)
        self.x = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        self.t = rng.uniform(0.2, 1.8, 12)

    def test_declared_bounds(self):
        """Test ellipticity and decay constants"""
        bounds = self.field.bounds
        assert bounds.lower == 1.0
        assert bounds.upper == pytest.approx(1.36)
        assert bounds.E == pytest.approx(0.36)
        assert bounds.M > bounds.E

    def test_negative_amplitude(self):
        """Test a negative amplitude lowers lambda"""
        field = RadialPerturbationField(amplitude=-0.5)
        assert field.bounds.lower == pytest.approx(0.5)
        assert field.bounds.upper == 1.0
        with pytest.raises(ValueError):
            RadialPerturbationField(amplitude=-1.0)
        with pytest.raises(ValueError):
            RadialPerturbationField(modulation=1.0)

    def test_spatial_gradient(self):
        """Test grad a against Richardson differences"""
        jet = self.field.evaluate(self.x, self.t)

        def matrix(p: np.ndarray) -> np.ndarray:
            return self.field.evaluate(p, self.t).matrix

        fd = np.moveaxis(fd_jacobian(matrix, self.x), -1, 1)
        np.testing.assert_allclose(jet.gradient, fd, atol=1e-7)

    def test_time_derivative(self):
        """Test d_t a against a central difference"""
        jet = self.field.evaluate(self.x, self.t)
        h = 1e-5
        fd = (
            self.field.evaluate(self.x, self.t + h).matrix - self.field.evaluate(self.x, self.t - h).matrix
        ) / (2.0 * h)
        np.testing.assert_allclose(jet.time_derivative, fd, atol=1e-8)

    def test_symmetric_positive(self):
        """Test symmetric matrices inside the declared ellipticity range"""
        matrix = self.field.evaluate(self.x, self.t).matrix
        np.testing.assert_allclose(matrix, np.swapaxes(matrix, 1, 2))
        eigenvalues = np.linalg.eigvalsh(matrix)
        assert eigenvalues.min() >= 1.0 - 1e-12
        assert eigenvalues.max() <= 1.36 + 1e-12

    def test_profile_switches_on(self):
        """Test rho vanishes near the origin and is one from r = 1/2"""
        rho, _ = self.field.profile(np.array([0.0, self.field.inner_radius * 0.5, 0.5, 4.0]))
        np.testing.assert_allclose(rho, [0.0, 0.0, 1.0, 1.0], atol=1e-12)


class TestStructureBounds:
    """Test sampled structural bound verification"""

    def test_constant_field_passes(self, identity_field, shell_cloud):
        """Test the identity honours its own bounds"""
        report = verify_structure_bounds(identity_field, shell_cloud)
        assert report.passed
        assert report.details["symmetry"] == 0.0

    def test_radial_field_passes(self, radial_field, shell_cloud):
        """Test the radial family honours its declared constants"""
        report = verify_structure_bounds(radial_field, shell_cloud)
        assert report.passed, report.details

    def test_understated_decay_fails(self, radial_field, shell_cloud):
        """Test a quartered decay constant is caught"""
        declared = radial_field.bounds
        understated = EllipticityBounds(
            n=2, lower=declared.lower, upper=declared.upper, M=declared.M, E=declared.E / 4.0
        )
        report = verify_structure_bounds(radial_field, shell_cloud, bounds=understated)
        assert not report.passed
        assert report.details["decay"] < 0.0
        assert report.details["lipschitz"] >= 0.0
        assert len(report.argmin_location) == 3

    def test_decay_margin_unscaled(self):
        """Test the decay margin is E / |x| - |grad a| at |x| >= 1 and ignored inside"""
        bounds = EllipticityBounds(n=2, lower=1.0, upper=1.0, E=0.5)
        cloud = SampleCloud(np.array([[2.0, 0.0], [0.0, 4.0], [0.5, 0.0]]), np.array([0.5, 0.5, 0.5]))
        report = verify_structure_bounds(ConstantField(n=2), cloud, bounds=bounds)
        assert report.details["decay"] == pytest.approx(0.125)
        assert report.passed

    def test_entry_gradient_norms(self):
        """Test Euclidean norms over the derivative index"""
        gradient = np.zeros((1, 2, 2, 2))
        gradient[0, 0, 0, 1] = 3.0
        gradient[0, 1, 0, 1] = 4.0
        norms = entry_gradient_norms(gradient)
        assert norms[0, 0, 1] == 5.0
        assert norms[0, 1, 0] == 0.0

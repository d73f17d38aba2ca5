"""
Unit tests for the numerical calculus helpers
Tests quadrature grids, log-space integration, test functions, differencing and sampling
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.calculus.differencing import (
    central_difference,
    convergence_order,
    fd_jacobian,
    five_point_laplacian,
    relative_error,
    richardson_difference,
)
from src.calculus.quadrature import (
    QuadratureGrid,
    integrate,
    log_weighted_integral,
    scaled_weighted_integrals,
)
from src.calculus.sampling import SampleCloud, half_space_samples, shell_samples, time_floor
from src.calculus.test_functions import GaussianProfile, bump_profile, make_bump
from src.models.enums import QuadratureRule


class TestQuadratureGrid:
    """Test tensor quadrature grids"""

    def test_polynomial_exactness(self):
        """Test Gauss-Legendre integrates low-degree polynomials exactly"""
        grid = QuadratureGrid.build([0.0, -1.0], [2.0, 1.0], 4)
        value = integrate(lambda p: p[:, 0] ** 3 * p[:, 1] ** 2, grid)
        assert value == pytest.approx(4.0 * 2.0 / 3.0, rel=1e-13)

    def test_volume_and_counts(self):
        """Test box volume, node count and weight sum"""
        grid = QuadratureGrid.build([0.0, 0.0, 0.5], [1.0, 2.0, 1.5], [3, 4, 5])
        assert grid.counts == (3, 4, 5)
        assert grid.nodes.shape == (60, 3)
        assert grid.volume == pytest.approx(2.0)
        assert grid.weights.sum() == pytest.approx(2.0, rel=1e-13)

    def test_last_axis_fastest(self):
        """Test node ordering puts time last and fastest"""
        grid = QuadratureGrid.build([0.0, 0.0], [1.0, 1.0], 2, QuadratureRule.MIDPOINT)
        assert grid.nodes.tolist() == [[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]]

    def test_refine(self):
        """Test refinement doubles nodes per axis and bumps the level"""
        grid = QuadratureGrid.build([0.0], [1.0], 4, QuadratureRule.MIDPOINT)
        fine = grid.refine()
        assert fine.counts == (8,)
        assert fine.level == 1
        assert fine.rule == QuadratureRule.MIDPOINT

    def test_midpoint_second_order(self):
        """Test the midpoint rule error falls by four per doubling"""
        errors = []
        grid = QuadratureGrid.build([0.0], [1.0], 8, QuadratureRule.MIDPOINT)
        for _ in range(3):
            errors.append(abs(integrate(lambda p: np.exp(p[:, 0]), grid) - (math.e - 1.0)))
            grid = grid.refine()
        assert convergence_order(errors) == pytest.approx(2.0, abs=0.05)

    def test_degenerate_box(self):
        """Test degenerate or mismatched boxes are rejected"""
        with pytest.raises(ValueError):
            QuadratureGrid.build([0.0, 1.0], [1.0, 1.0], 4)
        with pytest.raises(ValueError):
            QuadratureGrid.build([0.0], [1.0, 2.0], 4)
        with pytest.raises(ValueError):
            QuadratureGrid.build([0.0, 0.0], [1.0, 1.0], [4])


class TestLogSpaceIntegration:
    """Test weighted integrals evaluated in log space"""

    def test_matches_direct_sum(self):
        """Test agreement with the plain weighted sum"""
        log_weight = np.array([0.0, 1.0, -2.0])
        values = np.array([1.0, -0.5, 3.0])
        weights = np.array([0.25, 0.5, 0.25])
        log_abs, sign = log_weighted_integral(log_weight, values, weights)
        direct = float(np.sum(weights * values * np.exp(log_weight)))
        assert sign * math.exp(log_abs) == pytest.approx(direct, rel=1e-13)

    def test_vanishing_integrand(self):
        """Test a zero integrand gives (-inf, 0)"""
        log_abs, sign = log_weighted_integral(np.zeros(3), np.zeros(3), np.ones(3))
        assert log_abs == -math.inf
        assert sign == 0.0

    def test_ratio_survives_overflow(self):
        """Test ratios stay exact when exp(log_weight) overflows"""
        log_weight = np.array([5000.0, 4999.0])
        weights = np.ones(2)
        scaled = scaled_weighted_integrals(
            log_weight, {"a": np.array([1.0, 0.0]), "b": np.array([2.0, 0.0])}, weights
        )
        assert scaled.values["b"] == pytest.approx(1.0)
        assert scaled.values["a"] == pytest.approx(0.5)
        assert scaled.log_scale == pytest.approx(5000.0 + math.log(2.0))

    def test_all_zero(self):
        """Test all-zero integrands scale to zero"""
        scaled = scaled_weighted_integrals(np.zeros(2), {"a": np.zeros(2)}, np.ones(2))
        assert scaled.values == {"a": 0.0}
        assert scaled.log_scale == 0.0


class TestTestFunctions:
    """Test compactly supported bumps"""

    def test_profile_support(self):
        """Test the profile vanishes outside (-1, 1)"""
        value, first, second = bump_profile(np.array([-1.5, -1.0, 1.0, 2.0]))
        assert np.all(value == 0.0)
        assert np.all(first == 0.0)
        assert np.all(second == 0.0)
        assert bump_profile(np.array([0.0]))[0][0] == pytest.approx(math.exp(-1.0))

    def test_profile_derivatives(self):
        """Test closed-form derivatives against central differences"""
        s = np.linspace(-0.7, 0.7, 15)
        h = 1e-5
        value, first, second = bump_profile(s)
        fd_first = (bump_profile(s + h)[0] - bump_profile(s - h)[0]) / (2.0 * h)
        fd_second = (bump_profile(s + h)[1] - bump_profile(s - h)[1]) / (2.0 * h)
        np.testing.assert_allclose(first, fd_first, atol=1e-7)
        np.testing.assert_allclose(second, fd_second, atol=1e-6)

    def test_bump_derivatives(self):
        """Test the space-time jet of a seeded bump against differences"""
        u = make_bump([-1.0, -1.0, 0.5], [1.0, 1.0, 1.5], seed=3)
        points = np.array([[0.1, -0.2, 0.9], [0.3, 0.4, 1.1], [-0.5, 0.0, 1.0]])
        jet = u.evaluate(points[:, :2], points[:, 2])

        def value(p: np.ndarray) -> np.ndarray:
            return u.evaluate(p[:, :2], p[:, 2]).value

        gradient = fd_jacobian(value, points)
        np.testing.assert_allclose(gradient[:, :2], jet.grad, atol=1e-7)
        np.testing.assert_allclose(gradient[:, 2], jet.dt, atol=1e-7)

        def first_space(p: np.ndarray) -> np.ndarray:
            return u.evaluate(p[:, :2], p[:, 2]).grad

        hessian = fd_jacobian(first_space, points, axes=[0, 1])
        np.testing.assert_allclose(hessian, jet.hess, atol=1e-6)

    def test_seeded_bump_reproducible_and_contained(self):
        """Test seeded mixtures are reproducible and stay inside the box"""
        lower, upper = np.array([-1.0, 1.5, 0.3]), np.array([1.0, 3.0, 0.8])
        first = make_bump(lower, upper, seed=5)
        second = make_bump(lower, upper, seed=5)
        assert first.family == "bump_mixture"
        for a, b in zip(first.components, second.components):
            np.testing.assert_array_equal(a.center, b.center)
            assert np.all(a.center - a.halfwidth >= lower - 1e-12)
            assert np.all(a.center + a.halfwidth <= upper + 1e-12)

    def test_vanishes_outside_support(self):
        """Test u = 0 outside its support box"""
        u = make_bump([-1.0, -1.0, 0.5], [1.0, 1.0, 1.5])
        jet = u.evaluate(np.array([[2.0, 0.0], [0.0, 0.0]]), np.array([1.0, 0.4]))
        assert np.all(jet.value == 0.0)

    def test_scaled(self):
        """Test scaling multiplies every derivative"""
        u = make_bump([-1.0, -1.0, 0.5], [1.0, 1.0, 1.5])
        x, t = np.array([[0.2, 0.1]]), np.array([0.8])
        base, scaled = u.evaluate(x, t), u.scaled(3.0).evaluate(x, t)
        assert scaled.value[0] == pytest.approx(3.0 * base.value[0])
        np.testing.assert_allclose(scaled.hess, 3.0 * base.hess)
        assert np.all(u.scaled(0.0).evaluate(x, t).value == 0.0)

    def test_invalid_box(self):
        """Test invalid support boxes"""
        with pytest.raises(ValueError):
            make_bump([0.0], [1.0])
        with pytest.raises(ValueError):
            make_bump([0.0, 1.0], [1.0, 0.5])
        with pytest.raises(ValueError):
            make_bump([0.0, 0.0], [1.0, 1.0], seed=1, n_components=6)

    def test_gaussian_profile(self):
        """Test the planar Gaussian gradient"""
        profile = GaussianProfile(center=np.array([0.5, 1.0]), width=1.5)
        y = np.array([[0.2, 0.7], [1.0, 2.0]])
        _, grad, hess = profile.evaluate(y)
        fd = fd_jacobian(lambda p: profile.evaluate(p)[0], y)
        np.testing.assert_allclose(grad, fd, atol=1e-9)
        np.testing.assert_allclose(hess, np.swapaxes(hess, 1, 2))


class TestDifferencing:
    """Test finite differences"""

    def test_richardson_beats_central(self):
        """Test extrapolation improves the central difference"""
        points = np.array([[0.3], [1.2]])
        exact = np.cos(points[:, 0])
        plain = central_difference(lambda p: np.sin(p[:, 0]), points, 0, 1e-2)
        improved = richardson_difference(lambda p: np.sin(p[:, 0]), points, 0, 1e-2)
        assert np.max(np.abs(improved - exact)) < 1e-3 * np.max(np.abs(plain - exact))

    def test_five_point_laplacian(self):
        """Test the stencil is exact on quadratics"""
        points = np.array([[0.5, -0.25], [1.0, 2.0]])
        laplacian = five_point_laplacian(lambda p: p[:, 0] ** 2 + 3.0 * p[:, 1] ** 2, points, np.array([0.1, 0.2]))
        np.testing.assert_allclose(laplacian, 8.0, rtol=1e-9)

    @given(st.floats(min_value=0.5, max_value=4.0), st.floats(min_value=1e-3, max_value=10.0))
    @settings(max_examples=50)
    def test_convergence_order_of_power_law(self, order, constant):
        """Test the fitted slope of c h^p is p"""
        residuals = [constant * 0.5 ** (order * k) for k in range(4)]
        assert convergence_order(residuals) == pytest.approx(order, rel=1e-9)

    def test_convergence_order_edge_cases(self):
        """Test converged and too-short sequences"""
        assert convergence_order([1e-3, 1e-4, 0.0]) == math.inf
        with pytest.raises(ValueError):
            convergence_order([1.0])

    def test_convergence_order_needs_three_levels(self):
        """Test two residuals or mismatched steps are refused"""
        with pytest.raises(ValueError):
            convergence_order([1e-2, 2.5e-3])
        with pytest.raises(ValueError):
            convergence_order([1e-2, 2.5e-3, 6e-4], [0.1, 0.05])

    def test_relative_error_floor(self):
        """Test small exact values use the absolute floor"""
        np.testing.assert_allclose(relative_error([1.1, 100.0], [1e-9, 50.0]), [1.1, 1.0])


class TestSampling:
    """Test seeded sample clouds"""

    def test_shell_ranges(self):
        """Test radii and times stay in range"""
        cloud = shell_samples(3, 500, seed=1, r_min=1.0, r_max=4.0, t_min=1e-3, t_max=2.0)
        radius = np.linalg.norm(cloud.x, axis=1)
        assert len(cloud) == 500
        assert cloud.dimension == 3
        assert np.all((radius >= 1.0 - 1e-12) & (radius <= 4.0 + 1e-12))
        assert np.all((cloud.t >= 1e-3) & (cloud.t <= 2.0))

    def test_half_space_ranges(self):
        """Test normal and tangential ranges"""
        cloud = half_space_samples(2, 300, seed=2, xn_min=1.0, xn_max=3.0, lateral=2.0, t_min=0.1, t_max=1.0)
        assert np.all((cloud.x[:, -1] >= 1.0) & (cloud.x[:, -1] <= 3.0))
        assert np.all(np.abs(cloud.x[:, 0]) <= 2.0)

    def test_seeded(self):
        """Test equal seeds give equal clouds"""
        a = shell_samples(2, 50, seed=9, r_min=0.0, r_max=1.0, t_min=0.1, t_max=1.0)
        b = shell_samples(2, 50, seed=9, r_min=0.0, r_max=1.0, t_min=0.1, t_max=1.0)
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.t, b.t)

    def test_head_is_nested(self):
        """Test head returns a prefix of the cloud"""
        cloud = shell_samples(2, 40, seed=3, r_min=1.0, r_max=2.0, t_min=0.1, t_max=1.0)
        head = cloud.head(10)
        np.testing.assert_array_equal(head.x, cloud.x[:10])
        assert cloud.locations.shape == (40, 3)

    def test_invalid_clouds(self):
        """Test shape and range validation"""
        with pytest.raises(ValueError):
            SampleCloud(np.zeros((3, 2)), np.zeros(2))
        with pytest.raises(ValueError):
            shell_samples(2, 10, seed=0, r_min=1.0, r_max=2.0, t_min=1.0, t_max=0.5)
        with pytest.raises(ValueError):
            half_space_samples(2, 10, seed=0, xn_min=3.0, xn_max=1.0, lateral=1.0, t_min=0.1, t_max=1.0)

    @given(st.floats(min_value=1.0, max_value=500.0), st.integers(min_value=1, max_value=3))
    def test_time_floor_bounds_powers(self, K, power):
        """Test t^-(power (K + 2)) stays at the ceiling at the floor"""
        floor = time_floor(K, power)
        assert 0.0 < floor < 1.0
        assert -power * (K + 2.0) * math.log(floor) == pytest.approx(math.log(1e250), rel=1e-12)

    def test_time_floor_table(self):
        """Test the documented floors"""
        assert time_floor(24.0) == pytest.approx(2.4e-10, rel=0.05)
        assert time_floor(104.0) == pytest.approx(4.4e-3, rel=0.05)
        assert time_floor(416.0) == pytest.approx(0.25, rel=0.05)

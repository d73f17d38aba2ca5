"""
Unit tests for the weighted integral identities
Tests residuals, scale invariance, the time-profile generalisation and grid convergence
"""

import math

import pytest

from src.calculus.quadrature import QuadratureGrid
from src.calculus.test_functions import make_bump
from src.identity.integral_identity import (
    SUPPORT_TIME_FLOOR,
    exponential_profile,
    general_identity_residual,
    residual_convergence,
    weighted_identity_residual,
)

BOX_LOWER = [-1.0, -1.0, 0.5]
BOX_UPPER = [1.0, 1.0, 1.5]


class TestWeightedIdentity:
    """Test the weighted energy identity"""

    def setup_method(self):
        self.u = make_bump(BOX_LOWER, BOX_UPPER)
        self.grid = QuadratureGrid.build(BOX_LOWER, BOX_UPPER, 24)

    def test_zero_function(self, identity_field, mild_whole_space_params):
        """Test u = 0 gives matching zero sides"""
        result = weighted_identity_residual(self.u.scaled(0.0), identity_field, mild_whole_space_params, self.grid)
        assert result.lhs == 0.0
        assert result.rhs == 0.0
        assert result.residual == 0.0

    def test_small_residual(self, identity_field, mild_whole_space_params):
        """Test both sides agree for a single bump"""
        result = weighted_identity_residual(self.u, identity_field, mild_whole_space_params, self.grid)
        assert result.residual < 1e-2
        assert result.node_count == 24**3
        assert max(abs(result.lhs), abs(result.rhs)) == pytest.approx(1.0)

    def test_scale_invariance(self, identity_field, mild_whole_space_params):
        """Test rescaling u moves only the common scale"""
        base = weighted_identity_residual(self.u, identity_field, mild_whole_space_params, self.grid)
        scaled = weighted_identity_residual(self.u.scaled(1e3), identity_field, mild_whole_space_params, self.grid)
        assert scaled.residual == pytest.approx(base.residual, rel=1e-8, abs=1e-12)
        assert scaled.log_scale - base.log_scale == pytest.approx(math.log(1e6), rel=1e-9)

    def test_bump_mixture(self, identity_field, mild_whole_space_params):
        """Test a seeded mixture of bumps converges under node refinement"""
        u = make_bump(BOX_LOWER, BOX_UPPER, seed=3)
        residuals = [
            weighted_identity_residual(
                u, identity_field, mild_whole_space_params, QuadratureGrid.build(BOX_LOWER, BOX_UPPER, nodes)
            ).residual
            for nodes in (24, 48, 80)
        ]
        assert residuals[0] > residuals[1] > residuals[2]
        assert residuals[2] < 5e-3

    def test_support_floor(self, identity_field, mild_whole_space_params):
        """Test supports reaching below the time floor are refused"""
        lower = [-1.0, -1.0, SUPPORT_TIME_FLOOR / 2.0]
        u = make_bump(lower, BOX_UPPER)
        with pytest.raises(ValueError):
            weighted_identity_residual(u, identity_field, mild_whole_space_params, QuadratureGrid.build(lower, BOX_UPPER, 8))

    def test_grid_must_cover_support(self, identity_field, mild_whole_space_params):
        """Test a grid smaller than the support is refused"""
        grid = QuadratureGrid.build([-0.5, -0.5, 0.5], BOX_UPPER, 8)
        with pytest.raises(ValueError):
            weighted_identity_residual(self.u, identity_field, mild_whole_space_params, grid)


class TestGeneralIdentity:
    """Test the identity with a time profile and exponent"""

    def setup_method(self):
        self.u = make_bump(BOX_LOWER, BOX_UPPER)
        self.grid = QuadratureGrid.build(BOX_LOWER, BOX_UPPER, 24)

    def test_exponential_specialisation(self, identity_field, mild_whole_space_params, mollifier):
        """Test sigma = e^t with exponent zero reproduces the weighted identity"""
        general = general_identity_residual(
            self.u, identity_field, mild_whole_space_params, exponential_profile(1.0), 0.0, self.grid, mollifier
        )
        weighted = weighted_identity_residual(self.u, identity_field, mild_whole_space_params, self.grid, mollifier)
        assert abs(general.residual - weighted.residual) <= 1e-6
        assert general.lhs == pytest.approx(weighted.lhs, rel=1e-12)
        assert general.rhs == pytest.approx(weighted.rhs, rel=1e-12)
        assert general.log_scale == pytest.approx(weighted.log_scale, rel=1e-12)

    def test_specialisation_on_radial_field(self, radial_field, mild_whole_space_params, mollifier):
        """Test the reduction also holds with a non-trivial mollified correction"""
        u = make_bump([-1.0, 0.5, 0.5], [1.0, 2.0, 1.5])
        grid = QuadratureGrid.build([-1.0, 0.5, 0.5], [1.0, 2.0, 1.5], 6)
        general = general_identity_residual(
            u, radial_field, mild_whole_space_params, exponential_profile(1.0), 0.0, grid, mollifier
        )
        weighted = weighted_identity_residual(u, radial_field, mild_whole_space_params, grid, mollifier)
        assert abs(general.residual - weighted.residual) <= 1e-6

    @pytest.mark.parametrize("alpha_exp", [0.5, 1.0])
    def test_exponents(self, identity_field, mild_whole_space_params, alpha_exp):
        """Test the identity holds for other exponents"""
        result = general_identity_residual(
            self.u, identity_field, mild_whole_space_params, exponential_profile(2.0), alpha_exp, self.grid
        )
        assert result.residual < 1e-2

    def test_decreasing_profile(self):
        """Test sigma must increase"""
        with pytest.raises(ValueError):
            exponential_profile(0.0)
        with pytest.raises(ValueError):
            exponential_profile(-1.0)


class TestConvergence:
    """Test residual behaviour under grid refinement"""

    def test_residual_decreases(self, identity_field, mild_whole_space_params):
        """Test three doublings shrink the residual"""
        u = make_bump(BOX_LOWER, BOX_UPPER)
        grid = QuadratureGrid.build(BOX_LOWER, BOX_UPPER, 8)
        study = residual_convergence(u, identity_field, mild_whole_space_params, grid, levels=3)
        assert [r.level for r in study.results] == [0, 1, 2]
        assert [r.node_count for r in study.results] == [8**3, 16**3, 32**3]
        assert study.results[-1].residual < study.results[0].residual
        assert study.order > 0.0

    def test_levels(self, identity_field, mild_whole_space_params):
        """Test fewer than three levels cannot measure an order"""
        u = make_bump(BOX_LOWER, BOX_UPPER)
        grid = QuadratureGrid.build(BOX_LOWER, BOX_UPPER, 8)
        with pytest.raises(ValueError):
            residual_convergence(u, identity_field, mild_whole_space_params, grid, levels=2)

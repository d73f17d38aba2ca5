"""
Unit tests for the Carleman inequality checks
Tests the gamma sweep, its preconditions and the folding of outcomes into margin reports
"""

import numpy as np
import pytest

from src.calculus.quadrature import QuadratureGrid
from src.calculus.test_functions import make_bump
from src.carleman.inequalities import (
    InequalityOutcome,
    check_half_space_inequality,
    check_whole_space_inequality,
    compare_sides,
    outcomes_report,
    refinement_ratios,
)
from src.fields.families import RadialPerturbationField
from src.models.enums import DomainTag, WeightVariant
from src.models.errors import CalibrationError, HypothesisViolationError, NumericalError
from src.weights.constants import default_constants

WHOLE_LOWER = [-1.0, -1.0, 0.5]
WHOLE_UPPER = [1.0, 1.0, 1.5]
HALF_LOWER = [-1.0, 1.5, 0.3]
HALF_UPPER = [1.0, 3.0, 0.9]


def _outcome(gamma: float, lhs: float, rhs: float) -> InequalityOutcome:
    return InequalityOutcome(gamma=gamma, lhs=lhs, rhs=rhs, ratio=lhs / rhs, passed=lhs <= rhs * 1.01)


class TestWholeSpaceInequality:
    """Test the whole-space gamma sweep"""

    def setup_method(self):
        self.u = make_bump(WHOLE_LOWER, WHOLE_UPPER)
        self.grid = QuadratureGrid.build(WHOLE_LOWER, WHOLE_UPPER, 12)

    def test_zero_function_passes(self, identity_field, mild_whole_space_params):
        """Test u = 0 passes with zero sides at every gamma"""
        outcomes = check_whole_space_inequality(self.u.scaled(0.0), identity_field, mild_whole_space_params, self.grid)
        assert [o.gamma for o in outcomes] == [0.1, 1.0, 10.0]
        for outcome in outcomes:
            assert outcome.passed
            assert outcome.lhs == 0.0
            assert outcome.ratio == 0.0

    def test_uncalibrated(self, identity_field, mild_whole_space_params):
        """Test uncalibrated parameters are refused"""
        params = mild_whole_space_params.model_copy(update={"calibrated": False})
        with pytest.raises(CalibrationError):
            check_whole_space_inequality(self.u, identity_field, params, self.grid)

    def test_support_time_range(self, identity_field, mild_whole_space_params):
        """Test supports reaching t < 0.05 are refused"""
        lower = [-1.0, -1.0, 0.01]
        u = make_bump(lower, WHOLE_UPPER)
        with pytest.raises(ValueError):
            check_whole_space_inequality(u, identity_field, mild_whole_space_params, QuadratureGrid.build(lower, WHOLE_UPPER, 6))

    def test_scaling_invariance(self, identity_field, mild_whole_space_params):
        """Test the ratio does not depend on the amplitude of u"""
        base = check_whole_space_inequality(self.u, identity_field, mild_whole_space_params, self.grid)
        scaled = check_whole_space_inequality(self.u.scaled(1e4), identity_field, mild_whole_space_params, self.grid)
        for a, b in zip(base, scaled):
            assert b.ratio == pytest.approx(a.ratio, rel=1e-10)
            assert b.passed == a.passed

    def test_serial_and_threaded_agree(self, identity_field, mild_whole_space_params):
        """Test the threaded sweep gives identical outcomes"""
        serial = check_whole_space_inequality(self.u, identity_field, mild_whole_space_params, self.grid, serial=True)
        threaded = check_whole_space_inequality(
            self.u, identity_field, mild_whole_space_params, self.grid, serial=False, max_workers=3
        )
        assert [o.model_dump() for o in serial] == [o.model_dump() for o in threaded]

    def test_refinement_ratios(self, identity_field, mild_whole_space_params):
        """Test ratios on successive grids are finite and settle"""
        grid = QuadratureGrid.build(WHOLE_LOWER, WHOLE_UPPER, 16)
        ratios = refinement_ratios(self.u, identity_field, mild_whole_space_params, grid, levels=2)
        assert len(ratios) == 2
        assert all(np.isfinite(ratios))
        assert ratios[1] == pytest.approx(ratios[0], rel=0.1)

    def test_numerical_error(self, identity_field, mild_whole_space_params, mocker):
        """Test a NaN integrand raises NumericalError"""
        mocker.patch(
            "src.carleman.inequalities.divergence_form_operator",
            side_effect=lambda jet, grad, hess: np.where(np.arange(grad.shape[0]) == 0, np.nan, 0.0),
        )
        with pytest.raises(NumericalError):
            compare_sides(self.u, identity_field, mild_whole_space_params, self.grid)


class TestHalfSpaceInequality:
    """Test the half-space gamma sweep"""

    def setup_method(self):
        self.u = make_bump(HALF_LOWER, HALF_UPPER)
        self.grid = QuadratureGrid.build(HALF_LOWER, HALF_UPPER, 10)

    def _params(self, field):
        return default_constants(field.bounds, WeightVariant.HALF_SPACE, d=1.0).params.with_d(1.0, calibrated=True)

    def test_zero_function_passes(self, half_identity_field):
        """Test u = 0 passes in the half-space"""
        params = self._params(half_identity_field)
        outcomes = check_half_space_inequality(self.u.scaled(0.0), half_identity_field, params, self.grid, gammas=[1.0])
        assert len(outcomes) == 1
        assert outcomes[0].passed

    def test_bump_is_finite(self, half_identity_field):
        """Test a bump yields positive finite sides"""
        params = self._params(half_identity_field)
        outcomes = check_half_space_inequality(self.u, half_identity_field, params, self.grid, gammas=[0.1, 1.0])
        for outcome in outcomes:
            assert outcome.lhs > 0.0
            assert outcome.rhs > 0.0
            assert np.isfinite(outcome.ratio)
            assert outcome.node_count == 1000

    def test_normal_range(self, half_identity_field):
        """Test supports with x_n < 1 are refused"""
        lower = [-1.0, 0.5, 0.3]
        u = make_bump(lower, HALF_UPPER)
        with pytest.raises(ValueError):
            check_half_space_inequality(
                u, half_identity_field, self._params(half_identity_field), QuadratureGrid.build(lower, HALF_UPPER, 6)
            )

    def test_time_range(self, half_identity_field):
        """Test supports beyond t = 1 are refused"""
        upper = [1.0, 3.0, 1.2]
        u = make_bump(HALF_LOWER, upper)
        with pytest.raises(ValueError):
            check_half_space_inequality(
                u, half_identity_field, self._params(half_identity_field), QuadratureGrid.build(HALF_LOWER, upper, 6)
            )

    def test_hypothesis_violation(self, half_identity_field):
        """Test E >= E0 is refused before any quadrature"""
        field = RadialPerturbationField(n=2, amplitude=0.3, domain_tag=DomainTag.HALF_SPACE)
        params = self._params(half_identity_field)
        with pytest.raises(HypothesisViolationError):
            check_half_space_inequality(self.u, field, params, self.grid)

    def test_uncalibrated(self, half_identity_field):
        """Test calibration is checked first"""
        params = self._params(half_identity_field).model_copy(update={"calibrated": False})
        with pytest.raises(CalibrationError):
            check_half_space_inequality(self.u, half_identity_field, params, self.grid)


class TestOutcomesReport:
    """Test folding a sweep into a margin report"""

    def test_passing_sweep(self):
        """Test margins, ratios and near misses"""
        outcomes = [_outcome(0.1, 0.5, 1.0), _outcome(1.0, 1.005, 1.0)]
        report = outcomes_report("carleman_whole_space", outcomes)
        assert report.passed
        assert report.details["ratio_gamma_0.1"] == pytest.approx(0.5)
        assert report.details["near_misses"] == 1.0
        assert report.empirical_constant == pytest.approx(1.005)
        assert report.argmin_location == [1.0]

    def test_failing_sweep(self):
        """Test a ratio beyond tolerance fails"""
        report = outcomes_report("carleman_whole_space", [_outcome(10.0, 2.0, 1.0)])
        assert not report.passed
        assert report.min_margin == pytest.approx(1.01 - 2.0)

    def test_margin_ignores_common_scale(self):
        """Test the margin depends on lhs / rhs only"""
        small = outcomes_report("carleman_whole_space", [_outcome(1.0, 0.5e-3, 1e-3)])
        unit = outcomes_report("carleman_whole_space", [_outcome(1.0, 0.5, 1.0)])
        assert small.min_margin == pytest.approx(0.51)
        assert unit.min_margin == pytest.approx(small.min_margin)

    def test_empty(self):
        """Test an empty sweep is rejected"""
        with pytest.raises(ValueError):
            outcomes_report("carleman_whole_space", [])

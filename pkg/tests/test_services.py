"""
Unit tests for the service layer
Tests field construction from settings and suite dispatch in VerificationService
"""

import numpy as np
import pytest

from src.cone.construction import ConeField
from src.config.models import FieldSettings, LabConfig
from src.fields.families import ConstantField, RadialPerturbationField
from src.models.enums import DomainTag, FieldFamily, Suite, WeightVariant
from src.models.errors import ConfigurationError
from src.models.shared import EllipticityBounds, MarginReport, SuiteResult
from src.services.field_factory import build_field
from src.services.suite_runner import VerificationService


def _small_config(**sections) -> LabConfig:
    data = {
        "cone": {"samples": 32, "l_values": [2.0]},
        "cutoffs": {"samples": 400},
    }
    data.update(sections)
    return LabConfig.model_validate(data)


class TestBuildField:
    """Test field construction from FieldSettings"""

    def test_constant_matrix(self):
        """Test a configured matrix and its bounds"""
        field = build_field(FieldSettings(matrix=[[2.0, 0.0], [0.0, 1.0]]), DomainTag.HALF_SPACE)
        assert isinstance(field, ConstantField)
        assert field.domain_tag is DomainTag.HALF_SPACE
        assert field.bounds.kappa == pytest.approx(2.0)

    def test_radial(self):
        """Test the radial family takes its amplitude"""
        field = build_field(FieldSettings(family=FieldFamily.RADIAL, amplitude=0.3))
        assert isinstance(field, RadialPerturbationField)
        assert field.domain_tag is DomainTag.WHOLE_SPACE

    def test_cone_ignores_domain(self):
        """Test cone fields live on the shifted half-plane"""
        field = build_field(FieldSettings(family=FieldFamily.CONE, cone_l=2.0), DomainTag.WHOLE_SPACE)
        assert isinstance(field, ConeField)
        assert field.domain_tag is DomainTag.SHIFTED_HALF_SPACE

    def test_declared_bounds(self):
        """Test declared bounds replace the computed ones"""
        declared = EllipticityBounds(n=2, lower=0.5, upper=2.0, E=0.1)
        field = build_field(FieldSettings(bounds=declared))
        assert field.bounds == declared


class TestVerificationService:
    """Test suite dispatch and the cheap suites"""

    def test_report_all_needs_run_all(self):
        """Test report-all is not a single suite"""
        with pytest.raises(ValueError):
            VerificationService(_small_config()).run(Suite.REPORT_ALL)

    def test_run_all_covers_both_variants(self, mocker):
        """Test run_all calls every runner and the Carleman suite twice"""
        runners = {}
        for name in (
            "run_psi",
            "run_mollify",
            "run_heat_estimates",
            "run_half_space_estimates",
            "run_identity",
            "run_carleman",
            "run_cone",
            "run_cutoffs",
            "run_calibration",
        ):
            result = SuiteResult(suite=name, checks=[MarginReport.from_margins(name, [1.0], tolerance=0.0)])
            runners[name] = mocker.patch.object(VerificationService, name, return_value=result)

        results = VerificationService(_small_config()).run_all()
        assert len(results) == 10
        assert runners["run_carleman"].call_args_list == [
            mocker.call(WeightVariant.WHOLE_SPACE),
            mocker.call(WeightVariant.HALF_SPACE),
        ]
        runners["run_psi"].assert_called_once_with()

    def test_psi_kappas_below_field_ratio(self):
        """Test a psi suite with no usable kappa is a configuration error"""
        config = _small_config(field={"matrix": [[4.0, 0.0], [0.0, 1.0]]}, psi={"kappas": [1.0, 2.0], "samples": 32})
        with pytest.raises(ConfigurationError):
            VerificationService(config).run(Suite.PSI)

    def test_cutoffs(self):
        """Test the cutoff suite on a small cloud"""
        result = VerificationService(_small_config()).run(Suite.CUTOFFS)
        assert result.suite == "check-cutoffs"
        assert [c.check_name for c in result.checks][-1] == "cutoff_level_formula"
        assert result.checks[-1].passed
        assert result.params["tau"] == 1.0

    def test_cone(self):
        """Test the cone suite reports every check for each opening"""
        result = VerificationService(_small_config()).run(Suite.CONE)
        names = [c.check_name for c in result.checks]
        assert names == [
            "cone_eigenvalues_l_2",
            "cone_gradient_bound_l_2",
            "operator_equivalence_l_2",
            "operator_equivalence_order_l_2",
            "lower_threshold",
            "critical_angle",
        ]
        assert result.checks[0].passed
        assert result.checks[-1].passed
        assert result.checks[-2].details["value"] == pytest.approx(1.7037, abs=1e-3)
        assert result.checks[-1].details["value"] == pytest.approx(109.47, abs=1e-2)
        assert set(result.params["classification"]) == {"0.5", "1", "2", "3.5"}
        assert all(np.isfinite(c.min_margin) for c in result.checks[:2])

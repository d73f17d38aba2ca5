"""
Verification Service
Runs the configured check suites and collects their reports
"""

import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog

from ..calculus.differencing import convergence_order
from ..calculus.quadrature import QuadratureGrid
from ..calculus.sampling import (
    SampleCloud,
    half_space_samples,
    shell_samples,
    time_floor,
)
from ..calculus.test_functions import GaussianProfile, make_bump
from ..carleman.inequalities import (
    check_half_space_inequality,
    check_whole_space_inequality,
    outcomes_report,
)
from ..cone.checks import (
    BU_LOWER_THRESHOLD,
    critical_angle_degrees,
    gradient_bound_check,
    operator_equivalence_residual,
    threshold_classify,
)
from ..cone.construction import ConeParams, cone_matrix
from ..config.models import LabConfig
from ..cutoffs.cutoff import (
    CutoffSpec,
    cutoff_samples,
    verify_cutoff_derivative_bound,
    verify_omega_identity,
)
from ..estimates.calibration import calibrate_d
from ..estimates.half_space import (
    CUBIC_POWER,
    check_half_space_estimates,
    compute_j_terms,
    direct_m2,
)
from ..estimates.heat import check_heat_estimates
from ..estimates.psi_checks import check_psi_props
from ..fields.base import CoefficientField
from ..fields.structure import verify_structure_bounds
from ..identity.integral_identity import (
    exponential_profile,
    general_identity_residual,
    residual_convergence,
    weighted_identity_residual,
)
from ..models.enums import DomainTag, QuadratureRule, Suite, WeightVariant
from ..models.errors import ConfigurationError
from ..models.shared import MarginReport, SuiteResult
from ..mollify.kernel import Mollifier
from ..mollify.properties import verify_mollify_props
from ..weights.carleman_weights import HalfSpaceWeight
from ..weights.constants import default_constants
from ..weights.params import WeightParams
from .field_factory import build_field

# Acceptance levels of the quadrature-based suites
IDENTITY_RESIDUAL_LIMIT = 1e-3
SPECIALIZATION_LIMIT = 1e-6
J_SUM_LIMIT = 1e-6
MIN_CONVERGENCE_ORDER = 1.8
CONE_EIGENVALUE_LIMIT = 1e-10

# Reference values the cone suite reproduces
LOWER_THRESHOLD_REFERENCE = 1.7037
CRITICAL_ANGLE_REFERENCE = 109.47


def _domain_for(variant: WeightVariant) -> DomainTag:
    if WeightVariant(variant) is WeightVariant.WHOLE_SPACE:
        return DomainTag.WHOLE_SPACE
    return DomainTag.HALF_SPACE


def _bound_report(
    check_name: str, value: float, limit: float, /, **details: float
) -> MarginReport:
    """Report for a single scalar that must stay at or below limit"""
    return MarginReport.from_margins(
        check_name,
        [limit - value],
        tolerance=0.0,
        empirical_constant=value,
        details=details,
    )


class VerificationService:
    """
    Runs check suites against one lab configuration

    Responsibilities:
    - Building fields, sample clouds, test functions and grids from the config
    - Calibrating d where a suite needs a calibrated weight
    - Returning one SuiteResult per suite
    """

    def __init__(self, config: LabConfig):
        self.config = config
        self.logger = structlog.get_logger(__name__)
        self.runtime = config.runtime
        self._suites: Dict[Suite, Callable[..., SuiteResult]] = {
            Suite.PSI: self.run_psi,
            Suite.MOLLIFY: self.run_mollify,
            Suite.HEAT_ESTIMATES: self.run_heat_estimates,
            Suite.HALF_SPACE_ESTIMATES: self.run_half_space_estimates,
            Suite.IDENTITY: self.run_identity,
            Suite.CARLEMAN: self.run_carleman,
            Suite.CONE: self.run_cone,
            Suite.CUTOFFS: self.run_cutoffs,
            Suite.CALIBRATE: self.run_calibration,
        }

    # Shared builders

    @property
    def seed(self) -> int:
        return self.runtime.seed

    def _mollifier(self, n: int) -> Mollifier:
        settings = self.config.mollify
        return Mollifier(
            n,
            epsilon=settings.epsilon,
            order=settings.order,
            serial=self.runtime.serial,
            max_workers=self.runtime.max_workers,
        )

    def _cloud(
        self,
        field: CoefficientField,
        count: int,
        r_min: float,
        r_max: float,
        t_min: float,
        t_max: float,
    ) -> SampleCloud:
        """Shell samples on the whole space, normal-band samples on half-spaces"""
        if field.domain_tag is DomainTag.WHOLE_SPACE:
            return shell_samples(field.n, count, self.seed, r_min, r_max, t_min, t_max)
        return half_space_samples(
            field.n,
            count,
            self.seed,
            max(r_min, 1.0),
            r_max,
            r_max,
            t_min,
            min(t_max, 1.0),
        )

    def _grid(
        self,
        lower: Sequence[float],
        upper: Sequence[float],
        nodes: int,
        rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE,
    ) -> QuadratureGrid:
        level = self.runtime.grid_level
        return QuadratureGrid.build(lower, upper, nodes * 2**level, rule, level)

    def _calibrated_params(
        self,
        field: CoefficientField,
        variant: WeightVariant,
        d: Optional[float],
        gamma: float = 1.0,
    ) -> WeightParams:
        """Damping parameter from the config, or calibrated on a fresh sample cloud"""
        base = default_constants(field.bounds, variant, d=1.0, gamma=gamma).params
        if d is not None:
            return base.with_d(d, calibrated=True)
        settings = self.config.calibration
        if WeightVariant(variant) is WeightVariant.WHOLE_SPACE:
            samples = self._cloud(field, settings.samples, 0.0, 10.0, 1e-3, 2.0)
        else:
            samples = self._calibration_cloud(field, settings.samples)
        result = calibrate_d(
            field,
            base,
            samples,
            settings.d_grid,
            tol=self.runtime.tolerance,
            generic_constant=self.config.half_space_estimates.generic_constant,
            mollifier=self._mollifier(field.n),
        )
        return result.params

    def _calibration_cloud(self, field: CoefficientField, count: int) -> SampleCloud:
        return half_space_samples(field.n, count, self.seed, 1.0, 10.0, 5.0, 1e-3, 1.0)

    # Suites

    def run(self, suite: Suite, variant: Optional[WeightVariant] = None) -> SuiteResult:
        """Run one suite by name"""
        suite = Suite(suite)
        if suite is Suite.REPORT_ALL:
            raise ValueError("report-all runs several suites; use run_all")
        self.logger.info("suite_started", suite=suite.value)
        runner = self._suites[suite]
        result = runner(variant) if suite is Suite.CARLEMAN else runner()
        status = "[OK]" if result.passed else "[FAIL]"
        self.logger.info(
            f"{status} suite finished",
            suite=result.suite,
            checks=len(result.checks),
            min_margin=result.min_margin,
        )
        return result

    def run_all(self) -> List[SuiteResult]:
        """Every suite once, the Carleman suite for both variants"""
        results = []
        for suite in self._suites:
            if suite is Suite.CARLEMAN:
                results.extend(self.run(suite, variant) for variant in WeightVariant)
            else:
                results.append(self.run(suite))
        return results

    def run_psi(self) -> SuiteResult:
        settings = self.config.psi
        field = build_field(self.config.field, DomainTag.HALF_SPACE)
        samples = half_space_samples(
            field.n,
            settings.samples,
            self.seed,
            1e-3,
            settings.xn_max,
            settings.lateral,
            0.01,
            1.0,
            log_time=False,
        )
        kappas = [k for k in settings.kappas if k >= field.bounds.kappa - 1e-12]
        if not kappas:
            raise ConfigurationError(
                f"every psi kappa is below the field's ratio {field.bounds.kappa:.6g}"
            )
        skipped = [k for k in settings.kappas if k not in kappas]
        if skipped:
            self.logger.warning(
                "psi_kappas_skipped", kappas=skipped, field_kappa=field.bounds.kappa
            )

        tol = self.runtime.tolerance
        per_kappa = {k: check_psi_props(k, samples, field, tol=tol) for k in kappas}
        checks = []
        for index in range(len(per_kappa[kappas[0]])):
            group = {k: reports[index] for k, reports in per_kappa.items()}
            worst = min(group.values(), key=lambda r: r.min_margin)
            details = dict(worst.details)
            details.update({f"kappa_{k:g}": r.min_margin for k, r in group.items()})
            checks.append(worst.model_copy(update={"details": details}))
        return SuiteResult(
            suite=Suite.PSI.value,
            seed=self.seed,
            params={"kappas": kappas},
            checks=checks,
        )

    def run_mollify(self) -> SuiteResult:
        settings = self.config.mollify
        field = build_field(self.config.field, DomainTag.WHOLE_SPACE)
        samples = self._cloud(
            field, settings.samples, settings.r_min, settings.r_max, 0.01, 2.0
        )
        tol = self.runtime.tolerance
        checks = [verify_structure_bounds(field, samples, tol=tol)]
        checks += verify_mollify_props(
            field, self._mollifier(field.n), samples, tol=tol, extend=settings.extend
        )
        return SuiteResult(
            suite=Suite.MOLLIFY.value,
            seed=self.seed,
            params={
                "epsilon": settings.epsilon,
                "order": settings.order,
                "bounds": field.bounds.model_dump(),
            },
            checks=checks,
        )

    def run_heat_estimates(self) -> SuiteResult:
        settings = self.config.heat_estimates
        field = build_field(self.config.field, DomainTag.WHOLE_SPACE)
        params = default_constants(
            field.bounds, WeightVariant.WHOLE_SPACE, d=settings.d, gamma=settings.gamma
        ).params
        samples = self._cloud(
            field, settings.samples, 0.0, settings.r_max, settings.t_min, settings.t_max
        )
        checks = check_heat_estimates(
            field,
            params,
            samples,
            tol=self.runtime.tolerance,
            mollifier=self._mollifier(field.n),
            refinement=settings.refinement,
        )
        return SuiteResult(
            suite=Suite.HEAT_ESTIMATES.value,
            seed=self.seed,
            params=params.model_dump(mode="json"),
            checks=checks,
        )

    def run_half_space_estimates(self) -> SuiteResult:
        settings = self.config.half_space_estimates
        field = build_field(self.config.field, DomainTag.HALF_SPACE)
        mollifier = self._mollifier(field.n)
        params = self._calibrated_params(
            field, WeightVariant.HALF_SPACE, settings.d, settings.gamma
        )
        samples = half_space_samples(
            field.n,
            settings.samples,
            self.seed,
            settings.xn_min,
            settings.xn_max,
            settings.lateral,
            settings.t_min,
            settings.t_max,
        )
        checks = check_half_space_estimates(
            field,
            params,
            samples,
            tol=self.runtime.tolerance,
            generic_constant=settings.generic_constant,
            mollifier=mollifier,
            refinement=settings.refinement,
        )

        floor = time_floor(params.K, CUBIC_POWER)
        kept = samples.select(samples.t >= floor).head(settings.j_sum_points)
        weight = HalfSpaceWeight(field, params, mollifier)
        evaluation = weight.evaluate(kept.x, kept.t)
        generic = settings.generic_constant
        total = compute_j_terms(evaluation, field.bounds, generic).total
        direct = direct_m2(weight, evaluation, generic)
        relative = np.abs(total - direct) / (1.0 + np.abs(direct))
        checks.append(
            MarginReport.from_margins(
                "j_sum_identity",
                J_SUM_LIMIT - relative,
                tolerance=0.0,
                locations=kept.locations,
                empirical_constant=float(np.max(relative)),
            )
        )
        return SuiteResult(
            suite=Suite.HALF_SPACE_ESTIMATES.value,
            seed=self.seed,
            params=params.model_dump(mode="json"),
            checks=checks,
        )

    def run_calibration(self) -> SuiteResult:
        settings = self.config.calibration
        variant = WeightVariant(settings.variant)
        field = build_field(self.config.field, _domain_for(variant))
        template = default_constants(
            field.bounds, variant, d=1.0, gamma=settings.gamma
        ).params
        if variant is WeightVariant.WHOLE_SPACE:
            samples = self._cloud(field, settings.samples, 0.0, 10.0, 1e-3, 2.0)
        else:
            samples = self._calibration_cloud(field, settings.samples)
        result = calibrate_d(
            field,
            template,
            samples,
            settings.d_grid,
            tol=self.runtime.tolerance,
            generic_constant=self.config.half_space_estimates.generic_constant,
            mollifier=self._mollifier(field.n),
        )
        params = result.params.model_dump(mode="json")
        params["attempts"] = [a.model_dump(mode="json") for a in result.attempts]
        return SuiteResult(
            suite=Suite.CALIBRATE.value,
            seed=self.seed,
            params=params,
            checks=result.reports,
        )

    def run_identity(self) -> SuiteResult:
        settings = self.config.identity
        variant = WeightVariant(settings.variant)
        if variant is WeightVariant.WHOLE_SPACE:
            lower, upper = settings.support_lower, settings.support_upper
        else:
            carleman = self.config.carleman
            lower, upper = carleman.half_space_lower, carleman.half_space_upper
        field = build_field(self.config.field, _domain_for(variant))
        params = default_constants(
            field.bounds, variant, d=settings.d, gamma=settings.gamma
        ).params
        mollifier = self._mollifier(field.n)
        u = make_bump(lower, upper)
        grid = self._grid(lower, upper, settings.nodes)

        profile = exponential_profile(settings.profile_rate)
        weighted = weighted_identity_residual(u, field, params, grid, mollifier)
        general = general_identity_residual(
            u, field, params, profile, settings.alpha_exp, grid, mollifier
        )
        special = general_identity_residual(
            u, field, params, exponential_profile(1.0), 0.0, grid, mollifier
        )
        coarse = QuadratureGrid.build(
            lower,
            upper,
            settings.convergence_nodes,
            QuadratureRule(settings.convergence_rule),
        )
        study = residual_convergence(
            u, field, params, coarse, levels=settings.levels, mollifier=mollifier
        )

        checks = [
            _bound_report(
                "weighted_identity",
                weighted.residual,
                IDENTITY_RESIDUAL_LIMIT,
                lhs=weighted.lhs,
                rhs=weighted.rhs,
            ),
            _bound_report(
                "general_identity",
                general.residual,
                IDENTITY_RESIDUAL_LIMIT,
                lhs=general.lhs,
                rhs=general.rhs,
            ),
            _bound_report(
                "identity_specialization",
                abs(special.residual - weighted.residual),
                SPECIALIZATION_LIMIT,
            ),
            MarginReport.from_margins(
                "identity_convergence",
                [study.order - MIN_CONVERGENCE_ORDER],
                tolerance=0.0,
                empirical_constant=study.order,
                details={
                    f"residual_level_{r.level}": r.residual for r in study.results
                },
            ),
        ]
        return SuiteResult(
            suite=Suite.IDENTITY.value,
            seed=self.seed,
            params=params.model_dump(mode="json"),
            checks=checks,
        )

    def run_carleman(self, variant: Optional[WeightVariant] = None) -> SuiteResult:
        settings = self.config.carleman
        variant = WeightVariant(variant or settings.variant)
        field = build_field(self.config.field, _domain_for(variant))
        params = self._calibrated_params(field, variant, settings.d)
        if variant is WeightVariant.WHOLE_SPACE:
            lower, upper = settings.whole_space_lower, settings.whole_space_upper
            check = check_whole_space_inequality
        else:
            lower, upper = settings.half_space_lower, settings.half_space_upper
            check = check_half_space_inequality
        grid = self._grid(lower, upper, settings.nodes)

        checks = []
        for seed in settings.bump_seeds:
            u = make_bump(lower, upper, seed=seed)
            outcomes = check(
                u,
                field,
                params,
                grid,
                settings.gammas,
                settings.tol_rel,
                settings.tol_abs,
                serial=self.runtime.serial,
                max_workers=self.runtime.max_workers,
            )
            checks.append(
                outcomes_report(
                    f"carleman_inequality_seed_{seed}", outcomes, settings.tol_rel
                )
            )
        return SuiteResult(
            suite=f"{Suite.CARLEMAN.value}-{variant.value.replace('_', '-')}",
            seed=self.seed,
            params=params.model_dump(mode="json"),
            checks=checks,
        )

    def run_cone(self) -> SuiteResult:
        settings = self.config.cone
        rng = np.random.default_rng(self.seed)
        radius = rng.uniform(settings.r_min, settings.r_max, settings.samples)
        angle = rng.uniform(0.05, math.pi - 0.05, settings.samples)
        upper_half = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        # every tenth point moved onto the boundary y_2 = 0
        closed_half = upper_half.copy()
        closed_half[::10, 1] = 0.0

        checks = []
        for l in settings.l_values:
            params = ConeParams.from_l(l)
            eigenvalues = np.linalg.eigvalsh(cone_matrix(upper_half, params))
            deviation = np.maximum(
                np.abs(eigenvalues[:, 0] - 1.0), np.abs(eigenvalues[:, 1] - l**2)
            )
            checks.append(
                MarginReport.from_margins(
                    f"cone_eigenvalues_l_{l:g}",
                    CONE_EIGENVALUE_LIMIT - deviation,
                    0.0,
                    upper_half,
                )
            )
            gradient = gradient_bound_check(params, closed_half)
            name = f"cone_gradient_bound_l_{l:g}"
            checks.append(gradient.model_copy(update={"check_name": name}))

            profile = GaussianProfile(center=np.array([0.3, 1.2]))
            steps = [0.02, 0.01, 0.005]
            residuals = [
                operator_equivalence_residual(
                    profile, params, upper_half[:64], settings.r_min, h
                ).empirical_constant
                for h in steps
            ]
            order = convergence_order(residuals, steps)
            fine = operator_equivalence_residual(
                profile, params, upper_half, settings.r_min
            )
            checks.append(
                fine.model_copy(update={"check_name": f"operator_equivalence_l_{l:g}"})
            )
            checks.append(
                MarginReport.from_margins(
                    f"operator_equivalence_order_l_{l:g}",
                    [order - MIN_CONVERGENCE_ORDER],
                    tolerance=0.0,
                    empirical_constant=order,
                    details={f"residual_h_{h:g}": r for h, r in zip(steps, residuals)},
                )
            )

        angle_degrees = critical_angle_degrees()
        checks.append(
            _bound_report(
                "lower_threshold",
                abs(BU_LOWER_THRESHOLD - LOWER_THRESHOLD_REFERENCE),
                1e-3,
                value=BU_LOWER_THRESHOLD,
            )
        )
        checks.append(
            _bound_report(
                "critical_angle",
                abs(angle_degrees - CRITICAL_ANGLE_REFERENCE),
                1e-2,
                value=angle_degrees,
            )
        )
        verdicts = {
            f"{E1:g}": threshold_classify(E1).value for E1 in settings.decay_values
        }
        return SuiteResult(
            suite=Suite.CONE.value,
            seed=self.seed,
            params={"classification": verdicts},
            checks=checks,
        )

    def run_cutoffs(self) -> SuiteResult:
        settings = self.config.cutoffs
        spec = CutoffSpec(tau=settings.tau, K=settings.K, alpha=settings.alpha)
        samples = cutoff_samples(
            spec, settings.samples, self.seed, n=self.config.field.n
        )
        expected = 1.0 + (0.5**-spec.K - 1.0) * (1.0 / spec.tau + 2.0) ** spec.alpha
        checks = [
            verify_omega_identity(spec, samples),
            verify_cutoff_derivative_bound(spec, samples),
            _bound_report(
                "cutoff_level_formula",
                abs(spec.cstar - expected),
                1e-12 * expected,
                cstar=spec.cstar,
            ),
        ]
        return SuiteResult(
            suite=Suite.CUTOFFS.value,
            seed=self.seed,
            params=spec.model_dump(mode="json"),
            checks=checks,
        )

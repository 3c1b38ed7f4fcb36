"""
Tests for the oracle service: Monte-Carlo partition noise, brute scans
and the verification suite.
"""

import numpy as np
import pytest

from gates.services.errors import InvalidRangeError, InvalidTrialError
from gates.services.oracle_service import (
    MIN_BRUTE_POINTS,
    OracleConfig,
    PartitionTrial,
    ScanTable,
    brute_scan,
    mc_cross_partition,
    mc_partition_noise,
    run_verification_suite,
    scaled_matrix_factory,
    trial_seeds,
)
from gates.services.smatrix_service import build_sqrt_not
from gates.services.sweep_service import SweepService
from gates.services.transport_service import output_probabilities


def small_config(**overrides):
    """A quick suite: fewer electrons, a 5-sigma band."""
    values = {
        'electron_count': 20000,
        'conservation_points': 401,
        'sigma_threshold': 5.0,
    }
    values.update(overrides)
    return OracleConfig(**values)


class TestPartitionTrial:
    """Test Monte-Carlo trial validation."""

    @pytest.mark.parametrize('probability', [-0.1, 1.5])
    def test_rejects_probability_outside_unit_interval(self, probability):
        """Test T outside [0, 1] raises."""
        with pytest.raises(InvalidTrialError):
            PartitionTrial(probability, 1000, 1)

    def test_rejects_non_positive_count(self):
        """Test N = 0 raises."""
        with pytest.raises(InvalidTrialError):
            PartitionTrial(0.5, 0, 1)

    def test_rejects_negative_seed(self):
        """Test seeds must be unsigned 64-bit integers."""
        with pytest.raises(InvalidTrialError):
            PartitionTrial(0.5, 1000, -1)
        with pytest.raises(InvalidTrialError):
            PartitionTrial(0.5, 1000, 2 ** 64)

    def test_accepts_endpoints(self):
        """Test T = 0 and T = 1 are valid trials."""
        assert PartitionTrial(0, 10, 0).transmission_probability == 0.0
        assert PartitionTrial(1, 10, 0).transmission_probability == 1.0


class TestMonteCarloPartitionNoise:
    """Test the sampled partition noise against T(1 - T)."""

    def test_half_transmission(self):
        """Test T = 1/2 with 10^6 electrons lands within 4 standard errors of 1/4."""
        estimate = mc_partition_noise(PartitionTrial(0.5, 1000000, 42))

        assert 2e-4 < estimate.standard_error < 3e-4
        assert abs(estimate.value - 0.25) <= 4 * estimate.standard_error

    def test_no_transmission(self):
        """Test T = 0 gives exactly zero noise and zero error."""
        assert mc_partition_noise(PartitionTrial(0.0, 10000, 7)) == (0.0, 0.0)

    def test_full_transmission(self):
        """Test T = 1 gives exactly zero noise."""
        assert mc_partition_noise(PartitionTrial(1.0, 10000, 7)).value == 0.0

    def test_matches_gate_transmission(self):
        """Test the estimate at P_D(kappa = 0.5) agrees with the closed form."""
        transmission = float(output_probabilities(build_sqrt_not(0.5), 'A')[3])
        estimate = mc_partition_noise(PartitionTrial(transmission, 1000000, 1234))

        expected = transmission * (1 - transmission)
        assert abs(estimate.value - expected) <= 4 * estimate.standard_error

    def test_reproducible(self):
        """Test the same seed yields the same estimate bit for bit."""
        trial = PartitionTrial(0.3, 50000, 99)
        assert mc_partition_noise(trial) == mc_partition_noise(trial)

    def test_seed_changes_sample(self):
        """Test different seeds give different estimates."""
        first = mc_partition_noise(PartitionTrial(0.3, 50000, 1))
        second = mc_partition_noise(PartitionTrial(0.3, 50000, 2))
        assert first.value != second.value

    def test_converges_within_ten_percent(self):
        """Test N = 10^4 is already within 10% of T(1 - T)."""
        estimate = mc_partition_noise(PartitionTrial(0.3, 10000, 42))
        assert estimate.value == pytest.approx(0.21, rel=0.1)

    def test_standard_error_scales_as_inverse_root_n(self):
        """Test se * sqrt(N) agrees within 10% for N = 10^4, 10^5, 10^6."""
        scaled = [
            mc_partition_noise(PartitionTrial(0.3, count, 42)).standard_error * np.sqrt(count)
            for count in (10000, 100000, 1000000)
        ]

        assert max(scaled) <= 1.1 * min(scaled)
        # sqrt(m4) of a Bernoulli(T) indicator
        expected = np.sqrt(0.21 * (1 - 3 * 0.21))
        assert all(value == pytest.approx(expected, rel=0.1) for value in scaled)


class TestMonteCarloCrossPartition:
    """Test the sampled exit correlation between two leads."""

    def test_matches_negative_product(self):
        """Test cov(C, D) is -P_C P_D at kappa = 0.5."""
        probabilities = output_probabilities(build_sqrt_not(0.5), 'A')
        normalized = probabilities / probabilities.sum()
        estimate = mc_cross_partition(probabilities, 200000, 5)

        expected = -normalized[2] * normalized[3]
        assert estimate.value < 0
        assert abs(estimate.value - expected) <= 4 * estimate.standard_error

    def test_reproducible(self):
        """Test the same seed yields the same covariance."""
        probabilities = [0.1, 0.2, 0.3, 0.4]
        assert mc_cross_partition(probabilities, 10000, 3) == mc_cross_partition(probabilities, 10000, 3)

    @pytest.mark.parametrize('probabilities', [[0.5, 0.5], [-0.1, 0.4, 0.4, 0.3], [0, 0, 0, 0]])
    def test_rejects_invalid_probabilities(self, probabilities):
        """Test malformed exit probabilities raise."""
        with pytest.raises(InvalidTrialError):
            mc_cross_partition(probabilities, 1000, 1)

    def test_rejects_single_electron(self):
        """Test a covariance needs at least two electrons."""
        with pytest.raises(InvalidTrialError):
            mc_cross_partition([0.25, 0.25, 0.25, 0.25], 1, 1)


class TestTrialSeeds:
    """Test per-trial seed derivation."""

    def test_deterministic_and_distinct(self):
        """Test seeds depend only on the base seed and are pairwise distinct."""
        seeds = trial_seeds(42, 11)

        assert seeds == trial_seeds(42, 11)
        assert len(set(seeds)) == 11
        assert all(0 <= seed < 2 ** 64 for seed in seeds)

    def test_prefix_stable(self):
        """Test asking for more trials keeps the earlier seeds."""
        assert trial_seeds(7, 12)[:5] == trial_seeds(7, 5)

    def test_base_seed_matters(self):
        """Test different base seeds give different trial seeds."""
        assert trial_seeds(1, 3) != trial_seeds(2, 3)


class TestBruteScan:
    """Test dense tabulation and feature counting."""

    def setup_method(self):
        self.service = SweepService()

    def test_auto_noise_maxima_on_a_million_points(self):
        """Test S_DD has exactly two local maxima on 10^6 points."""
        table = brute_scan(self.service.curve('S_DD'), (-10.0, 10.0), 1000000)
        assert table.kappas.size == 1000000
        assert table.count_extrema('maximum') == 2

    def test_half_transmission_sign_changes(self):
        """Test P_D - 1/2 changes sign exactly twice."""
        table = brute_scan(self.service.curve('P_D'), (-10.0, 10.0))
        assert table.count_sign_changes(0.5) == 2

    def test_constant_curve(self):
        """Test a constant curve has no extrema and no sign changes."""
        table = brute_scan(lambda k: np.full(np.shape(k), 0.25), (-1.0, 1.0))
        assert table.count_extrema() == 0
        assert table.count_sign_changes(0.5) == 0

    def test_exact_zeros_do_not_double_count(self):
        """Test a sample that hits the target exactly counts as one sign change."""
        table = ScanTable(kappas=np.arange(5.0), values=np.array([-1.0, -0.5, 0.0, 0.5, 1.0]))
        assert table.count_sign_changes() == 1

    def test_rejects_small_grid(self):
        """Test fewer than MIN_BRUTE_POINTS raises."""
        with pytest.raises(InvalidRangeError):
            brute_scan(self.service.curve('S_DD'), (-10.0, 10.0), MIN_BRUTE_POINTS - 1)


class TestVerificationSuite:
    """Test the full oracle suite."""

    def test_passes_on_the_gate(self):
        """Test every check passes for the sqrt(NOT) family."""
        report = run_verification_suite(seed=42, config=small_config())

        assert report.passed, [check.name for check in report.failed_checks]
        assert report.seed == 42
        assert len(report.checks) == 23

    def test_passes_with_default_config(self):
        """Test 10^6 electrons per trial and a 3-sigma band pass for seed 42."""
        config = OracleConfig()
        report = run_verification_suite(seed=42, config=config)

        assert config.electron_count == 1000000
        assert config.sigma_threshold == 3.0
        assert len(config.mc_kappas) == 10
        assert report.passed, [check.name for check in report.failed_checks]

    def test_resonance_deviation_is_reported(self):
        """Test the kappa = 0 unitarity deviation is checked against 2 t1 t2 = 1."""
        report = run_verification_suite(seed=42, config=small_config())
        check = next(c for c in report.checks if c.name == 'unitarity_deviation_at_resonance')

        assert check.passed
        assert check.measured == pytest.approx(1.0, abs=1e-12)
        assert check.expected == pytest.approx(1.0, abs=1e-12)

    def test_check_names(self):
        """Test the suite covers the closed-form, brute and Monte-Carlo checks."""
        names = {check.name for check in run_verification_suite(seed=1, config=small_config()).checks}

        for expected in (
            'perfect_gate_probabilities',
            'perfect_gate_fidelity',
            'probability_conservation',
            'auto_noise_identity',
            's_dd_maxima',
            'half_transmission_roots',
            'cross_noise_symmetry',
            'cross_noise_bound',
            'unitarity_deviation_at_resonance',
            'coth_low_temperature',
            'prefactor_zero_bias',
            'mc_partition_noise[kappa=0]',
            'mc_cross_partition[kappa=0.5]',
        ):
            assert expected in names

    def test_deterministic(self):
        """Test the same seed reproduces the report exactly."""
        config = small_config()
        assert run_verification_suite(seed=9, config=config).to_dict() == \
            run_verification_suite(seed=9, config=config).to_dict()

    def test_corrupt_matrix_fails(self):
        """Test a 1% scaled matrix breaks probability conservation."""
        report = run_verification_suite(seed=42, config=small_config(), matrix_factory=scaled_matrix_factory())
        failed = {check.name for check in report.failed_checks}

        assert not report.passed
        assert 'probability_conservation' in failed
        assert 'perfect_gate_probabilities' in failed
        assert 'unitarity_deviation_at_resonance' in failed

    def test_rejects_negative_seed(self):
        """Test seeds outside the unsigned 64-bit range raise."""
        with pytest.raises(InvalidTrialError):
            run_verification_suite(seed=-1, config=small_config())

    def test_report_dict(self):
        """Test the summary counts agree with the checks."""
        summary = run_verification_suite(seed=42, config=small_config()).to_dict()

        assert summary['total'] == len(summary['checks'])
        assert summary['failed'] == sum(1 for check in summary['checks'] if not check['passed'])
        assert summary['passed'] == (summary['failed'] == 0)

"""
Oracle Service: independent checks of the closed-form transport formulas.

Two oracles that share no code path with the noise formulas:
- Monte-Carlo partition noise: N electrons, each transmitted with
  probability T, sampled with numpy's PCG64 generator. The sample variance
  of the transmission indicator estimates T(1 - T).
- Brute scans: dense tabulation of a curve on >= 100000 points, used to
  count sign changes and local extrema without any refinement.

run_verification_suite() combines both with direct evaluations into a
VerificationReport; the verify command and the API both render it.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings

from .errors import GateServiceError, InvalidTrialError
from .smatrix_service import LeadId, sqrt_not_magnitudes, sqrt_not_stack, unitarity_deviation_array
from .sweep_service import Curve, SweepConfig, SweepService, evaluate_curve, local_extrema, validate_range
from .transport_service import (
    BOLTZMANN_CONSTANT,
    ELEMENTARY_CHARGE,
    PLANCK_CONSTANT,
    BiasConfig,
    auto_noise_array,
    coth_factor,
    cross_noise_array,
    fidelity_array,
    noise_prefactor,
    output_probabilities_array,
)

logger = logging.getLogger(__name__)

MIN_BRUTE_POINTS = 100000
MAX_SEED = 2 ** 64 - 1

# Scale applied by the corrupt-matrix test hook
CORRUPTION_SCALE = 1.01

A = LeadId.A.index
C = LeadId.C.index
D = LeadId.D.index


@dataclass
class OracleConfig:
    """
    Verification suite configuration.
    Defaults can be overridden from settings.GATE_CONFIG.
    """
    seed: int = 42
    electron_count: int = 1000000
    brute_scan_points: int = MIN_BRUTE_POINTS
    conservation_points: int = 2001
    kappa_min: float = -10.0
    kappa_max: float = 10.0
    chunk_size: int = 50000
    sigma_threshold: float = 3.0
    mc_kappas: Tuple[float, ...] = (-3.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.6, 3.0)
    cross_partition_kappa: float = 0.5

    @classmethod
    def from_settings(cls) -> 'OracleConfig':
        config = getattr(settings, 'GATE_CONFIG', {})
        return cls(
            seed=int(config.get('VERIFY_SEED', cls.seed)),
            electron_count=int(config.get('MC_ELECTRONS', cls.electron_count)),
            brute_scan_points=int(config.get('BRUTE_SCAN_POINTS', cls.brute_scan_points)),
            kappa_min=float(config.get('KAPPA_MIN', cls.kappa_min)),
            kappa_max=float(config.get('KAPPA_MAX', cls.kappa_max)),
            chunk_size=int(config.get('CHUNK_SIZE', cls.chunk_size)),
            sigma_threshold=float(config.get('SIGMA_THRESHOLD', cls.sigma_threshold)),
        )


@dataclass(frozen=True)
class PartitionTrial:
    """N electrons partitioned with transmission probability T."""
    transmission_probability: float
    electron_count: int
    seed: int

    def __post_init__(self):
        probability = float(self.transmission_probability)
        if not 0.0 <= probability <= 1.0:
            raise InvalidTrialError(f"Transmission probability must lie in [0, 1], got {probability}")
        if int(self.electron_count) != self.electron_count or self.electron_count < 1:
            raise InvalidTrialError(f"Electron count must be a positive integer, got {self.electron_count}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise InvalidTrialError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, 'transmission_probability', probability)
        object.__setattr__(self, 'electron_count', int(self.electron_count))
        object.__setattr__(self, 'seed', int(self.seed))


class MonteCarloEstimate(NamedTuple):
    value: float
    standard_error: float


def trial_seeds(seed: int, count: int) -> List[int]:
    """Independent 64-bit seeds derived from a base seed and the trial index."""
    return [
        int(child.generate_state(1, dtype=np.uint64)[0])
        for child in np.random.SeedSequence(seed).spawn(count)
    ]


# =============================================================================
# Monte-Carlo partition noise
# =============================================================================

def mc_partition_noise(trial: PartitionTrial) -> MonteCarloEstimate:
    """
    Sample variance of the per-electron transmission indicator.

    The standard error is sqrt(m4 / N) with m4 the sample fourth central
    moment; it vanishes when every electron behaves the same.

    Returns:
        MonteCarloEstimate(value, standard_error), expectation T(1 - T)
    """
    rng = np.random.default_rng(trial.seed)
    transmitted = rng.binomial(1, trial.transmission_probability, size=trial.electron_count).astype(float)

    if trial.electron_count < 2:
        return MonteCarloEstimate(0.0, 0.0)

    deviations = transmitted - transmitted.mean()
    variance = float(np.sum(deviations ** 2) / (trial.electron_count - 1))
    fourth_moment = float(np.mean(deviations ** 4))
    return MonteCarloEstimate(variance, float(np.sqrt(fourth_moment / trial.electron_count)))


def mc_cross_partition(
    probabilities: Sequence[float],
    electron_count: int,
    seed: int,
    leads: Tuple[LeadId, LeadId] = (LeadId.C, LeadId.D)
) -> MonteCarloEstimate:
    """
    Covariance of two exit indicators when every electron leaves through
    exactly one of the four leads.

    Probabilities are normalized before sampling, so the expectation is
    -p1 * p2 of the normalized values. This checks the sign and size of the
    partition correlation, not the signed cross-noise formula.
    """
    weights = np.asarray(probabilities, dtype=float)
    if weights.shape != (4,) or not np.all(np.isfinite(weights)) or np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidTrialError(f"Need four non-negative exit probabilities, got {probabilities!r}")
    if electron_count < 2:
        raise InvalidTrialError(f"Cross partition needs at least 2 electrons, got {electron_count}")

    first, second = (LeadId.parse(lead).index for lead in leads)
    rng = np.random.default_rng(seed)
    exits = rng.multinomial(1, weights / weights.sum(), size=electron_count)

    x = exits[:, first] - exits[:, first].mean()
    y = exits[:, second] - exits[:, second].mean()
    products = x * y
    covariance = float(products.sum() / (electron_count - 1))
    return MonteCarloEstimate(covariance, float(np.std(products) / np.sqrt(electron_count)))


# =============================================================================
# Brute scans
# =============================================================================

@dataclass(frozen=True, eq=False)
class ScanTable:
    """A densely sampled curve."""
    kappas: np.ndarray
    values: np.ndarray

    def count_sign_changes(self, target: float = 0.0) -> int:
        signs = np.sign(self.values - target)
        signs = signs[signs != 0]
        return int(np.count_nonzero(signs[:-1] != signs[1:]))

    def count_extrema(self, kind: Optional[str] = None) -> int:
        return sum(1 for *_, found in local_extrema(self.values) if kind is None or found == kind)


def brute_scan(
    curve: Curve,
    kappa_range: Tuple[float, float],
    points: int = MIN_BRUTE_POINTS,
    chunk_size: int = 50000
) -> ScanTable:
    """
    Tabulate a curve on a uniform grid of at least MIN_BRUTE_POINTS points.

    Raises:
        InvalidRangeError: On a degenerate range or too few points
    """
    low, high = validate_range(kappa_range, points, MIN_BRUTE_POINTS)
    kappas = np.linspace(low, high, int(points))
    values = evaluate_curve(curve, kappas, chunk_size)
    logger.debug(f"Brute scan of {kappas.size} points over [{low}, {high}]")
    return ScanTable(kappas=kappas, values=values)


# =============================================================================
# Verification suite
# =============================================================================

@dataclass(frozen=True)
class VerificationCheck:
    """One measured-vs-expected comparison."""
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool
    detail: str = ''

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'measured': self.measured,
            'expected': self.expected,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'detail': self.detail,
        }


@dataclass
class VerificationReport:
    seed: int
    checks: List[VerificationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[VerificationCheck]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict:
        return {
            'seed': self.seed,
            'passed': self.passed,
            'total': len(self.checks),
            'failed': len(self.failed_checks),
            'checks': [check.to_dict() for check in self.checks],
        }


def scaled_matrix_factory(scale: float = CORRUPTION_SCALE) -> Callable[[np.ndarray], np.ndarray]:
    """The sqrt(NOT) family multiplied through by `scale`; breaks probability conservation."""
    def factory(kappa: np.ndarray) -> np.ndarray:
        return scale * sqrt_not_stack(kappa)
    return factory


def _within(name: str, measured: float, expected: float, tolerance: float, detail: str = '') -> VerificationCheck:
    passed = bool(np.isfinite(measured)) and abs(measured - expected) <= tolerance
    return VerificationCheck(name, float(measured), float(expected), float(tolerance), passed, detail)


def _count(name: str, measured: int, expected: int, detail: str = '') -> VerificationCheck:
    return VerificationCheck(name, float(measured), float(expected), 0.0, measured == expected, detail)


class VerificationSuite:
    """Runs every oracle check against one matrix factory."""

    def __init__(
        self,
        config: Optional[OracleConfig] = None,
        matrix_factory: Callable[[np.ndarray], np.ndarray] = sqrt_not_stack
    ):
        self.config = config or OracleConfig()
        self.matrix_factory = matrix_factory
        self.sweep = SweepService(
            SweepConfig(
                kappa_min=self.config.kappa_min,
                kappa_max=self.config.kappa_max,
                chunk_size=self.config.chunk_size,
            ),
            matrix_factory=matrix_factory,
        )

    @property
    def kappa_range(self) -> Tuple[float, float]:
        return (self.config.kappa_min, self.config.kappa_max)

    def run(self, seed: int) -> VerificationReport:
        report = VerificationReport(seed=seed)
        for check in (
            self.check_perfect_gate,
            self.check_conservation,
            self.check_auto_noise_identity,
            self.check_noise_maxima,
            self.check_half_transmission_roots,
            self.check_cross_noise_symmetry,
            self.check_cross_noise_bound,
            self.check_resonance_unitarity_deviation,
            self.check_prefactor_limits,
        ):
            report.checks.extend(check())
        report.checks.extend(self.check_monte_carlo(seed))

        for failed in report.failed_checks:
            logger.error(
                f"Verification check {failed.name} failed: measured {failed.measured!r}, "
                f"expected {failed.expected!r} within {failed.tolerance!r}"
            )
        logger.info(f"Verification suite finished: {len(report.checks) - len(report.failed_checks)}/{len(report.checks)} passed")
        return report

    # -------------------------------------------------------------------------
    # Direct evaluations
    # -------------------------------------------------------------------------

    def _grid(self) -> np.ndarray:
        return np.linspace(self.config.kappa_min, self.config.kappa_max, self.config.conservation_points)

    def check_perfect_gate(self) -> List[VerificationCheck]:
        stack = self.matrix_factory(np.array([0.0]))
        probabilities = output_probabilities_array(stack, A)[0]
        error = float(np.max(np.abs(probabilities - np.array([0.0, 0.0, 0.5, 0.5]))))
        return [
            _within('perfect_gate_probabilities', error, 0.0, 1e-12, 'max |P - (0, 0, 1/2, 1/2)| at kappa = 0'),
            _within('perfect_gate_fidelity', float(fidelity_array(stack, A)[0]), 1.0, 1e-12, 'F at kappa = 0'),
        ]

    def check_conservation(self) -> List[VerificationCheck]:
        columns = self.sweep.sweep_columns(self._grid(), A)
        totals = columns['P_A'] + columns['P_B'] + columns['P_C'] + columns['P_D']
        return [
            _within(
                'probability_conservation', float(np.max(np.abs(totals - 1.0))), 0.0, 1e-12,
                f"max |sum P - 1| over {totals.size} kappa values",
            ),
            _within(
                'norm_error', float(np.max(columns['norm_error'])), 0.0, 1e-12,
                'max row/column norm error over the grid',
            ),
        ]

    def check_auto_noise_identity(self) -> List[VerificationCheck]:
        stack = self.matrix_factory(self._grid())
        p_d = output_probabilities_array(stack, A)[..., D]
        s_dd = auto_noise_array(stack, D, A)
        return [_within(
            'auto_noise_identity', float(np.max(np.abs(s_dd - p_d * (1.0 - p_d)))), 0.0, 1e-12,
            'max |S_DD - P_D (1 - P_D)| over the grid',
        )]

    def check_cross_noise_symmetry(self) -> List[VerificationCheck]:
        stack = self.matrix_factory(self._grid())
        difference = cross_noise_array(stack, C, D, A) - cross_noise_array(stack, D, C, A)
        return [_within(
            'cross_noise_symmetry', float(np.max(np.abs(difference))), 0.0, 1e-12,
            'max |S_CD - S_DC| over the grid',
        )]

    def check_cross_noise_bound(self) -> List[VerificationCheck]:
        stack = self.matrix_factory(self._grid())
        cross = np.abs(cross_noise_array(stack, C, D, A))
        bound = np.sqrt(auto_noise_array(stack, C, A) * auto_noise_array(stack, D, A))
        excess = max(float(np.max(cross - bound)), 0.0)
        return [_within(
            'cross_noise_bound', excess, 0.0, 1e-12,
            'max(|S_CD| - sqrt(S_CC S_DD), 0) over the grid',
        )]

    def check_resonance_unitarity_deviation(self) -> List[VerificationCheck]:
        # Columns A and B overlap by -2 t1 t2 under the printed signs
        deviation = float(unitarity_deviation_array(self.matrix_factory(np.array(0.0))))
        magnitudes = sqrt_not_magnitudes(0.0)
        expected = float(2.0 * magnitudes.t1 * magnitudes.t2)
        return [_within(
            'unitarity_deviation_at_resonance', deviation, expected, 1e-12,
            'max |S^dagger S - I| at kappa = 0 vs 2 t1 t2',
        )]

    def check_prefactor_limits(self) -> List[VerificationCheck]:
        cold = BiasConfig(bias_voltage=1e-3, temperature=0.1)
        cold_argument = ELEMENTARY_CHARGE * cold.bias_voltage / (2.0 * BOLTZMANN_CONSTANT * cold.temperature)

        warm = BiasConfig(bias_voltage=1e-9, temperature=1.0)
        thermal = 2.0 * ELEMENTARY_CHARGE ** 2 * BOLTZMANN_CONSTANT * warm.temperature / PLANCK_CONSTANT
        return [
            _within(
                'coth_low_temperature', coth_factor(cold), 1.0, 1e-12,
                f"coth factor at beta eV / 2 = {cold_argument:.1f}",
            ),
            _within(
                'prefactor_zero_bias', noise_prefactor(warm) / thermal, 1.0, 1e-3,
                'prefactor / (2 e^2 k_B T / h) at V = 1 nV, T = 1 K',
            ),
        ]

    # -------------------------------------------------------------------------
    # Brute scans
    # -------------------------------------------------------------------------

    def check_noise_maxima(self) -> List[VerificationCheck]:
        table = brute_scan(
            self.sweep.curve('S_DD'), self.kappa_range,
            self.config.brute_scan_points, self.config.chunk_size,
        )
        return [_count(
            's_dd_maxima', table.count_extrema('maximum'), 2,
            f"local maxima of S_DD on {table.kappas.size} points",
        )]

    def check_half_transmission_roots(self) -> List[VerificationCheck]:
        table = brute_scan(
            self.sweep.curve('P_D'), self.kappa_range,
            self.config.brute_scan_points, self.config.chunk_size,
        )
        return [_count(
            'half_transmission_roots', table.count_sign_changes(0.5), 2,
            f"sign changes of P_D - 1/2 on {table.kappas.size} points",
        )]

    # -------------------------------------------------------------------------
    # Monte-Carlo
    # -------------------------------------------------------------------------

    def check_monte_carlo(self, seed: int) -> List[VerificationCheck]:
        kappas = np.asarray(self.config.mc_kappas, dtype=float)
        seeds = trial_seeds(seed, kappas.size + 1)
        stack = self.matrix_factory(kappas)
        transmissions = output_probabilities_array(stack, A)[..., D]
        expected_noise = auto_noise_array(stack, D, A)
        sigma = self.config.sigma_threshold

        checks = []
        for kappa, transmission, expected, trial_seed in zip(kappas, transmissions, expected_noise, seeds):
            name = f"mc_partition_noise[kappa={kappa:g}]"
            try:
                estimate = mc_partition_noise(PartitionTrial(float(transmission), self.config.electron_count, trial_seed))
            except GateServiceError as e:
                checks.append(VerificationCheck(name, float(transmission), float(expected), 0.0, False, f"no trial: {e}"))
                continue
            checks.append(_within(
                name, estimate.value, float(expected), sigma * estimate.standard_error,
                f"T = {transmission:.6f}, N = {self.config.electron_count}, {sigma:g} standard errors",
            ))

        cross_stack = self.matrix_factory(np.array([self.config.cross_partition_kappa]))
        probabilities = output_probabilities_array(cross_stack, A)[0]
        normalized = probabilities / probabilities.sum()
        estimate = mc_cross_partition(probabilities, self.config.electron_count, seeds[-1])
        checks.append(_within(
            f"mc_cross_partition[kappa={self.config.cross_partition_kappa:g}]",
            estimate.value, float(-normalized[C] * normalized[D]), sigma * estimate.standard_error,
            'covariance of C and D exit indicators vs -P_C P_D',
        ))
        return checks


def run_verification_suite(
    seed: Optional[int] = None,
    config: Optional[OracleConfig] = None,
    matrix_factory: Callable[[np.ndarray], np.ndarray] = sqrt_not_stack
) -> VerificationReport:
    """
    Run the full oracle suite.

    Args:
        seed: Base seed for the Monte-Carlo trials, defaults from config
        config: Suite configuration, defaults from settings
        matrix_factory: kappa array -> matrix stack; swap in to test the suite itself

    Returns:
        VerificationReport; report.passed is True iff every check passed
    """
    config = config or OracleConfig.from_settings()
    seed = config.seed if seed is None else seed
    if int(seed) != seed or not 0 <= seed <= MAX_SEED:
        raise InvalidTrialError(f"Seed must be a 64-bit unsigned integer, got {seed}")
    return VerificationSuite(config, matrix_factory).run(int(seed))

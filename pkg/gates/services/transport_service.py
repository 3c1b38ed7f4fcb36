"""
Transport Service for the waveguide sqrt(NOT) gate.

Computes, from a scattering matrix:
- Output state and per-lead output probabilities for a unit input
- Gate fidelity against the equal superposition |Xi> = (0, 0, 1/sqrt2, 1/sqrt2)
- The noise prefactor (e^3 V / h) coth(beta e V / 2)
- Zero-frequency auto and cross shot noise in the output leads

Noise with unit current injected in lead `in` (all other reservoirs at mu0):

    S_ll(0) = P * |S_l,in|^2 * sum_{g != in} |S_l,g|^2
    S_lm(0) = P * Re[ conj(S_l,in) S_m,in * sum_{g != in} S_l,g conj(S_m,g) ]

P is the prefactor above. For l = D, m = C and in = A the sums expand to the
familiar three-term expressions in t_DA, t_DB, r_DC, r_DD (auto) and
t_CA, t_CB, t_DB, r_CC, r_CD, r_DC, r_DD (cross); see noise_terms_auto and
noise_terms_cross.

Physical constants come from scipy.constants (CODATA 2018, exact in SI).
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE
from scipy.constants import h as PLANCK_CONSTANT
from scipy.constants import k as BOLTZMANN_CONSTANT

from .errors import (
    InvalidBiasError,
    InvalidMeasurementError,
    InvalidTargetError,
    UndefinedLimitError,
)
from .smatrix_service import (
    LEAD_ORDER,
    LeadId,
    ScatteringMatrix,
    build_sqrt_not,
    norm_diagnostics,
    squared_magnitudes,
    unitarity_deviation,
)

logger = logging.getLogger(__name__)

TARGET_NORM_TOLERANCE = 1e-12

LeadLike = Union[LeadId, str]


@dataclass(frozen=True, eq=False)
class QubitState:
    """Outgoing amplitudes (c_A, c_B, c_C, c_D) over the four leads."""
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (4,):
            raise InvalidTargetError(f"Qubit state needs 4 amplitudes, got {amplitudes.size}")
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidTargetError("Qubit state amplitudes must be finite")
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def perfect_superposition(cls) -> 'QubitState':
        """|Xi>: the electron leaves in C and D with equal amplitude."""
        half = 1.0 / math.sqrt(2.0)
        return cls(np.array([0.0, 0.0, half, half]))

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(squared_magnitudes(self.amplitudes))))

    @property
    def probabilities(self) -> np.ndarray:
        return squared_magnitudes(self.amplitudes)


PERFECT_SUPERPOSITION = QubitState.perfect_superposition()


@dataclass(frozen=True)
class BiasConfig:
    """
    Single-reservoir bias: the input lead's reservoir sits at mu0 - eV,
    the other three at mu0.
    """
    bias_voltage: float
    temperature: float
    input_lead: LeadId = LeadId.A
    base_chemical_potential: float = 0.0

    def __post_init__(self):
        try:
            voltage = float(self.bias_voltage)
            temperature = float(self.temperature)
        except (TypeError, ValueError):
            raise InvalidBiasError("Bias voltage and temperature must be real numbers")
        if not math.isfinite(voltage):
            raise InvalidBiasError(f"Bias voltage must be finite, got {voltage}")
        if not math.isfinite(temperature) or temperature < 0:
            raise InvalidBiasError(f"Temperature must be finite and >= 0 K, got {temperature}")

        lead = LeadId.parse(self.input_lead)
        if lead.side != 'input':
            raise InvalidBiasError(f"Biased lead must be on the input side (A or B), got {lead.value}")

        object.__setattr__(self, 'bias_voltage', voltage)
        object.__setattr__(self, 'temperature', temperature)
        object.__setattr__(self, 'input_lead', lead)

    @property
    def beta(self) -> float:
        """1 / (k_B T) in 1/J; infinite at T = 0."""
        if self.temperature == 0:
            return math.inf
        return 1.0 / (BOLTZMANN_CONSTANT * self.temperature)

    def chemical_potentials(self) -> Dict[LeadId, float]:
        shifted = self.base_chemical_potential - ELEMENTARY_CHARGE * self.bias_voltage
        return {
            lead: shifted if lead is self.input_lead else self.base_chemical_potential
            for lead in LEAD_ORDER
        }


@dataclass(frozen=True)
class NoiseResult:
    """Zero-frequency noise in units of the prefactor, optionally in A^2/Hz."""
    kind: str  # 'auto' or 'cross'
    leads: Tuple[LeadId, ...]
    value_prefactor_units: float
    value_si: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'leads': [lead.value for lead in self.leads],
            'value_prefactor_units': self.value_prefactor_units,
            'value_si': self.value_si,
        }


# =============================================================================
# States, probabilities, fidelity
# =============================================================================

def output_state(matrix: ScatteringMatrix, input_lead: LeadLike) -> QubitState:
    """Unit amplitude in `input_lead` maps to the matching column of S."""
    return QubitState(matrix.column(input_lead))


def output_probabilities(matrix: ScatteringMatrix, input_lead: LeadLike) -> np.ndarray:
    """Probability of leaving through A, B, C, D for a unit input."""
    return output_probabilities_array(matrix.entries, LeadId.parse(input_lead).index)


def _validate_target(target: QubitState) -> None:
    if abs(target.norm ** 2 - 1.0) > TARGET_NORM_TOLERANCE:
        raise InvalidTargetError(f"Fidelity target must have unit norm, got {target.norm:.15g}")


def fidelity(output: QubitState, target: QubitState = PERFECT_SUPERPOSITION) -> float:
    """
    Squared overlap |<output|target>|^2.

    The output is taken as-is (unnormalized), so probability reflected back
    into the input side lowers the fidelity.

    Raises:
        InvalidTargetError: If the target is not normalized
    """
    _validate_target(target)
    overlap = np.vdot(output.amplitudes, target.amplitudes)
    return float(overlap.real ** 2 + overlap.imag ** 2)


# =============================================================================
# Noise prefactor
# =============================================================================

def coth_factor(bias: BiasConfig) -> float:
    """coth(beta e V / 2); 1 at T = 0."""
    if bias.temperature == 0:
        return 1.0
    x = ELEMENTARY_CHARGE * bias.bias_voltage / (2.0 * BOLTZMANN_CONSTANT * bias.temperature)
    return float(1.0 / np.tanh(x))


def noise_prefactor(bias: BiasConfig) -> float:
    """
    (e^3 V / h) coth(beta e V / 2) in A^2/Hz.

    Limits:
        T = 0:          e^3 V / h
        V = 0, T > 0:   2 e^2 k_B T / h

    Raises:
        InvalidBiasError: If the bias voltage is negative
        UndefinedLimitError: If both V and T are zero
    """
    voltage, temperature = bias.bias_voltage, bias.temperature
    if voltage < 0:
        raise InvalidBiasError(f"Bias voltage must be >= 0 V, got {voltage}")
    if voltage == 0 and temperature == 0:
        raise UndefinedLimitError("Noise prefactor is undefined at V = 0 and T = 0")

    if voltage == 0:
        return 2.0 * ELEMENTARY_CHARGE ** 2 * BOLTZMANN_CONSTANT * temperature / PLANCK_CONSTANT
    return ELEMENTARY_CHARGE ** 3 * voltage / PLANCK_CONSTANT * coth_factor(bias)


# =============================================================================
# Shot noise
# =============================================================================

def _other_indices(input_index: int):
    return [g for g in range(4) if g != input_index]


def _check_measurement(lead: LeadId, input_lead: LeadId) -> None:
    if lead is input_lead:
        raise InvalidMeasurementError(
            f"Noise in lead {lead.value} with input {input_lead.value} is not a measurement on the output"
        )
    if lead.side != 'output' or input_lead.side != 'input':
        logger.debug(f"Noise measured in lead {lead.value} with input {input_lead.value} (generalized pair)")


def _with_si(kind: str, leads: Tuple[LeadId, ...], value: float, bias: Optional[BiasConfig]) -> NoiseResult:
    value_si = value * noise_prefactor(bias) if bias is not None else None
    return NoiseResult(kind=kind, leads=leads, value_prefactor_units=value, value_si=value_si)


def shot_noise_auto(
    matrix: ScatteringMatrix,
    lead: LeadLike,
    input_lead: LeadLike,
    bias: Optional[BiasConfig] = None
) -> NoiseResult:
    """
    Zero-frequency noise in a single lead.

    Raises:
        InvalidMeasurementError: If lead and input lead coincide
    """
    lead, input_lead = LeadId.parse(lead), LeadId.parse(input_lead)
    _check_measurement(lead, input_lead)
    value = float(auto_noise_array(matrix.entries, lead.index, input_lead.index))
    return _with_si('auto', (lead,), value, bias)


def shot_noise_cross(
    matrix: ScatteringMatrix,
    lead1: LeadLike,
    lead2: LeadLike,
    input_lead: LeadLike,
    bias: Optional[BiasConfig] = None
) -> NoiseResult:
    """
    Zero-frequency noise correlation across two leads.

    The sign is reported exactly as the formula yields it.

    Raises:
        InvalidMeasurementError: If lead1 == lead2 (use shot_noise_auto) or a
            lead coincides with the input
    """
    lead1, lead2, input_lead = LeadId.parse(lead1), LeadId.parse(lead2), LeadId.parse(input_lead)
    if lead1 is lead2:
        raise InvalidMeasurementError(
            f"Cross noise needs two distinct leads, got {lead1.value} twice; use shot_noise_auto"
        )
    _check_measurement(lead1, input_lead)
    _check_measurement(lead2, input_lead)
    value = float(cross_noise_array(matrix.entries, lead1.index, lead2.index, input_lead.index))
    return _with_si('cross', (lead1, lead2), value, bias)


# =============================================================================
# Vectorized forms over stacks of matrices (shape (..., 4, 4))
# =============================================================================

def output_probabilities_array(stack: np.ndarray, input_index: int) -> np.ndarray:
    return squared_magnitudes(stack[..., :, input_index])


def fidelity_array(
    stack: np.ndarray,
    input_index: int,
    target: QubitState = PERFECT_SUPERPOSITION
) -> np.ndarray:
    _validate_target(target)
    overlap = np.sum(np.conj(stack[..., :, input_index]) * target.amplitudes, axis=-1)
    return overlap.real ** 2 + overlap.imag ** 2


def auto_noise_array(stack: np.ndarray, lead_index: int, input_index: int) -> np.ndarray:
    power = squared_magnitudes(stack[..., lead_index, :])
    others = _other_indices(input_index)
    return power[..., input_index] * np.sum(power[..., others], axis=-1)


def cross_noise_array(stack: np.ndarray, lead1_index: int, lead2_index: int, input_index: int) -> np.ndarray:
    row1 = stack[..., lead1_index, :]
    row2 = stack[..., lead2_index, :]
    others = _other_indices(input_index)
    injected = np.conj(row1[..., input_index]) * row2[..., input_index]
    correlator = np.sum(row1[..., others] * np.conj(row2[..., others]), axis=-1)
    return (injected * correlator).real


# =============================================================================
# Labeled expansions
# =============================================================================

def entry_label(outgoing: LeadId, incoming: LeadId) -> str:
    """'r_XY' for same-side entries, 't_XY' across the cavity."""
    kind = 'r' if outgoing.side == incoming.side else 't'
    return f"{kind}_{outgoing.value}{incoming.value}"


def noise_terms_auto(matrix: ScatteringMatrix, lead: LeadLike, input_lead: LeadLike) -> Dict[str, float]:
    """
    The auto-noise sum split into its labeled terms, e.g. for lead D, input A:
    |t_DA|^2|t_DB|^2, |t_DA|^2|r_DC|^2, |t_DA|^2|r_DD|^2.
    """
    lead, input_lead = LeadId.parse(lead), LeadId.parse(input_lead)
    _check_measurement(lead, input_lead)
    injected = abs(matrix.amplitude(lead, input_lead)) ** 2
    injected_label = entry_label(lead, input_lead)

    terms = {}
    for other in LEAD_ORDER:
        if other is input_lead:
            continue
        label = f"|{injected_label}|^2|{entry_label(lead, other)}|^2"
        terms[label] = injected * abs(matrix.amplitude(lead, other)) ** 2
    return terms


def noise_terms_cross(
    matrix: ScatteringMatrix,
    lead1: LeadLike,
    lead2: LeadLike,
    input_lead: LeadLike
) -> Dict[str, float]:
    """
    The cross-noise sum split into its labeled terms (real parts), e.g. for
    leads C, D and input A:
    t_CA^dag t_CB t_DB^dag t_DA, t_CA^dag r_CC r_DC^dag t_DA, t_CA^dag r_CD r_DD^dag t_DA.
    """
    lead1, lead2, input_lead = LeadId.parse(lead1), LeadId.parse(lead2), LeadId.parse(input_lead)
    if lead1 is lead2:
        raise InvalidMeasurementError("Cross noise needs two distinct leads")

    first = entry_label(lead1, input_lead)
    last = entry_label(lead2, input_lead)
    terms = {}
    for other in LEAD_ORDER:
        if other is input_lead:
            continue
        label = f"{first}^dag {entry_label(lead1, other)} {entry_label(lead2, other)}^dag {last}"
        product = (
            np.conj(matrix.amplitude(lead1, input_lead))
            * matrix.amplitude(lead1, other)
            * np.conj(matrix.amplitude(lead2, other))
            * matrix.amplitude(lead2, input_lead)
        )
        terms[label] = float(product.real)
    return terms


# =============================================================================
# Single-point evaluation
# =============================================================================

@dataclass(frozen=True)
class GateEvaluation:
    """Everything reported about the gate at one kappa."""
    kappa: float
    input_lead: LeadId
    matrix: ScatteringMatrix
    probabilities: Tuple[float, float, float, float]
    fidelity: float
    s_dd: NoiseResult
    s_cd: NoiseResult
    unitarity_dev: float
    row_norm_error: float
    col_norm_error: float
    bias: Optional[BiasConfig] = None
    prefactor: Optional[float] = None

    @property
    def output_product(self) -> float:
        """P_C * P_D, which the cross noise tracks for this family."""
        return self.probabilities[LeadId.C.index] * self.probabilities[LeadId.D.index]

    def to_dict(self) -> Dict:
        data = {
            'kappa': self.kappa,
            'input_lead': self.input_lead.value,
            'matrix': [[value.real for value in row] for row in self.matrix.entries.tolist()],
            'probabilities': dict(zip((lead.value for lead in LEAD_ORDER), self.probabilities)),
            'fidelity': self.fidelity,
            's_dd': self.s_dd.to_dict(),
            's_cd': self.s_cd.to_dict(),
            'output_product': self.output_product,
            'unitarity_dev': self.unitarity_dev,
            'row_norm_error': self.row_norm_error,
            'col_norm_error': self.col_norm_error,
            'bias': None,
        }
        if self.bias is not None:
            data['bias'] = {
                'bias_voltage': self.bias.bias_voltage,
                'temperature': self.bias.temperature,
                'prefactor': self.prefactor,
            }
        return data


def evaluate_gate(
    kappa: float,
    input_lead: LeadLike = LeadId.A,
    bias: Optional[BiasConfig] = None
) -> GateEvaluation:
    """
    Build the sqrt(NOT) matrix at kappa and compute every reported quantity.

    Noise is measured in lead D (auto) and across leads C, D (cross).

    Raises:
        InvalidParameterError: If kappa is not finite
        InvalidBiasError, UndefinedLimitError: If the bias has no valid prefactor
    """
    input_lead = LeadId.parse(input_lead)
    if input_lead.side != 'input':
        raise InvalidMeasurementError(f"The gate is driven from lead A or B, got {input_lead.value}")
    if bias is not None and bias.input_lead is not input_lead:
        raise InvalidBiasError(
            f"Bias applied to lead {bias.input_lead.value} but input is lead {input_lead.value}"
        )

    matrix = build_sqrt_not(kappa)
    probabilities = tuple(float(p) for p in output_probabilities(matrix, input_lead))
    row_error, col_error = norm_diagnostics(matrix)

    evaluation = GateEvaluation(
        kappa=float(kappa),
        input_lead=input_lead,
        matrix=matrix,
        probabilities=probabilities,
        fidelity=fidelity(output_state(matrix, input_lead)),
        s_dd=shot_noise_auto(matrix, LeadId.D, input_lead, bias),
        s_cd=shot_noise_cross(matrix, LeadId.C, LeadId.D, input_lead, bias),
        unitarity_dev=unitarity_deviation(matrix),
        row_norm_error=row_error,
        col_norm_error=col_error,
        bias=bias,
        prefactor=noise_prefactor(bias) if bias is not None else None,
    )
    logger.debug(f"Evaluated gate at kappa={evaluation.kappa}, input {input_lead.value}: F={evaluation.fidelity:.12f}")
    return evaluation

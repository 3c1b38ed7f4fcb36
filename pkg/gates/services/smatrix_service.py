"""
Scattering-Matrix Service for the waveguide sqrt(NOT) gate.

Four single-mode leads meet at the tunneling cavity:
- A, B on the input side; C, D on the output side
- Electrons in A or C encode |1>, electrons in B or D encode |0>

Matrix layout (rows = outgoing lead, columns = incoming lead):

          A      B      C      D
    A   r_AA   r_AB   t_AC   t_AD
    B   r_BA   r_BB   t_BC   t_BD
    C   t_CA   t_CB   r_CC   r_CD
    D   t_DA   t_DB   r_DC   r_DD

The one-parameter family fills this layout with four magnitudes:
    r1 = sqrt(1/4 [1 - sech k])
    r2 = sqrt(1/2 [1 - sech k])
    t1 = sqrt(5/64 + 1/2 [sech k + 1/8][tanh k + 3/4])
    t2 = sqrt(5/64 + 1/2 [sech k + 1/8][tanh(-k) + 3/4])
with the signs listed in SIGN_PATTERN. Every row and column of the family
carries unit probability, but columns A and B overlap by -2 t1 t2, so the
matrix is not unitary; at k = 0 max |S^dagger S - I| is 1.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple, Union

import numpy as np

from .errors import InvalidParameterError


# Beyond this |kappa| cosh overflows; sech is taken as exactly zero.
SECH_CUTOFF = 700.0

# Negative radicands smaller than this are rounding noise and become zero.
RADICAND_DUST = 1e-15

# (magnitude, sign) for every entry, rows and columns in lead order A, B, C, D
SIGN_PATTERN = (
    (("r1", +1), ("r2", -1), ("t2", +1), ("t1", -1)),
    (("r2", -1), ("r1", -1), ("t1", +1), ("t2", +1)),
    (("t2", +1), ("t1", -1), ("r1", -1), ("r2", +1)),
    (("t1", +1), ("t2", -1), ("r2", +1), ("r1", +1)),
)


class LeadId(Enum):
    """The four leads attached to the scattering region."""
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def index(self) -> int:
        return LEAD_ORDER.index(self)

    @property
    def side(self) -> str:
        return 'input' if self in (LeadId.A, LeadId.B) else 'output'

    @property
    def qubit_value(self) -> int:
        return 1 if self in (LeadId.A, LeadId.C) else 0

    @classmethod
    def parse(cls, value: Union['LeadId', str]) -> 'LeadId':
        """Accept a LeadId or its label (case-insensitive)."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise InvalidParameterError(f"Unknown lead '{value}', expected one of A, B, C, D")


LEAD_ORDER: Tuple[LeadId, ...] = (LeadId.A, LeadId.B, LeadId.C, LeadId.D)
INPUT_LEADS = (LeadId.A, LeadId.B)
OUTPUT_LEADS = (LeadId.C, LeadId.D)


@dataclass(frozen=True)
class GateParameter:
    """The dimensionless kappa of the sqrt(NOT) family (kappa = 0 is resonance)."""
    kappa: float

    def __post_init__(self):
        try:
            value = float(self.kappa)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"Gate parameter must be a real number, got {self.kappa!r}")
        if not math.isfinite(value):
            raise InvalidParameterError(f"Gate parameter must be finite, got {value}")
        object.__setattr__(self, 'kappa', value)

    def __float__(self) -> float:
        return self.kappa


class GateMagnitudes(NamedTuple):
    """Entry magnitudes (or their radicands) of the sqrt(NOT) family."""
    r1: np.ndarray
    r2: np.ndarray
    t1: np.ndarray
    t2: np.ndarray


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """
    4x4 complex amplitude matrix over leads A, B, C, D.

    Entries are copied on construction and stored read-only.
    """
    entries: np.ndarray

    def __post_init__(self):
        try:
            entries = np.array(self.entries, dtype=complex)
        except (TypeError, ValueError) as e:
            raise InvalidParameterError(f"Scattering matrix entries are not numeric: {e}")
        if entries.shape != (4, 4):
            raise InvalidParameterError(f"Scattering matrix must be 4x4, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise InvalidParameterError("Scattering matrix entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def identity(cls) -> 'ScatteringMatrix':
        return cls(np.eye(4))

    def amplitude(self, outgoing: Union[LeadId, str], incoming: Union[LeadId, str]) -> complex:
        """Amplitude for scattering from `incoming` into `outgoing`."""
        return complex(self.entries[LeadId.parse(outgoing).index, LeadId.parse(incoming).index])

    def column(self, incoming: Union[LeadId, str]) -> np.ndarray:
        return self.entries[:, LeadId.parse(incoming).index].copy()

    def row(self, outgoing: Union[LeadId, str]) -> np.ndarray:
        return self.entries[LeadId.parse(outgoing).index, :].copy()


def _kappa_value(kappa: Union[GateParameter, float]) -> float:
    if isinstance(kappa, GateParameter):
        return kappa.kappa
    return GateParameter(kappa).kappa


def stable_sech(kappa) -> np.ndarray:
    """sech(kappa), exactly zero for |kappa| > SECH_CUTOFF."""
    k = np.asarray(kappa, dtype=float)
    clipped = np.clip(k, -SECH_CUTOFF, SECH_CUTOFF)
    return np.where(np.abs(k) > SECH_CUTOFF, 0.0, 1.0 / np.cosh(clipped))


def sqrt_not_radicands(kappa) -> GateMagnitudes:
    """Expressions under the square roots of r1, r2, t1, t2 (vectorized)."""
    k = np.asarray(kappa, dtype=float)
    sech = stable_sech(k)
    tanh = np.tanh(k)
    mirrored_tanh = np.tanh(-k)
    return GateMagnitudes(
        r1=0.25 * (1.0 - sech),
        r2=0.5 * (1.0 - sech),
        t1=5.0 / 64.0 + 0.5 * (sech + 0.125) * (tanh + 0.75),
        t2=5.0 / 64.0 + 0.5 * (sech + 0.125) * (mirrored_tanh + 0.75),
    )


def _guarded_sqrt(radicand: np.ndarray) -> np.ndarray:
    dust = (radicand < 0.0) & (radicand >= -RADICAND_DUST)
    return np.sqrt(np.where(dust, 0.0, radicand))


def sqrt_not_magnitudes(kappa) -> GateMagnitudes:
    radicands = sqrt_not_radicands(kappa)
    return GateMagnitudes(*(_guarded_sqrt(r) for r in radicands))


def sqrt_not_stack(kappa) -> np.ndarray:
    """
    Build the sqrt(NOT) matrices for an array of kappa values.

    Returns a complex array of shape kappa.shape + (4, 4).

    Raises:
        InvalidParameterError: If any kappa is not finite
    """
    k = np.asarray(kappa, dtype=float)
    if not np.all(np.isfinite(k)):
        raise InvalidParameterError("Gate parameter must be finite")

    magnitudes = sqrt_not_magnitudes(k)._asdict()
    stack = np.empty(k.shape + (4, 4), dtype=complex)
    for row, entries in enumerate(SIGN_PATTERN):
        for col, (name, sign) in enumerate(entries):
            stack[..., row, col] = sign * magnitudes[name]

    if not np.all(np.isfinite(stack)):
        raise InvalidParameterError("Gate magnitudes are not finite for the requested kappa")
    return stack


def build_sqrt_not(kappa: Union[GateParameter, float]) -> ScatteringMatrix:
    """
    Construct the sqrt(NOT) scattering matrix at a single kappa.

    Raises:
        InvalidParameterError: If kappa is not a finite real number
    """
    value = _kappa_value(kappa)
    return ScatteringMatrix(sqrt_not_stack(value))


def squared_magnitudes(stack: np.ndarray) -> np.ndarray:
    """|S|^2 elementwise, without a square root round trip."""
    return stack.real ** 2 + stack.imag ** 2


def unitarity_deviation_array(stack: np.ndarray) -> np.ndarray:
    """max |S^dagger S - I| over the last two axes."""
    # (S^dagger S)_ij = sum_k conj(S_ki) S_kj, reduced elementwise so the
    # result does not depend on how many matrices are stacked together
    product = np.sum(np.conj(stack)[..., :, :, None] * stack[..., :, None, :], axis=-3)
    return np.max(np.abs(product - np.eye(stack.shape[-1])), axis=(-2, -1))


def norm_errors_array(stack: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Largest row-norm and column-norm departures from 1 over the last two axes."""
    power = squared_magnitudes(stack)
    row_error = np.max(np.abs(power.sum(axis=-1) - 1.0), axis=-1)
    col_error = np.max(np.abs(power.sum(axis=-2) - 1.0), axis=-1)
    return row_error, col_error


def unitarity_deviation(matrix: ScatteringMatrix) -> float:
    """Zero iff the matrix is unitary to machine precision."""
    return float(unitarity_deviation_array(matrix.entries))


def norm_diagnostics(matrix: ScatteringMatrix) -> Tuple[float, float]:
    """Return (row_norm_error, col_norm_error)."""
    row_error, col_error = norm_errors_array(matrix.entries)
    return float(row_error), float(col_error)

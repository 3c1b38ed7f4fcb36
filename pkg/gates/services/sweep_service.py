"""
Sweep Service: kappa sweeps, figure datasets and feature location.

A sweep evaluates the sqrt(NOT) family on a uniform kappa grid and returns
one SweepRecord per point with the quantities plotted against kappa:

    kappa, P_A, P_B, P_C, P_D, F, S_DD, S_CD, unitarity_dev, norm_error

Features of those curves (half-transmission roots, noise maxima, the
fidelity peak) are found by scanning a dense grid and refining every
bracketed feature:
- Roots: bisection on sign changes, plus a tangent-touch fallback
- Extrema: bisection on the sign of a centered slope, with a bounded
  golden-section/Brent search when the slope does not change sign
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from django.conf import settings
from scipy import optimize

from .errors import InvalidParameterError, InvalidRangeError
from .smatrix_service import LeadId, norm_errors_array, sqrt_not_stack, unitarity_deviation_array
from .transport_service import (
    auto_noise_array,
    cross_noise_array,
    fidelity_array,
    output_probabilities_array,
)

logger = logging.getLogger(__name__)

Curve = Callable[[Union[float, np.ndarray]], np.ndarray]
MatrixFactory = Callable[[np.ndarray], np.ndarray]

SWEEP_COLUMNS = (
    'kappa', 'P_A', 'P_B', 'P_C', 'P_D', 'F', 'S_DD', 'S_CD', 'unitarity_dev', 'norm_error',
)

# Refinement tolerances
FEATURE_XTOL = 2e-11          # bisection tolerance; reported brackets are 4x this wide
SLOPE_STEP = 1e-5             # half-width of the centered slope difference
TANGENT_TOLERANCE = 1e-9      # |curve - target| accepted as a touching root
MIN_SCAN_POINTS = 16


@dataclass
class SweepConfig:
    """
    Defaults for sweeps and feature scans.
    All values can be overridden from settings.GATE_CONFIG or per call.
    """
    kappa_min: float = -10.0
    kappa_max: float = 10.0
    points: int = 2001
    extrema_scan_points: int = 10000
    chunk_size: int = 50000

    @classmethod
    def from_settings(cls) -> 'SweepConfig':
        config = getattr(settings, 'GATE_CONFIG', {})
        return cls(
            kappa_min=float(config.get('KAPPA_MIN', cls.kappa_min)),
            kappa_max=float(config.get('KAPPA_MAX', cls.kappa_max)),
            points=int(config.get('SWEEP_POINTS', cls.points)),
            extrema_scan_points=int(config.get('EXTREMA_SCAN_POINTS', cls.extrema_scan_points)),
            chunk_size=int(config.get('CHUNK_SIZE', cls.chunk_size)),
        )

    @property
    def kappa_range(self) -> Tuple[float, float]:
        return (self.kappa_min, self.kappa_max)


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a sweep."""
    kappa: float
    probabilities: Tuple[float, float, float, float]
    fidelity: float
    s_dd: float
    s_cd: float
    unitarity_dev: float
    norm_error: float

    def as_row(self) -> Tuple[float, ...]:
        """Values in SWEEP_COLUMNS order."""
        return (
            self.kappa, *self.probabilities, self.fidelity,
            self.s_dd, self.s_cd, self.unitarity_dev, self.norm_error,
        )

    def to_dict(self) -> Dict:
        return dict(zip(SWEEP_COLUMNS, self.as_row()))


@dataclass(frozen=True)
class ExtremumReport:
    """A located root, maximum or minimum of a swept curve."""
    location: float
    value: float
    kind: str  # 'maximum', 'minimum' or 'root'
    curve: str
    bracket: Tuple[float, float]

    def to_dict(self) -> Dict:
        return {
            'curve': self.curve,
            'kind': self.kind,
            'location': self.location,
            'value': self.value,
            'bracket': list(self.bracket),
        }


# =============================================================================
# Grid helpers
# =============================================================================

def validate_range(kappa_range: Tuple[float, float], points: int, min_points: int = 2) -> Tuple[float, float]:
    try:
        low, high = (float(k) for k in kappa_range)
    except (TypeError, ValueError):
        raise InvalidRangeError(f"Kappa range must be two numbers, got {kappa_range!r}")
    if not (np.isfinite(low) and np.isfinite(high)) or not low < high:
        raise InvalidRangeError(f"Kappa range must satisfy min < max, got ({low}, {high})")
    if int(points) != points or points < min_points:
        raise InvalidRangeError(f"Need an integer number of points >= {min_points}, got {points}")
    return low, high


def chunked(values: np.ndarray, chunk_size: int) -> Iterable[np.ndarray]:
    for start in range(0, values.size, chunk_size):
        yield values[start:start + chunk_size]


def evaluate_curve(curve: Curve, kappas: np.ndarray, chunk_size: int = 50000) -> np.ndarray:
    """Evaluate a vectorized curve on a grid, at most chunk_size points at a time."""
    kappas = np.asarray(kappas, dtype=float)
    if kappas.size == 0:
        return np.empty(0)
    return np.concatenate([np.asarray(curve(chunk), dtype=float) for chunk in chunked(kappas, chunk_size)])


def local_extrema(values: np.ndarray) -> List[Tuple[int, int, int, str]]:
    """
    Interior local maxima/minima of sampled values.

    Returns (index, low_index, high_index, kind) where index is the first
    sample of the (possibly flat) top, and low/high index the samples just
    outside it. Endpoints are never reported.
    """
    steps = np.sign(np.diff(values))
    moving = np.flatnonzero(steps)
    if moving.size < 2:
        return []
    direction = steps[moving]
    turns = np.flatnonzero(direction[:-1] != direction[1:])

    extrema = []
    for turn in turns:
        index = int(moving[turn]) + 1
        high_index = int(moving[turn + 1]) + 1
        kind = 'maximum' if direction[turn] > 0 else 'minimum'
        extrema.append((index, index - 1, high_index, kind))
    return extrema


def _scalar(curve: Curve, kappa: float) -> float:
    return float(np.asarray(curve(kappa), dtype=float))


def _feature_bracket(location: float, low: float, high: float) -> Tuple[float, float]:
    return (max(low, location - 2 * FEATURE_XTOL), min(high, location + 2 * FEATURE_XTOL))


# =============================================================================
# Named curves
# =============================================================================

D = LeadId.D.index
C = LeadId.C.index


def _columns_for_stack(stack: np.ndarray, input_index: int) -> Dict[str, np.ndarray]:
    probabilities = output_probabilities_array(stack, input_index)
    row_error, col_error = norm_errors_array(stack)
    return {
        'P_A': probabilities[..., 0],
        'P_B': probabilities[..., 1],
        'P_C': probabilities[..., 2],
        'P_D': probabilities[..., 3],
        'F': fidelity_array(stack, input_index),
        'S_DD': auto_noise_array(stack, D, input_index),
        'S_CD': cross_noise_array(stack, C, D, input_index),
        'unitarity_dev': unitarity_deviation_array(stack),
        'norm_error': np.maximum(row_error, col_error),
    }


_CURVE_FUNCTIONS = {
    'P_A': lambda stack, i: output_probabilities_array(stack, i)[..., 0],
    'P_B': lambda stack, i: output_probabilities_array(stack, i)[..., 1],
    'P_C': lambda stack, i: output_probabilities_array(stack, i)[..., 2],
    'P_D': lambda stack, i: output_probabilities_array(stack, i)[..., 3],
    'F': fidelity_array,
    'S_DD': lambda stack, i: auto_noise_array(stack, D, i),
    'S_CD': lambda stack, i: cross_noise_array(stack, C, D, i),
    'abs_S_CD': lambda stack, i: np.abs(cross_noise_array(stack, C, D, i)),
    'unitarity_dev': lambda stack, i: unitarity_deviation_array(stack),
    'norm_error': lambda stack, i: np.maximum(*norm_errors_array(stack)),
}

CURVE_NAMES = tuple(_CURVE_FUNCTIONS)


class SweepService:
    """
    Service for kappa sweeps and curve feature location.

    The matrix factory maps an array of kappa values to a stack of 4x4
    matrices; it defaults to the sqrt(NOT) family.
    """

    def __init__(
        self,
        config: Optional[SweepConfig] = None,
        matrix_factory: MatrixFactory = sqrt_not_stack
    ):
        self.config = config or SweepConfig()
        self.matrix_factory = matrix_factory

    def _input_index(self, input_lead: Union[LeadId, str]) -> int:
        lead = LeadId.parse(input_lead)
        if lead.side != 'input':
            raise InvalidParameterError(f"Sweeps inject from lead A or B, got {lead.value}")
        return lead.index

    def curve(self, name: str, input_lead: Union[LeadId, str] = LeadId.A) -> Curve:
        """
        Vectorized kappa -> value function for a named quantity.

        Names: P_A, P_B, P_C, P_D, F, S_DD, S_CD, abs_S_CD, unitarity_dev, norm_error
        """
        if name not in _CURVE_FUNCTIONS:
            raise InvalidParameterError(f"Unknown curve '{name}', expected one of {', '.join(CURVE_NAMES)}")
        function = _CURVE_FUNCTIONS[name]
        input_index = self._input_index(input_lead)
        factory = self.matrix_factory
        return lambda kappa: function(factory(np.asarray(kappa, dtype=float)), input_index)

    # -------------------------------------------------------------------------
    # Sweeps
    # -------------------------------------------------------------------------

    def sweep_kappa(
        self,
        kappa_range: Optional[Tuple[float, float]] = None,
        points: Optional[int] = None,
        input_lead: Union[LeadId, str] = LeadId.A
    ) -> List[SweepRecord]:
        """
        Evaluate every plotted quantity on a uniform grid (endpoints included).

        Args:
            kappa_range: (kappa_min, kappa_max), defaults from config
            points: Number of grid points (>= 2), defaults from config
            input_lead: Lead carrying the unit input current (A or B)

        Returns:
            SweepRecords in ascending kappa order

        Raises:
            InvalidRangeError: If the range is degenerate or points < 2
        """
        kappa_range = kappa_range if kappa_range is not None else self.config.kappa_range
        points = points if points is not None else self.config.points
        low, high = validate_range(kappa_range, points)
        input_index = self._input_index(input_lead)

        kappas = np.linspace(low, high, int(points))
        columns = self.sweep_columns(kappas, input_index)

        records = [
            SweepRecord(
                kappa=float(kappas[i]),
                probabilities=(
                    float(columns['P_A'][i]), float(columns['P_B'][i]),
                    float(columns['P_C'][i]), float(columns['P_D'][i]),
                ),
                fidelity=float(columns['F'][i]),
                s_dd=float(columns['S_DD'][i]),
                s_cd=float(columns['S_CD'][i]),
                unitarity_dev=float(columns['unitarity_dev'][i]),
                norm_error=float(columns['norm_error'][i]),
            )
            for i in range(kappas.size)
        ]
        logger.info(f"Swept {len(records)} points over kappa in [{low}, {high}], input lead {LeadId.parse(input_lead).value}")
        return records

    def sweep_columns(self, kappas: np.ndarray, input_index: int) -> Dict[str, np.ndarray]:
        """All sweep columns as arrays, evaluated chunk by chunk."""
        parts = [
            _columns_for_stack(self.matrix_factory(chunk), input_index)
            for chunk in chunked(np.asarray(kappas, dtype=float), self.config.chunk_size)
        ]
        columns = {'kappa': np.asarray(kappas, dtype=float)}
        for name in SWEEP_COLUMNS[1:]:
            columns[name] = np.concatenate([part[name] for part in parts])
        return columns

    # -------------------------------------------------------------------------
    # Roots
    # -------------------------------------------------------------------------

    def find_roots(
        self,
        curve: Curve,
        target: float,
        kappa_range: Optional[Tuple[float, float]] = None,
        scan_points: Optional[int] = None,
        name: str = 'curve'
    ) -> List[ExtremumReport]:
        """
        Locate every kappa where curve(kappa) == target.

        Sign changes of (curve - target) on the scan grid are refined by
        bisection; local minima of |curve - target| that touch the target
        without crossing are kept when within TANGENT_TOLERANCE.

        Returns:
            Root reports in ascending kappa order (empty if none)
        """
        kappa_range = kappa_range if kappa_range is not None else self.config.kappa_range
        scan_points = scan_points if scan_points is not None else self.config.extrema_scan_points
        low, high = validate_range(kappa_range, scan_points, MIN_SCAN_POINTS)

        kappas = np.linspace(low, high, int(scan_points))
        offset = evaluate_curve(curve, kappas, self.config.chunk_size) - target

        def shifted(kappa: float) -> float:
            return _scalar(curve, kappa) - target

        reports = []
        for i in np.flatnonzero(offset == 0.0):
            location = float(kappas[i])
            reports.append(ExtremumReport(location, _scalar(curve, location), 'root', name, (location, location)))

        crossings = np.flatnonzero(offset[:-1] * offset[1:] < 0)
        for i in crossings:
            a, b = float(kappas[i]), float(kappas[i + 1])
            location = optimize.bisect(shifted, a, b, xtol=FEATURE_XTOL)
            reports.append(ExtremumReport(
                location=float(location),
                value=_scalar(curve, location),
                kind='root',
                curve=name,
                bracket=_feature_bracket(location, a, b),
            ))

        near_crossing = set(crossings.tolist()) | set((crossings + 1).tolist())
        for index, low_index, high_index, kind in local_extrema(np.abs(offset)):
            if kind != 'minimum' or index in near_crossing or offset[index] == 0.0:
                continue
            a, b = float(kappas[low_index]), float(kappas[high_index])
            result = optimize.minimize_scalar(
                lambda k: abs(shifted(k)),
                bounds=(a, b),
                method='bounded',
                options={'xatol': FEATURE_XTOL},
            )
            if result.fun <= TANGENT_TOLERANCE:
                logger.debug(f"Tangent root of {name} at kappa={result.x:.12f}")
                reports.append(ExtremumReport(
                    location=float(result.x),
                    value=_scalar(curve, result.x),
                    kind='root',
                    curve=name,
                    bracket=_feature_bracket(result.x, a, b),
                ))

        reports.sort(key=lambda report: report.location)
        logger.info(f"Found {len(reports)} roots of {name} = {target} in [{low}, {high}]")
        return reports

    # -------------------------------------------------------------------------
    # Extrema
    # -------------------------------------------------------------------------

    def find_extrema(
        self,
        curve: Curve,
        kappa_range: Optional[Tuple[float, float]] = None,
        scan_points: Optional[int] = None,
        name: str = 'curve'
    ) -> List[ExtremumReport]:
        """
        Locate the interior local maxima and minima of a curve.

        Flat tops are reported at their smallest kappa; endpoints are
        excluded.

        Returns:
            Extremum reports in ascending kappa order (empty if none)
        """
        kappa_range = kappa_range if kappa_range is not None else self.config.kappa_range
        scan_points = scan_points if scan_points is not None else self.config.extrema_scan_points
        low, high = validate_range(kappa_range, scan_points, MIN_SCAN_POINTS)

        kappas = np.linspace(low, high, int(scan_points))
        values = evaluate_curve(curve, kappas, self.config.chunk_size)

        reports = []
        for index, low_index, high_index, kind in local_extrema(values):
            reports.append(self._refine_extremum(
                curve, kind, name,
                sampled=float(kappas[index]),
                low=float(kappas[low_index]),
                high=float(kappas[high_index]),
            ))

        logger.info(f"Found {len(reports)} extrema of {name} in [{low}, {high}]")
        return reports

    def _refine_extremum(
        self,
        curve: Curve,
        kind: str,
        name: str,
        sampled: float,
        low: float,
        high: float
    ) -> ExtremumReport:
        """Refine a bracketed extremum; rising-then-falling slope for a maximum."""

        def slope(kappa: float) -> float:
            left, right = np.asarray(curve(np.array([kappa - SLOPE_STEP, kappa + SLOPE_STEP])), dtype=float)
            return float(right - left)

        slope_low, slope_high = slope(low), slope(high)
        if slope_low * slope_high < 0:
            location = float(optimize.bisect(slope, low, high, xtol=FEATURE_XTOL))
            bracket = _feature_bracket(location, low, high)
        else:
            sign = -1.0 if kind == 'maximum' else 1.0
            result = optimize.minimize_scalar(
                lambda k: sign * _scalar(curve, k),
                bounds=(low, high),
                method='bounded',
                options={'xatol': FEATURE_XTOL},
            )
            location = float(result.x)
            if sign * _scalar(curve, sampled) < result.fun:
                location = sampled
            bracket = _feature_bracket(location, low, high)
            logger.warning(
                f"Slope of {name} does not change sign in [{low}, {high}]; "
                f"bounded search placed the {kind} at kappa={location:.12f}"
            )

        logger.debug(f"{kind.capitalize()} of {name} at kappa={location:.12f}")
        return ExtremumReport(
            location=location,
            value=_scalar(curve, location),
            kind=kind,
            curve=name,
            bracket=bracket,
        )

    # -------------------------------------------------------------------------
    # Figure features
    # -------------------------------------------------------------------------

    def locate_features(
        self,
        kappa_range: Optional[Tuple[float, float]] = None,
        scan_points: Optional[int] = None,
        input_lead: Union[LeadId, str] = LeadId.A
    ) -> Dict[str, List[ExtremumReport]]:
        """
        Extrema of S_DD, |S_CD| and F plus the roots of P_D - 1/2.

        Returns:
            {'S_DD': [...], 'abs_S_CD': [...], 'F': [...], 'P_D=0.5': [...]}
        """
        features = {}
        for name in ('S_DD', 'abs_S_CD', 'F'):
            features[name] = self.find_extrema(
                self.curve(name, input_lead), kappa_range, scan_points, name=name
            )
        features['P_D=0.5'] = self.find_roots(
            self.curve('P_D', input_lead), 0.5, kappa_range, scan_points, name='P_D'
        )
        return features

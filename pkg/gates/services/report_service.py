"""
Report Service: text reports, CSV tables and SVG plots.

Output formats:
- Sweep CSV: header kappa,P_A,P_B,P_C,P_D,F,S_DD,S_CD,unitarity_dev,norm_error,
  fixed-point decimals, LF line endings, UTF-8
- Extrema CSV: curve,kind,location,value,bracket_lo,bracket_hi
- Plots: one <column>.svg per swept quantity

Every writer is deterministic: the same records produce byte-identical
files (SVG ids are salted with a constant and the date is omitted).
"""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, TextIO, Union

import matplotlib
from matplotlib.figure import Figure

from .oracle_service import VerificationReport
from .smatrix_service import LEAD_ORDER
from .sweep_service import SWEEP_COLUMNS, ExtremumReport, SweepRecord
from .transport_service import GateEvaluation

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

EXTREMA_COLUMNS = ('curve', 'kind', 'location', 'value', 'bracket_lo', 'bracket_hi')

SVG_HASH_SALT = 'sqrt-not-gate'

AXIS_LABELS = {
    'P_A': 'P_A (probability of exiting lead A)',
    'P_B': 'P_B (probability of exiting lead B)',
    'P_C': 'P_C (probability of exiting lead C)',
    'P_D': 'P_D (probability of exiting lead D)',
    'F': 'F (fidelity)',
    'S_DD': 'S_DD (units of e^3V/h coth(beta eV/2))',
    'S_CD': 'S_CD (units of e^3V/h coth(beta eV/2))',
    'unitarity_dev': 'unitarity_dev (max |S^dagger S - I|)',
    'norm_error': 'norm_error (max row/column norm error)',
}


def format_number(value: float, precision: int = 12) -> str:
    """Fixed-point text; negative zero prints as zero."""
    text = f"{value:.{precision}f}"
    if text.startswith('-') and float(text) == 0.0:
        text = text[1:]
    return text


def _format_row(values: Iterable[float], precision: int) -> List[str]:
    return [format_number(value, precision) for value in values]


# =============================================================================
# CSV
# =============================================================================

def write_sweep_csv(records: Sequence[SweepRecord], handle: TextIO, precision: int = 12) -> int:
    """Write sweep rows to an open text stream. Returns the number of data rows."""
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(SWEEP_COLUMNS)
    for record in records:
        writer.writerow(_format_row(record.as_row(), precision))
    return len(records)


def save_sweep_csv(records: Sequence[SweepRecord], path: PathLike, precision: int = 12) -> Path:
    path = Path(path)
    with path.open('w', encoding='utf-8', newline='') as handle:
        write_sweep_csv(records, handle, precision)
    logger.info(f"Wrote {len(records)} sweep rows to {path}")
    return path


def sweep_csv_text(records: Sequence[SweepRecord], precision: int = 12) -> str:
    buffer = io.StringIO()
    write_sweep_csv(records, buffer, precision)
    return buffer.getvalue()


def write_extrema_csv(features: Dict[str, List[ExtremumReport]], handle: TextIO, precision: int = 12) -> int:
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(EXTREMA_COLUMNS)
    count = 0
    for reports in features.values():
        for report in reports:
            writer.writerow([
                report.curve,
                report.kind,
                *_format_row((report.location, report.value, *report.bracket), precision),
            ])
            count += 1
    return count


def save_extrema_csv(features: Dict[str, List[ExtremumReport]], path: PathLike, precision: int = 12) -> Path:
    path = Path(path)
    with path.open('w', encoding='utf-8', newline='') as handle:
        count = write_extrema_csv(features, handle, precision)
    logger.info(f"Wrote {count} features to {path}")
    return path


# =============================================================================
# SVG plots
# =============================================================================

def save_curve_plots(records: Sequence[SweepRecord], directory: PathLike) -> List[Path]:
    """
    Write one self-contained SVG per swept quantity into `directory`.

    Returns:
        Paths of the written files, in column order
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    kappas = [record.kappa for record in records]
    columns = {name: [] for name in SWEEP_COLUMNS[1:]}
    for record in records:
        for name, value in zip(SWEEP_COLUMNS[1:], record.as_row()[1:]):
            columns[name].append(value)

    written = []
    with matplotlib.rc_context({'svg.hashsalt': SVG_HASH_SALT, 'svg.fonttype': 'path'}):
        for name, values in columns.items():
            figure = Figure(figsize=(6.0, 4.0))
            axes = figure.add_subplot()
            axes.plot(kappas, values, linewidth=1.2)
            axes.set_xlabel('kappa')
            axes.set_ylabel(AXIS_LABELS[name])
            axes.set_title(f"{name} vs kappa")
            axes.grid(True, linewidth=0.4)
            figure.tight_layout()

            path = directory / f"{name}.svg"
            figure.savefig(path, format='svg', metadata={'Date': None})
            written.append(path)

    logger.info(f"Wrote {len(written)} plots to {directory}")
    return written


# =============================================================================
# Text reports
# =============================================================================

def render_gate_report(evaluation: GateEvaluation, precision: int = 12) -> str:
    lines = [
        f"sqrt(NOT) gate at kappa = {format_number(evaluation.kappa, precision)}, input lead {evaluation.input_lead.value}",
        '',
        'Scattering matrix (rows: outgoing, columns: incoming)',
        '      ' + ''.join(f"{lead.value:>{precision + 5}}" for lead in LEAD_ORDER),
    ]
    for lead, row in zip(LEAD_ORDER, evaluation.matrix.entries):
        lines.append(f"  {lead.value}   " + ''.join(
            f"{format_number(value.real, precision):>{precision + 5}}" for value in row
        ))

    lines += ['', 'Output probabilities']
    for lead, probability in zip(LEAD_ORDER, evaluation.probabilities):
        lines.append(f"  P_{lead.value} = {format_number(probability, precision)}")

    lines += [
        '',
        f"Fidelity F = {format_number(evaluation.fidelity, precision)}",
        '',
        'Shot noise (units of e^3V/h coth(beta eV/2))',
        f"  S_DD = {format_number(evaluation.s_dd.value_prefactor_units, precision)}",
        f"  S_CD = {format_number(evaluation.s_cd.value_prefactor_units, precision)}",
        f"  P_C * P_D = {format_number(evaluation.output_product, precision)}",
    ]

    if evaluation.bias is not None:
        lines += [
            '',
            f"Bias V = {evaluation.bias.bias_voltage:.6e} V, T = {evaluation.bias.temperature:.6e} K",
            f"  prefactor = {evaluation.prefactor:.12e} A^2/Hz",
            f"  S_DD = {evaluation.s_dd.value_si:.12e} A^2/Hz",
            f"  S_CD = {evaluation.s_cd.value_si:.12e} A^2/Hz",
        ]

    lines += [
        '',
        'Diagnostics',
        f"  unitarity_dev = {evaluation.unitarity_dev:.6e}",
        f"  row_norm_error = {evaluation.row_norm_error:.6e}",
        f"  col_norm_error = {evaluation.col_norm_error:.6e}",
    ]
    return '\n'.join(lines) + '\n'


def render_extrema_report(features: Dict[str, List[ExtremumReport]], precision: int = 12) -> str:
    lines = []
    for name, reports in features.items():
        lines.append(f"{name}: {len(reports)} feature(s)")
        for report in reports:
            low, high = report.bracket
            lines.append(
                f"  {report.kind:<8} kappa = {format_number(report.location, precision)}"
                f"  value = {format_number(report.value, precision)}"
                f"  bracket = [{format_number(low, precision)}, {format_number(high, precision)}]"
            )
    return '\n'.join(lines) + '\n'


def render_verification_report(report: VerificationReport) -> str:
    lines = [f"Verification suite, seed {report.seed}", '']
    for check in report.checks:
        verdict = 'PASS' if check.passed else 'FAIL'
        lines.append(
            f"[{verdict}] {check.name}: measured {check.measured:.12g}, "
            f"expected {check.expected:.12g}, tolerance {check.tolerance:.3g}"
        )
        if check.detail:
            lines.append(f"       {check.detail}")
    passed = len(report.checks) - len(report.failed_checks)
    lines += ['', f"{'PASSED' if report.passed else 'FAILED'}: {passed}/{len(report.checks)} checks"]
    return '\n'.join(lines) + '\n'

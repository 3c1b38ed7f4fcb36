"""
Tests for CSV, SVG and text report rendering.
"""

import csv
import io

import pytest

from gates.services.oracle_service import VerificationCheck, VerificationReport
from gates.services.report_service import (
    EXTREMA_COLUMNS,
    format_number,
    render_extrema_report,
    render_gate_report,
    render_verification_report,
    save_curve_plots,
    save_extrema_csv,
    save_sweep_csv,
    sweep_csv_text,
)
from gates.services.sweep_service import SWEEP_COLUMNS, ExtremumReport, SweepService
from gates.services.transport_service import BiasConfig, evaluate_gate


RESONANCE_ROW_PREFIX = (
    '0.000000000000,0.000000000000,0.000000000000,0.500000000000,'
    '0.500000000000,1.000000000000,0.250000000000,0.250000000000,'
)


class TestFormatNumber:
    """Test fixed-point formatting."""

    def test_fixed_point(self):
        """Test the requested number of decimals."""
        assert format_number(0.5) == '0.500000000000'
        assert format_number(-0.5, 3) == '-0.500'
        assert format_number(1.0 / 3.0, 4) == '0.3333'

    def test_negative_zero(self):
        """Test -0 and tiny negatives print without a sign."""
        assert format_number(-0.0, 3) == '0.000'
        assert format_number(-1e-15) == '0.000000000000'


class TestSweepCsv:
    """Test the sweep CSV layout."""

    def setup_method(self):
        self.records = SweepService().sweep_kappa()
        self.text = sweep_csv_text(self.records)

    def test_header(self):
        """Test the exact header line."""
        assert self.text.split('\n')[0] == 'kappa,P_A,P_B,P_C,P_D,F,S_DD,S_CD,unitarity_dev,norm_error'
        assert tuple(self.text.split('\n')[0].split(',')) == SWEEP_COLUMNS

    def test_row_count(self):
        """Test one header plus 2001 data rows, LF terminated."""
        lines = self.text.split('\n')
        assert lines[-1] == ''
        assert len(lines) - 1 == 2002
        assert '\r' not in self.text

    def test_resonance_row(self):
        """Test the kappa = 0 row."""
        assert self.text.split('\n')[1001].startswith(RESONANCE_ROW_PREFIX)

    def test_values_round_trip(self):
        """Test parsed values agree with the records within 1e-10."""
        rows = list(csv.reader(io.StringIO(self.text)))[1:]
        for record, row in zip(self.records, rows):
            assert [float(value) for value in row] == pytest.approx(list(record.as_row()), abs=1e-10)

    def test_precision(self):
        """Test a lower precision shortens every field."""
        text = sweep_csv_text(self.records[:3], precision=4)
        assert text.split('\n')[1].split(',')[0] == '-10.0000'

    def test_save_to_file(self, tmp_path):
        """Test the file matches the in-memory text byte for byte."""
        path = save_sweep_csv(self.records, tmp_path / 'sweep.csv')
        assert path.read_bytes() == self.text.encode('utf-8')

    def test_missing_directory(self, tmp_path):
        """Test writing into a missing directory raises OSError."""
        with pytest.raises(OSError):
            save_sweep_csv(self.records, tmp_path / 'missing' / 'sweep.csv')


class TestExtremaOutput:
    """Test the feature CSV and text report."""

    def setup_method(self):
        self.features = {
            'S_DD': [ExtremumReport(0.0, 0.25, 'maximum', 'S_DD', (-4e-11, 4e-11))],
            'P_D=0.5': [],
        }

    def test_csv(self, tmp_path):
        """Test the header and one row per feature."""
        path = save_extrema_csv(self.features, tmp_path / 'extrema.csv')
        lines = path.read_text(encoding='utf-8').split('\n')

        assert lines[0] == ','.join(EXTREMA_COLUMNS)
        assert lines[1] == 'S_DD,maximum,0.000000000000,0.250000000000,-0.000000000040,0.000000000040'
        assert lines[2:] == ['']

    def test_text_report(self):
        """Test every curve is listed, including ones with no features."""
        text = render_extrema_report(self.features)

        assert 'S_DD: 1 feature(s)' in text
        assert 'P_D=0.5: 0 feature(s)' in text
        assert 'maximum  kappa = 0.000000000000' in text


class TestCurvePlots:
    """Test SVG plot output."""

    def test_one_file_per_column(self, tmp_path):
        """Test nine SVG files are written."""
        paths = save_curve_plots(SweepService().sweep_kappa((-5.0, 5.0), 101), tmp_path)

        assert [path.name for path in paths] == [f"{name}.svg" for name in SWEEP_COLUMNS[1:]]
        assert all(path.read_bytes().lstrip().startswith(b'<?xml') for path in paths)

    def test_byte_identical(self, tmp_path):
        """Test two runs produce identical files."""
        records = SweepService().sweep_kappa((-5.0, 5.0), 101)
        first = save_curve_plots(records, tmp_path / 'first')
        second = save_curve_plots(records, tmp_path / 'second')

        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()


class TestTextReports:
    """Test the gate and verification reports."""

    def test_gate_report(self):
        """Test the resonance report lines."""
        text = render_gate_report(evaluate_gate(0.0))

        assert '  P_D = 0.500000000000' in text
        assert 'Fidelity F = 1.000000000000' in text
        assert '  S_DD = 0.250000000000' in text
        assert '  S_CD = 0.250000000000' in text
        assert '  P_C * P_D = 0.250000000000' in text
        assert 'A^2/Hz' not in text

    def test_gate_report_with_bias(self):
        """Test SI values are added when a bias is given."""
        text = render_gate_report(evaluate_gate(0.0, 'A', BiasConfig(1e-5, 0.0)))
        assert 'prefactor = ' in text
        assert 'A^2/Hz' in text

    def test_verification_report(self):
        """Test verdict lines and the summary."""
        report = VerificationReport(seed=3, checks=[
            VerificationCheck('alpha', 0.0, 0.0, 1e-12, True, 'first'),
            VerificationCheck('beta', 2.0, 1.0, 0.5, False),
        ])
        text = render_verification_report(report)

        assert text.startswith('Verification suite, seed 3\n')
        assert '[PASS] alpha: measured 0, expected 0, tolerance 1e-12' in text
        assert '[FAIL] beta: measured 2, expected 1, tolerance 0.5' in text
        assert text.endswith('FAILED: 1/2 checks\n')

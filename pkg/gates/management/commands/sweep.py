"""
python manage.py sweep [--range MIN MAX] [--points N] [--output FILE] [--plot]

Sweep kappa and write the figure dataset as CSV, optionally with one SVG
plot per column.
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand

from gates.management.base import add_range_arguments, collect, run_service, validated, write_file
from gates.serializers import SweepInputSerializer
from gates.services import SweepConfig, SweepService
from gates.services.report_service import save_curve_plots, save_sweep_csv, sweep_csv_text

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Sweep kappa and write P_A..P_D, F, S_DD, S_CD and diagnostics as CSV'
    requires_system_checks = []

    def add_arguments(self, parser):
        add_range_arguments(parser, '--points', 'Grid points including both ends (default 2001)')
        parser.add_argument('--output', help='CSV file to write (default: stdout)')
        parser.add_argument('--plot', action='store_true', help='Also write <column>.svg for every curve')
        parser.add_argument('--plot-dir', help='Directory for the SVG files (default: next to --output)')

    def handle(self, *args, **options):
        data = validated(SweepInputSerializer, collect(options, ('points', 'input_lead', 'precision')))

        records = run_service('Sweep', lambda: SweepService(SweepConfig.from_settings()).sweep_kappa(
            kappa_range=(data['kappa_min'], data['kappa_max']),
            points=data['points'],
            input_lead=data['input_lead'],
        ))

        output = options.get('output')
        if output:
            write_file(output, lambda path: save_sweep_csv(records, path, data['precision']))
        else:
            self.stdout.write(sweep_csv_text(records, data['precision']), ending='')

        if options['plot']:
            plot_dir = options.get('plot_dir') or (str(Path(output).parent) if output else '.')
            paths = write_file(plot_dir, lambda path: save_curve_plots(records, path))
            logger.info(f"Plots: {', '.join(p.name for p in paths)}")

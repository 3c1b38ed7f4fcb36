"""
python manage.py extrema [--range MIN MAX] [--scan-points N] [--output FILE]

Report the maxima of S_DD and |S_CD|, the fidelity peak and the kappa
values where P_D = 1/2.
"""

from django.core.management.base import BaseCommand

from gates.management.base import add_range_arguments, collect, run_service, validated, write_file
from gates.serializers import ExtremaInputSerializer
from gates.services import SweepConfig, SweepService
from gates.services.report_service import render_extrema_report, save_extrema_csv


class Command(BaseCommand):
    help = 'Locate noise maxima, the fidelity peak and half-transmission roots'
    requires_system_checks = []

    def add_arguments(self, parser):
        add_range_arguments(parser, '--scan-points', 'Scan grid size before refinement (default 10000)')
        parser.add_argument('--output', help='Also write the features as CSV')

    def handle(self, *args, **options):
        data = validated(ExtremaInputSerializer, collect(options, ('scan_points', 'input_lead', 'precision')))

        features = run_service('Feature location', lambda: SweepService(SweepConfig.from_settings()).locate_features(
            kappa_range=(data['kappa_min'], data['kappa_max']),
            scan_points=data['scan_points'],
            input_lead=data['input_lead'],
        ))

        self.stdout.write(render_extrema_report(features, data['precision']), ending='')
        if options.get('output'):
            write_file(options['output'], lambda path: save_extrema_csv(features, path, data['precision']))

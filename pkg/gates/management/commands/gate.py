"""
python manage.py gate --kappa K [--input-lead A|B] [--bias-voltage V] [--temperature T]

Print the sqrt(NOT) matrix at one kappa with its output probabilities,
fidelity, shot noise and diagnostics.
"""

import json

from django.core.management.base import BaseCommand

from gates.management.base import collect, run_service, validated
from gates.serializers import GateInputSerializer
from gates.services import evaluate_gate
from gates.services.report_service import render_gate_report


class Command(BaseCommand):
    help = 'Evaluate the sqrt(NOT) gate at a single kappa'
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--kappa', type=float, required=True, help='Gate parameter (0 is resonance)')
        parser.add_argument('--input-lead', choices=['A', 'B'], help='Lead carrying the input electron (default A)')
        parser.add_argument('--bias-voltage', type=float, help='Bias voltage in volts, adds SI noise values')
        parser.add_argument('--temperature', type=float, help='Temperature in kelvin, adds SI noise values')
        parser.add_argument('--precision', type=int, help='Decimal digits in the report (default 12)')
        parser.add_argument('--json', action='store_true', help='Print the evaluation as JSON')

    def handle(self, *args, **options):
        data = validated(GateInputSerializer, collect(
            options, ('kappa', 'input_lead', 'bias_voltage', 'temperature', 'precision')
        ))
        evaluation = run_service(
            'Gate evaluation',
            lambda: evaluate_gate(data['kappa'], data['input_lead'], data['bias']),
        )

        if options['json']:
            self.stdout.write(json.dumps(evaluation.to_dict(), indent=2, sort_keys=True))
        else:
            self.stdout.write(render_gate_report(evaluation, data['precision']), ending='')

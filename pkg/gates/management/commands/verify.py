"""
python manage.py verify [--seed N]

Run the oracle suite and print every check. Exits 1 when any check fails.
"""

import argparse

from django.core.management.base import BaseCommand, CommandError

from gates.management.base import FAILURE, collect, run_service, validated
from gates.serializers import VerifyInputSerializer
from gates.services import OracleConfig, run_verification_suite
from gates.services.oracle_service import scaled_matrix_factory
from gates.services.report_service import render_verification_report
from gates.services.smatrix_service import sqrt_not_stack


class Command(BaseCommand):
    help = 'Check the closed-form formulas against Monte-Carlo and brute-force oracles'
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, help='Base seed for the Monte-Carlo trials (default 42)')
        parser.add_argument('--electron-count', type=int, help='Electrons per Monte-Carlo trial (default 10^6)')
        parser.add_argument('--brute-scan-points', type=int, help='Brute-force grid size (default 10^5)')
        parser.add_argument('--inject-corrupt-matrix', action='store_true', help=argparse.SUPPRESS)

    def handle(self, *args, **options):
        data = validated(VerifyInputSerializer, collect(options, ('seed', 'electron_count', 'brute_scan_points')))

        config = OracleConfig.from_settings()
        if 'electron_count' in data:
            config.electron_count = data['electron_count']
        if 'brute_scan_points' in data:
            config.brute_scan_points = data['brute_scan_points']
        factory = scaled_matrix_factory() if options['inject_corrupt_matrix'] else sqrt_not_stack

        report = run_service('Verification', lambda: run_verification_suite(
            seed=data['seed'], config=config, matrix_factory=factory,
        ))

        self.stdout.write(render_verification_report(report), ending='')
        if not report.passed:
            raise CommandError(
                f"{len(report.failed_checks)} verification check(s) failed",
                returncode=FAILURE,
            )

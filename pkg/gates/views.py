"""
Gate Simulator API Views.

REST surface over the same services the management commands use:
- Health check and endpoint listing
- Single-point gate evaluation
- Kappa sweeps (figure datasets)
- Feature location (extrema and half-transmission roots)
- Oracle verification suite
- Simulator configuration
"""

import logging

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response
from rest_framework.views import APIView

from .serializers import (
    ExtremaInputSerializer,
    ExtremumReportSerializer,
    GateInputSerializer,
    HealthCheckSerializer,
    SweepInputSerializer,
    SweepRecordSerializer,
    VerificationCheckSerializer,
    VerifyInputSerializer,
)
from .services import OracleConfig, SweepConfig, SweepService, evaluate_gate, run_verification_suite
from .services.errors import GateServiceError
from .services.sweep_service import CURVE_NAMES, SWEEP_COLUMNS

logger = logging.getLogger(__name__)

API_VERSION = '1.0.0'

# Largest sweep served in one response
MAX_API_SWEEP_POINTS = 20001

# Largest Monte-Carlo trial and brute scan run for one request
MAX_API_ELECTRONS = 2000000
MAX_API_BRUTE_SCAN_POINTS = 2000000


def _validation_error(serializer):
    return Response(
        {'error': 'Validation failed', 'details': serializer.errors},
        status=status.HTTP_400_BAD_REQUEST
    )


def _service_error(action, error):
    logger.error(f"{action} failed: {error}")
    return Response(
        {'error': f'{action} failed', 'details': str(error)},
        status=status.HTTP_400_BAD_REQUEST
    )


class HealthCheckView(APIView):
    """
    Health check endpoint for monitoring and load balancers.

    GET /api/health/
    """

    def get(self, request):
        data = {
            'status': 'healthy',
            'message': 'sqrt(NOT) gate simulator API is running',
            'version': API_VERSION,
        }
        serializer = HealthCheckSerializer(data)
        return Response(serializer.data, status=status.HTTP_200_OK)


# =============================================================================
# Gate evaluation - POST /api/gate/evaluate
# =============================================================================

class GateEvaluateView(APIView):
    """
    POST /api/gate/evaluate
    Matrix, probabilities, fidelity and noise at one kappa.
    """

    def post(self, request):
        """
        Request:
        {
            "kappa": 0,
            "input_lead": "A",
            "bias_voltage": 1e-5,
            "temperature": 0
        }
        """
        serializer = GateInputSerializer(data=request.data)
        if not serializer.is_valid():
            return _validation_error(serializer)
        data = serializer.validated_data

        try:
            evaluation = evaluate_gate(data['kappa'], data['input_lead'], data['bias'])
        except GateServiceError as e:
            return _service_error('Gate evaluation', e)

        return Response(evaluation.to_dict(), status=status.HTTP_200_OK)


# =============================================================================
# Sweeps - POST /api/sweep/
# =============================================================================

class SweepView(APIView):
    """
    POST /api/sweep/
    One record per kappa on a uniform grid, endpoints included.
    """

    def post(self, request):
        serializer = SweepInputSerializer(data=request.data, context={'max_points': MAX_API_SWEEP_POINTS})
        if not serializer.is_valid():
            return _validation_error(serializer)
        data = serializer.validated_data

        try:
            records = SweepService(SweepConfig.from_settings()).sweep_kappa(
                kappa_range=(data['kappa_min'], data['kappa_max']),
                points=data['points'],
                input_lead=data['input_lead'],
            )
        except GateServiceError as e:
            return _service_error('Sweep', e)

        return Response({
            'columns': list(SWEEP_COLUMNS),
            'input_lead': data['input_lead'],
            'count': len(records),
            'records': SweepRecordSerializer([record.to_dict() for record in records], many=True).data,
        }, status=status.HTTP_200_OK)


# =============================================================================
# Feature location - POST /api/extrema/
# =============================================================================

class ExtremaView(APIView):
    """
    POST /api/extrema/
    Extrema of S_DD, |S_CD| and F, and the kappa values where P_D = 1/2.
    """

    def post(self, request):
        serializer = ExtremaInputSerializer(data=request.data)
        if not serializer.is_valid():
            return _validation_error(serializer)
        data = serializer.validated_data

        try:
            features = SweepService(SweepConfig.from_settings()).locate_features(
                kappa_range=(data['kappa_min'], data['kappa_max']),
                scan_points=data['scan_points'],
                input_lead=data['input_lead'],
            )
        except GateServiceError as e:
            return _service_error('Feature location', e)

        return Response({
            'features': {
                name: ExtremumReportSerializer([report.to_dict() for report in reports], many=True).data
                for name, reports in features.items()
            },
        }, status=status.HTTP_200_OK)


# =============================================================================
# Verification - POST /api/verify/
# =============================================================================

class VerifyView(APIView):
    """
    POST /api/verify/
    Run the oracle suite; 200 with passed=false when a check fails.
    """

    def post(self, request):
        serializer = VerifyInputSerializer(data=request.data, context={
            'max_electrons': MAX_API_ELECTRONS,
            'max_brute_scan_points': MAX_API_BRUTE_SCAN_POINTS,
        })
        if not serializer.is_valid():
            return _validation_error(serializer)
        data = serializer.validated_data

        config = OracleConfig.from_settings()
        if 'electron_count' in data:
            config.electron_count = data['electron_count']
        if 'brute_scan_points' in data:
            config.brute_scan_points = data['brute_scan_points']

        try:
            report = run_verification_suite(seed=data['seed'], config=config)
        except GateServiceError as e:
            return _service_error('Verification', e)

        summary = report.to_dict()
        summary['checks'] = VerificationCheckSerializer(
            [check.to_dict() for check in report.checks], many=True
        ).data
        return Response(summary, status=status.HTTP_200_OK)


# =============================================================================
# Configuration - GET /api/config/gate
# =============================================================================

class GateConfigView(APIView):
    """
    GET /api/config/gate - Simulator defaults and conventions
    """

    def get(self, request):
        sweep = SweepConfig.from_settings()
        oracle = OracleConfig.from_settings()

        return Response({
            'sweep': {
                'kappa_min': sweep.kappa_min,
                'kappa_max': sweep.kappa_max,
                'points': sweep.points,
                'extrema_scan_points': sweep.extrema_scan_points,
                'max_points_per_request': MAX_API_SWEEP_POINTS,
            },
            'verification': {
                'seed': oracle.seed,
                'electron_count': oracle.electron_count,
                'brute_scan_points': oracle.brute_scan_points,
                'sigma_threshold': oracle.sigma_threshold,
                'max_electrons_per_request': MAX_API_ELECTRONS,
                'max_brute_scan_points_per_request': MAX_API_BRUTE_SCAN_POINTS,
            },
            'curves': list(CURVE_NAMES),
            'conventions': [
                'Rows of the scattering matrix are outgoing leads, columns incoming leads',
                'Leads A and C encode |1>, leads B and D encode |0>',
                'Fidelity target is (0, 0, 1/sqrt2, 1/sqrt2)',
                'Noise is reported in units of (e^3 V / h) coth(beta e V / 2)',
                'Cross noise S_CD is reported with the sign its formula yields',
            ],
        }, status=status.HTTP_200_OK)


@api_view(['GET'])
def api_root(request):
    """
    GET /api/
    API documentation and endpoint listing.
    """
    return Response({
        'name': 'sqrt(NOT) Gate Simulator API',
        'version': API_VERSION,
        'description': 'Scattering-matrix model of a four-terminal waveguide sqrt(NOT) gate',
        'endpoints': {
            'health': {
                'GET /api/health/': 'Health check'
            },
            'gate': {
                'POST /api/gate/evaluate': 'Evaluate the gate at one kappa'
            },
            'sweep': {
                'POST /api/sweep/': 'Sweep kappa over a uniform grid'
            },
            'extrema': {
                'POST /api/extrema/': 'Locate noise maxima, fidelity peak and P_D = 1/2 roots'
            },
            'verify': {
                'POST /api/verify/': 'Run the oracle verification suite'
            },
            'config': {
                'GET /api/config/gate': 'Simulator defaults and conventions'
            },
        }
    })

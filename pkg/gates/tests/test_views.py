"""
Tests for the Gate Simulator API Views.
"""

from django.test import TestCase
from rest_framework import status
from rest_framework.test import APIClient


class TestHealthCheckEndpoint(TestCase):
    """Test health check endpoint."""

    def setUp(self):
        self.client = APIClient()

    def test_health_check_returns_200(self):
        """Test that health check returns 200 OK."""
        response = self.client.get('/api/health/')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['status'] == 'healthy'
        assert 'version' in response.data


class TestApiRootEndpoint(TestCase):
    """Test API root endpoint."""

    def setUp(self):
        self.client = APIClient()

    def test_api_root_returns_endpoints(self):
        """Test that API root lists available endpoints."""
        response = self.client.get('/api/')

        assert response.status_code == status.HTTP_200_OK
        for key in ('health', 'gate', 'sweep', 'extrema', 'verify', 'config'):
            assert key in response.data['endpoints']


class TestGateEvaluateEndpoint(TestCase):
    """Test single-point evaluation."""

    def setUp(self):
        self.client = APIClient()

    def test_resonance(self):
        """Test kappa = 0 returns the perfect gate."""
        response = self.client.post('/api/gate/evaluate', {'kappa': 0}, format='json')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['input_lead'] == 'A'
        assert abs(response.data['probabilities']['C'] - 0.5) < 1e-12
        assert abs(response.data['fidelity'] - 1.0) < 1e-12
        assert abs(response.data['s_cd']['value_prefactor_units'] - 0.25) < 1e-12
        assert response.data['bias'] is None

    def test_with_bias(self):
        """Test SI values are filled in when a bias is given."""
        payload = {'kappa': 0.5, 'bias_voltage': 1e-5, 'temperature': 1.0}
        response = self.client.post('/api/gate/evaluate', payload, format='json')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['s_dd']['value_si'] > 0
        assert response.data['bias']['prefactor'] > 0

    def test_missing_kappa(self):
        """Test that a missing kappa returns 400."""
        response = self.client.post('/api/gate/evaluate', {}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert 'error' in response.data
        assert 'kappa' in response.data['details']

    def test_output_lead_rejected(self):
        """Test that input from lead C is rejected."""
        response = self.client.post('/api/gate/evaluate', {'kappa': 0, 'input_lead': 'C'}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST

    def test_zero_bias_and_temperature(self):
        """Test that V = 0, T = 0 has no prefactor and returns 400."""
        payload = {'kappa': 0, 'bias_voltage': 0, 'temperature': 0}
        response = self.client.post('/api/gate/evaluate', payload, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert 'bias_voltage' in response.data['details']


class TestSweepEndpoint(TestCase):
    """Test kappa sweeps."""

    def setUp(self):
        self.client = APIClient()

    def test_small_sweep(self):
        """Test five points from -1 to 1 with kappa = 0 in the middle."""
        payload = {'kappa_min': -1, 'kappa_max': 1, 'points': 5}
        response = self.client.post('/api/sweep/', payload, format='json')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['count'] == 5
        assert response.data['columns'][0] == 'kappa'
        middle = response.data['records'][2]
        assert middle['kappa'] == 0.0
        assert abs(middle['S_DD'] - 0.25) < 1e-12

    def test_too_many_points(self):
        """Test the per-request point cap."""
        response = self.client.post('/api/sweep/', {'points': 20002}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert 'points' in response.data['details']

    def test_reversed_range(self):
        """Test kappa_min >= kappa_max returns 400."""
        payload = {'kappa_min': 1, 'kappa_max': -1, 'points': 5}
        response = self.client.post('/api/sweep/', payload, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST


class TestExtremaEndpoint(TestCase):
    """Test feature location."""

    def setUp(self):
        self.client = APIClient()

    def test_features(self):
        """Test two S_DD maxima and two half-transmission roots."""
        response = self.client.post('/api/extrema/', {'scan_points': 4000}, format='json')

        assert response.status_code == status.HTTP_200_OK
        features = response.data['features']
        assert set(features) == {'S_DD', 'abs_S_CD', 'F', 'P_D=0.5'}
        assert len([f for f in features['S_DD'] if f['kind'] == 'maximum']) == 2
        assert len(features['P_D=0.5']) == 2


class TestVerifyEndpoint(TestCase):
    """Test the verification suite over HTTP."""

    def setUp(self):
        self.client = APIClient()

    def test_report_shape(self):
        """Test the summary and per-check fields."""
        response = self.client.post('/api/verify/', {'seed': 3, 'electron_count': 20000}, format='json')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['seed'] == 3
        assert response.data['total'] == len(response.data['checks'])
        assert {'name', 'measured', 'expected', 'tolerance', 'passed', 'detail'} <= set(response.data['checks'][0])

    def test_negative_seed(self):
        """Test that a negative seed returns 400."""
        response = self.client.post('/api/verify/', {'seed': -1}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST

    def test_too_many_electrons(self):
        """Test the per-request electron cap returns 400 before any sampling."""
        response = self.client.post('/api/verify/', {'electron_count': 10 ** 12}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert 'electron_count' in response.data['details']

    def test_too_many_brute_scan_points(self):
        """Test the per-request brute-scan cap returns 400."""
        response = self.client.post('/api/verify/', {'brute_scan_points': 10 ** 9}, format='json')

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert 'brute_scan_points' in response.data['details']


class TestConfigEndpoint(TestCase):
    """Test simulator configuration endpoint."""

    def setUp(self):
        self.client = APIClient()

    def test_get_config(self):
        """Test that defaults and conventions are listed."""
        response = self.client.get('/api/config/gate')

        assert response.status_code == status.HTTP_200_OK
        assert response.data['sweep']['points'] == 2001
        assert response.data['verification']['seed'] == 42
        assert response.data['verification']['max_electrons_per_request'] == 2000000
        assert 'S_DD' in response.data['curves']
        assert len(response.data['conventions']) > 0

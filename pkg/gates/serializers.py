"""
Serializers for the gate simulator.

The same input serializers validate API request bodies and management
command options, so both surfaces accept exactly the same values.
"""

import math

from django.conf import settings
from rest_framework import serializers

from .services.errors import GateServiceError
from .services.oracle_service import MAX_SEED, MIN_BRUTE_POINTS, OracleConfig
from .services.sweep_service import MIN_SCAN_POINTS, SweepConfig
from .services.transport_service import BiasConfig, noise_prefactor

LEAD_CHOICES = [
    ('A', 'Lead A (|1>)'),
    ('B', 'Lead B (|0>)'),
]


def _gate_setting(key, fallback):
    return lambda: getattr(settings, 'GATE_CONFIG', {}).get(key, fallback)


class FiniteFloatField(serializers.FloatField):
    """FloatField that rejects NaN and infinities."""

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            raise serializers.ValidationError('A finite number is required.')
        return value


class PrecisionMixin(serializers.Serializer):
    precision = serializers.IntegerField(
        min_value=1,
        max_value=17,
        default=_gate_setting('CSV_PRECISION', 12),
        help_text="Decimal digits in reports and CSV files"
    )


class RangeMixin(serializers.Serializer):
    kappa_min = FiniteFloatField(default=_gate_setting('KAPPA_MIN', SweepConfig.kappa_min))
    kappa_max = FiniteFloatField(default=_gate_setting('KAPPA_MAX', SweepConfig.kappa_max))

    def validate(self, data):
        data = super().validate(data)
        if not data['kappa_min'] < data['kappa_max']:
            raise serializers.ValidationError({
                'kappa_max': 'kappa_max must be greater than kappa_min.'
            })
        return data


class GateInputSerializer(PrecisionMixin):
    """
    Input for a single-point gate evaluation.
    Supplying either bias_voltage or temperature adds SI noise values;
    the missing one defaults to 0.
    """
    kappa = FiniteFloatField(help_text="Dimensionless gate parameter (0 is resonance)")
    input_lead = serializers.ChoiceField(choices=LEAD_CHOICES, default='A')
    bias_voltage = FiniteFloatField(
        required=False,
        allow_null=True,
        min_value=0,
        help_text="Bias voltage V in volts"
    )
    temperature = FiniteFloatField(
        required=False,
        allow_null=True,
        min_value=0,
        help_text="Temperature T in kelvin"
    )

    def validate(self, data):
        """Build the BiasConfig and make sure its prefactor is defined."""
        voltage = data.get('bias_voltage')
        temperature = data.get('temperature')
        data['bias'] = None
        if voltage is None and temperature is None:
            return data

        try:
            bias = BiasConfig(
                bias_voltage=voltage or 0.0,
                temperature=temperature or 0.0,
                input_lead=data['input_lead'],
            )
            noise_prefactor(bias)
        except GateServiceError as e:
            raise serializers.ValidationError({'bias_voltage': str(e)})

        data['bias'] = bias
        return data


class SweepInputSerializer(RangeMixin, PrecisionMixin):
    """
    Input for a uniform kappa sweep.
    Pass context={'max_points': n} to cap the grid size.
    """
    points = serializers.IntegerField(min_value=2, default=_gate_setting('SWEEP_POINTS', SweepConfig.points))
    input_lead = serializers.ChoiceField(choices=LEAD_CHOICES, default='A')

    def validate_points(self, value):
        max_points = self.context.get('max_points')
        if max_points is not None and value > max_points:
            raise serializers.ValidationError(f"At most {max_points} points per request.")
        return value


class ExtremaInputSerializer(RangeMixin, PrecisionMixin):
    scan_points = serializers.IntegerField(
        min_value=MIN_SCAN_POINTS,
        default=_gate_setting('EXTREMA_SCAN_POINTS', SweepConfig.extrema_scan_points)
    )
    input_lead = serializers.ChoiceField(choices=LEAD_CHOICES, default='A')


class VerifyInputSerializer(serializers.Serializer):
    """
    Input for the oracle suite.
    Pass context={'max_electrons': n, 'max_brute_scan_points': m} to cap trial sizes.
    """
    seed = serializers.IntegerField(
        min_value=0,
        max_value=MAX_SEED,
        default=_gate_setting('VERIFY_SEED', OracleConfig.seed)
    )
    electron_count = serializers.IntegerField(
        min_value=2,
        required=False,
        help_text="Electrons per Monte-Carlo trial"
    )
    brute_scan_points = serializers.IntegerField(
        min_value=MIN_BRUTE_POINTS,
        required=False,
        help_text="Grid size of the brute-force feature counts"
    )

    def validate_electron_count(self, value):
        max_electrons = self.context.get('max_electrons')
        if max_electrons is not None and value > max_electrons:
            raise serializers.ValidationError(f"At most {max_electrons} electrons per trial.")
        return value

    def validate_brute_scan_points(self, value):
        max_points = self.context.get('max_brute_scan_points')
        if max_points is not None and value > max_points:
            raise serializers.ValidationError(f"At most {max_points} brute-scan points per request.")
        return value


# =============================================================================
# Output serializers
# =============================================================================

class SweepRecordSerializer(serializers.Serializer):
    kappa = serializers.FloatField()
    P_A = serializers.FloatField()
    P_B = serializers.FloatField()
    P_C = serializers.FloatField()
    P_D = serializers.FloatField()
    F = serializers.FloatField()
    S_DD = serializers.FloatField()
    S_CD = serializers.FloatField()
    unitarity_dev = serializers.FloatField()
    norm_error = serializers.FloatField()


class ExtremumReportSerializer(serializers.Serializer):
    curve = serializers.CharField()
    kind = serializers.ChoiceField(choices=['maximum', 'minimum', 'root'])
    location = serializers.FloatField()
    value = serializers.FloatField()
    bracket = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)


class VerificationCheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    measured = serializers.FloatField()
    expected = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
    detail = serializers.CharField(allow_blank=True)


class HealthCheckSerializer(serializers.Serializer):
    """
    Serializer for health check response.
    """
    status = serializers.CharField()
    message = serializers.CharField()
    version = serializers.CharField()

"""
URL configuration for the gates app.
"""

from django.urls import path
from .views import (
    ExtremaView,
    GateConfigView,
    GateEvaluateView,
    HealthCheckView,
    SweepView,
    VerifyView,
    api_root,
)

app_name = 'gates'

urlpatterns = [
    # GET /api/
    path('', api_root, name='api_root'),

    # GET /api/health/
    path('health/', HealthCheckView.as_view(), name='health_check'),

    # ==========================================================================
    # Simulator
    # ==========================================================================
    path('gate/evaluate', GateEvaluateView.as_view(), name='gate_evaluate'),
    path('sweep/', SweepView.as_view(), name='sweep'),
    path('extrema/', ExtremaView.as_view(), name='extrema'),
    path('verify/', VerifyView.as_view(), name='verify'),

    # ==========================================================================
    # Configuration
    # ==========================================================================
    path('config/gate', GateConfigView.as_view(), name='config_gate'),
]

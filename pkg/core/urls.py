"""
URL configuration for the sqrt(NOT) gate simulator.

API URL structure:
- /api/ - API root
- /api/health/ - Health check
- /api/gate/evaluate - Single-point evaluation
- /api/sweep/ - Kappa sweeps
- /api/extrema/ - Feature location
- /api/verify/ - Oracle verification suite
- /api/config/gate - Simulator defaults
"""

from django.urls import include, path

urlpatterns = [
    path('api/', include('gates.urls', namespace='gates')),
]

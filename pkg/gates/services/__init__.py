"""
Services package for the sqrt(NOT) gate simulator.

Numerical logic lives here; views and management commands only validate
input and render results.
"""

from .oracle_service import OracleConfig, run_verification_suite
from .smatrix_service import LeadId, build_sqrt_not
from .sweep_service import SweepConfig, SweepService
from .transport_service import BiasConfig, evaluate_gate

__all__ = [
    'BiasConfig',
    'LeadId',
    'OracleConfig',
    'SweepConfig',
    'SweepService',
    'build_sqrt_not',
    'evaluate_gate',
    'run_verification_suite',
]

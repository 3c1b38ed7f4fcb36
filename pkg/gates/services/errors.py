"""
Exceptions raised by the gate services.

Views and management commands catch GateServiceError and translate it
into an HTTP 400 or a CommandError.
"""


class GateServiceError(Exception):
    """Base exception for gate service errors."""
    pass


class InvalidParameterError(GateServiceError):
    """Gate parameter or matrix entries are not finite / malformed."""
    pass


class InvalidTargetError(GateServiceError):
    """Fidelity target state is not normalized."""
    pass


class InvalidMeasurementError(GateServiceError):
    """Requested noise measurement is not defined for the given leads."""
    pass


class InvalidBiasError(GateServiceError):
    """Bias configuration outside its physical domain."""
    pass


class UndefinedLimitError(GateServiceError):
    """Noise prefactor requested at zero bias and zero temperature."""
    pass


class InvalidRangeError(GateServiceError):
    """Degenerate kappa range or too few grid points."""
    pass


class InvalidTrialError(GateServiceError):
    """Monte-Carlo trial parameters outside their domain."""
    pass

"""Exception types raised across liaplab."""


class LiapLabError(Exception):
    """Base class for all liaplab errors."""


class ConfigurationError(LiapLabError, ValueError):
    """A declared constant, config key or solver setting is missing or invalid."""


class HypothesisError(LiapLabError):
    """The problem data violate a hypothesis the stability theory needs."""


class EvaluationError(LiapLabError):
    """A coefficient or field evaluated to a non-finite value."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class AliasingError(LiapLabError, ValueError):
    """A grid is too coarse to represent the requested number of modes."""


class DomainError(LiapLabError, ValueError):
    """An argument lies outside the domain of a constructed function."""


class CertificateError(LiapLabError):
    """A certificate constant cannot be constructed (e.g. horizon too short)."""


class BlowUpError(LiapLabError, FloatingPointError):
    """Time stepping produced NaN or overflow."""

    def __init__(self, message, last_valid_time):
        super().__init__(message)
        self.last_valid_time = last_valid_time

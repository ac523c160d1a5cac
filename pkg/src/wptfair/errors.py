"""Exception types raised across the package."""


class WptError(Exception):
    """Base class for package errors."""


class DomainError(WptError, ValueError):
    """An argument lies outside the domain of a model function."""


class InsufficientDataError(WptError, ValueError):
    """Too few (or degenerate) samples to fit a model."""


class ConvergenceError(WptError, RuntimeError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoInteriorLevel(WptError):
    """Raised when every per-sensor cap binds, so no water level exists."""


class ConfigError(WptError, ValueError):
    """Invalid simulation configuration; ``key`` names the offending field."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key

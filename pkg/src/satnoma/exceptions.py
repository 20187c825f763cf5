"""Centralized exception hierarchy for satnoma."""

from typing import Optional


class SatnomaError(Exception):
    """Base exception for all satnoma errors."""

    def __init__(self, message: str, cause: Optional[Exception] = None) -> None:
        super().__init__(message)
        self.cause = cause


class ConfigError(SatnomaError):
    """Raised when a scenario configuration is missing, malformed or invalid."""

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        super().__init__(message, cause)
        self.key = key


class OutOfPassError(SatnomaError):
    """Raised when a time instant lies outside the satellite passage."""

    pass


class DomainError(SatnomaError):
    """Raised when an SNR value is outside the domain of an operation."""

    pass


class OrderError(SatnomaError):
    """Raised when an SNR vector is not in nonincreasing decoding order."""

    pass


class OracleSizeError(SatnomaError):
    """Raised when an exhaustive search is requested for too many users."""

    pass


class ValidationError(SatnomaError):
    """Raised when an imported data file fails validation."""

    pass


class ExportError(SatnomaError):
    """Raised when results cannot be written."""

    pass

"""Result-file validation modules."""

from satnoma.validation.base import BaseValidator
from satnoma.validation.csv import CSVValidator, create_snr_validator

__all__ = [
    "BaseValidator",
    "CSVValidator",
    "create_snr_validator",
]

"""Validator interface for files read back into the simulator."""

from abc import ABC, abstractmethod
from pathlib import Path


class BaseValidator(ABC):
    """A full check that raises, and a cheap probe that never does."""

    @abstractmethod
    def validate_file(self, file_path: Path) -> bool:
        """Return True for a usable file.

        Raises:
            ValidationError: Describing the first problem found
        """
        ...

    @abstractmethod
    def quick_validate(self, file_path: Path) -> bool:
        """Return False instead of raising when the file is obviously unusable."""
        ...

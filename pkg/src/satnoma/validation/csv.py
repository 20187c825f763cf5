"""CSV validation utilities."""

from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from satnoma.exceptions import ValidationError
from satnoma.validation.base import BaseValidator


class CSVValidator(BaseValidator):
    """Reads a CSV export back and checks its layout before use.

    Checks run in order: existence and size, parse, row count, required
    columns, then each custom validator on the parsed frame. The first
    failure raises ValidationError.

    Example:
        >>> validator = CSVValidator(required_columns=["slot", "t_seconds"], min_rows=1)
        >>> frame = validator.load(Path("snr.csv"))
    """

    def __init__(
        self,
        min_file_size: int = 1,
        required_columns: Optional[list[str]] = None,
        min_rows: int = 0,
        custom_validators: Optional[list[Callable[[pd.DataFrame], None]]] = None,
    ) -> None:
        """Initialize CSV validator.

        Args:
            min_file_size: Minimum file size in bytes
            required_columns: List of required column names
            min_rows: Minimum number of rows expected
            custom_validators: Functions taking the DataFrame and raising
                ValidationError on failure
        """
        self.min_file_size = min_file_size
        self.required_columns = required_columns or []
        self.min_rows = min_rows
        self.custom_validators = custom_validators or []

    def load(self, file_path: Path) -> pd.DataFrame:
        """Read and validate a CSV file.

        Args:
            file_path: Path to CSV file

        Returns:
            The parsed DataFrame

        Raises:
            ValidationError: If validation fails
        """
        if not file_path.exists():
            raise ValidationError(f"File does not exist: {file_path}")

        file_size = file_path.stat().st_size
        if file_size < self.min_file_size:
            raise ValidationError(
                f"File too small ({file_size} bytes, minimum {self.min_file_size})"
            )

        try:
            df = pd.read_csv(file_path, encoding="utf-8")
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise ValidationError(f"Failed to read CSV {file_path}: {e}", cause=e) from e

        if len(df) < self.min_rows:
            raise ValidationError(f"Insufficient rows ({len(df)}, minimum {self.min_rows})")

        if self.required_columns:
            missing_cols = set(self.required_columns) - set(df.columns)
            if missing_cols:
                raise ValidationError(f"Missing required columns: {sorted(missing_cols)}")

        for validator in self.custom_validators:
            try:
                validator(df)
            except ValidationError:
                raise
            except Exception as e:
                raise ValidationError(f"Custom validation failed: {e}", cause=e) from e

        return df

    def validate_file(self, file_path: Path) -> bool:
        """Validate a CSV file.

        Raises:
            ValidationError: If validation fails
        """
        self.load(file_path)
        return True

    def quick_validate(self, file_path: Path) -> bool:
        """Existence and size only; never raises."""
        try:
            return file_path.stat().st_size >= self.min_file_size
        except OSError:
            return False


def validate_user_columns(df: pd.DataFrame) -> None:
    """Custom validator: user columns are user_0..user_{N-1}, in order.

    Raises:
        ValidationError: If no user columns or they are misnumbered
    """
    user_cols = [col for col in df.columns if str(col).startswith("user_")]
    if not user_cols:
        raise ValidationError("No user_* columns found in CSV")
    expected = [f"user_{i}" for i in range(len(user_cols))]
    if user_cols != expected:
        raise ValidationError(f"User columns out of order: {user_cols[:5]}...")


def validate_finite_numeric(df: pd.DataFrame) -> None:
    """Custom validator: every column is numeric and finite.

    Raises:
        ValidationError: If a column is non-numeric or holds NaN/inf
    """
    for col in df.columns:
        if not pd.api.types.is_numeric_dtype(df[col]):
            raise ValidationError(f"Column {col} is not numeric")
        if not np.all(np.isfinite(df[col].to_numpy(dtype=float))):
            raise ValidationError(f"Column {col} has non-finite values")


def create_snr_validator() -> CSVValidator:
    """Create a validator for SNR-matrix exports.

    Returns:
        CSVValidator checking the ``slot,t_seconds,user_*`` layout
    """
    return CSVValidator(
        min_file_size=1,
        required_columns=["slot", "t_seconds"],
        min_rows=1,
        custom_validators=[validate_user_columns, validate_finite_numeric],
    )

"""Progress bars for sweeps and verification runs, and package logging setup."""

import logging
import sys
from pathlib import Path
from typing import Optional

from tqdm import tqdm

LOGGER_NAME = "satnoma"

_CONSOLE_FORMAT = "%(levelname)s %(name)s: %(message)s"
_FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _handler(handler: logging.Handler, level: int, fmt: str) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt="%Y-%m-%d %H:%M:%S"))
    return handler


def configure_logging(verbose: bool = False, log_file: Optional[Path] = None) -> logging.Logger:
    """Attach stderr (and optional file) handlers to the ``satnoma`` logger.

    Calling it again replaces the handlers, so the CLI can be invoked
    repeatedly in one process. Module loggers (``satnoma.scheduler``, ...)
    reach these handlers through the hierarchy.

    Args:
        verbose: DEBUG on stderr instead of WARNING
        log_file: Optional file receiving DEBUG and above

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)

    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)

    console_level = logging.DEBUG if verbose else logging.WARNING
    logger.addHandler(_handler(logging.StreamHandler(sys.stderr), console_level, _CONSOLE_FORMAT))

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.addHandler(_handler(logging.FileHandler(log_file), logging.DEBUG, _FILE_FORMAT))

    # stdout carries CSV/JSON; nothing may leak there through the root logger
    logger.propagate = False
    return logger


class ProgressLogger:
    """tqdm bar plus per-item bookkeeping for long CLI operations.

    Each item (a sweep point, a verification check) is reported once as a
    success or a failure. Closing the tracker logs a one-line outcome, at
    WARNING level when anything failed.

    Example:
        >>> with ProgressLogger(total=len(points), desc="Sweep") as progress:
        ...     for point in points:
        ...         row = run_point(snr, base, point)
        ...         progress.log_success(point.label, f"mean {row.mean_bps:.0f} bit/s")
    """

    def __init__(
        self,
        total: int,
        desc: str = "Progress",
        verbose: bool = False,
        disable: bool = False,
    ) -> None:
        """Initialize the tracker.

        Args:
            total: Number of items that will be reported
            desc: Label of the bar and of the closing log line
            verbose: Log every successful item at INFO
            disable: Hide the bar (logging is unaffected)
        """
        self.total = total
        self.desc = desc
        self.verbose = verbose
        self.completed = 0
        self.failed_items: list[str] = []

        self._logger = logging.getLogger(f"{LOGGER_NAME}.progress")
        self._pbar = tqdm(
            total=total,
            desc=desc,
            unit="run",
            file=sys.stderr,
            disable=disable,
            leave=False,
        )
        self._closed = False

    @property
    def failed(self) -> int:
        return len(self.failed_items)

    def log_success(self, item: str, message: str = "") -> None:
        """Record a finished item.

        Args:
            item: Item label (e.g. "n_sic=4 moderate=on permute=off")
            message: Optional detail shown in verbose mode
        """
        self.completed += 1
        self._pbar.update()
        self._pbar.set_postfix_str(item, refresh=False)
        if self.verbose:
            self._logger.info("[OK] %s%s", item, f" - {message}" if message else "")

    def log_failure(self, item: str, error: str) -> None:
        """Record a failed item; always logged at ERROR."""
        self.failed_items.append(item)
        self._pbar.update()
        self._logger.error("[FAIL] %s - %s", item, error)

    def get_stats(self) -> dict[str, int]:
        """Total, completed, failed and remaining item counts."""
        return {
            "total": self.total,
            "completed": self.completed,
            "failed": self.failed,
            "remaining": self.total - self.completed - self.failed,
        }

    def close(self) -> None:
        """Close the bar and log the outcome (idempotent)."""
        if self._closed:
            return
        self._closed = True
        self._pbar.close()
        if self.failed_items:
            self._logger.warning(
                "%s: %d/%d failed (%s)",
                self.desc,
                self.failed,
                self.total,
                ", ".join(self.failed_items),
            )
        else:
            self._logger.info("%s: %d/%d done", self.desc, self.completed, self.total)

    def __enter__(self) -> "ProgressLogger":
        return self

    def __exit__(
        self,
        exc_type: Optional[type[BaseException]],
        exc_val: Optional[BaseException],
        exc_tb: object,
    ) -> None:
        self.close()

"""Utility modules for satnoma."""

from satnoma.utils.progress import ProgressLogger, configure_logging

__all__ = [
    "ProgressLogger",
    "configure_logging",
]

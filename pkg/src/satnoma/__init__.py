"""Satnoma - max-min fair uplink NOMA simulation for a LEO satellite pass."""

from satnoma.core.config import Scenario, SchedulerConfig, load_scenario, save_scenario
from satnoma.exceptions import (
    ConfigError,
    DomainError,
    ExportError,
    OracleSizeError,
    OrderError,
    OutOfPassError,
    SatnomaError,
    ValidationError,
)
from satnoma.linkbudget import SnrMatrix, build_snr_matrix
from satnoma.noma import ModerationResult, moderate_powers, optimal_sic_order, rates_for_order
from satnoma.scheduler import SimResult, run

__version__ = "0.1.0"

__all__ = [
    # Config
    "Scenario",
    "SchedulerConfig",
    "load_scenario",
    "save_scenario",
    # Link budget
    "SnrMatrix",
    "build_snr_matrix",
    # NOMA core
    "ModerationResult",
    "moderate_powers",
    "optimal_sic_order",
    "rates_for_order",
    # Scheduler
    "SimResult",
    "run",
    # Exceptions
    "SatnomaError",
    "ConfigError",
    "DomainError",
    "ExportError",
    "OracleSizeError",
    "OrderError",
    "OutOfPassError",
    "ValidationError",
]

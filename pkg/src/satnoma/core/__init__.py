"""Core infrastructure modules."""

from satnoma.core.config import (
    CoverageRegion,
    GainPattern,
    GroundTrack,
    LinkConfig,
    Scenario,
    SchedulerConfig,
    SimConfig,
    TieBreak,
    load_scenario,
    save_scenario,
)
from satnoma.core.rng import stream

__all__ = [
    "CoverageRegion",
    "GainPattern",
    "GroundTrack",
    "LinkConfig",
    "Scenario",
    "SchedulerConfig",
    "SimConfig",
    "TieBreak",
    "load_scenario",
    "save_scenario",
    "stream",
]

"""N_SIC sweeps: run the scheduler for every (n_sic, moderate, permute) combination.

Combinations are independent and run in a process pool; results are
collected in submission order so the output does not depend on which
worker finishes first.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Optional, Sequence

from satnoma import scheduler
from satnoma.core.config import SchedulerConfig
from satnoma.exceptions import ConfigError
from satnoma.linkbudget import SnrMatrix
from satnoma.utils.progress import ProgressLogger

logger = logging.getLogger(__name__)

THREADS_ENV = "SATNOMA_THREADS"
DEFAULT_N_SIC = (2, 3, 4, 5, 10, 20)


class Toggle(str, Enum):
    """Which values of a boolean sweep axis to run."""

    OFF = "off"
    ON = "on"
    BOTH = "both"

    @property
    def values(self) -> tuple[bool, ...]:
        return {Toggle.OFF: (False,), Toggle.ON: (True,), Toggle.BOTH: (False, True)}[self]


@dataclass(frozen=True)
class SweepPoint:
    """One scheduler configuration of a sweep."""

    n_sic: int
    moderate: bool
    permute: bool

    @property
    def label(self) -> str:
        return (
            f"n_sic={self.n_sic} moderate={'on' if self.moderate else 'off'} "
            f"permute={'on' if self.permute else 'off'}"
        )


@dataclass(frozen=True)
class SweepRow:
    """Per-user throughput statistics (bit/s) of one sweep point."""

    n_sic: int
    moderate: bool
    permute: bool
    min_bps: float
    mean_bps: float
    max_bps: float
    sum_bps: float

    @property
    def spread(self) -> float:
        """Relative fairness spread (max - min) / mean."""
        return (self.max_bps - self.min_bps) / self.mean_bps if self.mean_bps > 0 else 0.0


@dataclass(frozen=True)
class SweepResult:
    """All sweep rows, in sweep-point order, plus the full-SIC bound (bit/s)."""

    rows: list[SweepRow]
    sum_rate_bound: float

    def select(self, moderate: bool, permute: bool) -> list[SweepRow]:
        """Rows of one (moderate, permute) combination, by increasing n_sic."""
        rows = [r for r in self.rows if r.moderate == moderate and r.permute == permute]
        return sorted(rows, key=lambda r: r.n_sic)

    def to_summary(self, params: dict[str, Any]) -> dict[str, Any]:
        """Summary document: bound, parameters and per-row spread."""
        return {
            "sum_rate_bound": self.sum_rate_bound,
            "params": params,
            "rows": [
                {
                    "n_sic": r.n_sic,
                    "moderate": r.moderate,
                    "permute": r.permute,
                    "mean_bps": r.mean_bps,
                    "spread": r.spread,
                }
                for r in self.rows
            ],
        }


def parse_n_sic_list(text: str) -> list[int]:
    """Parse a comma-separated list of positive integers such as ``"2,3,4"``.

    Raises:
        ConfigError: If an entry is not a positive integer or the list is empty
    """
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = int(part)
        except ValueError as e:
            raise ConfigError(f"Invalid n_sic entry {part!r}", key="sim.n_sic", cause=e) from e
        if value < 1:
            raise ConfigError(f"n_sic must be >= 1, got {value}", key="sim.n_sic")
        values.append(value)
    if not values:
        raise ConfigError("Empty n_sic list", key="sim.n_sic")
    return values


def sweep_points(
    n_sic_values: Iterable[int],
    moderate: Toggle = Toggle.OFF,
    permute: Toggle = Toggle.OFF,
) -> list[SweepPoint]:
    """Cartesian product moderate x permute x n_sic, in that nesting order."""
    return [
        SweepPoint(n_sic=n, moderate=m, permute=p)
        for m in moderate.values
        for p in permute.values
        for n in n_sic_values
    ]


def resolve_workers(requested: Optional[int] = None, n_points: Optional[int] = None) -> int:
    """Number of worker processes for a sweep.

    ``requested`` wins over ``SATNOMA_THREADS``; 0 (or unset) means one per
    CPU. The result is capped by ``n_points``.

    Raises:
        ConfigError: If SATNOMA_THREADS is not a non-negative integer
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer", key=THREADS_ENV) from e
    if requested < 0:
        raise ConfigError(f"Worker count must be >= 0, got {requested}", key=THREADS_ENV)
    workers = requested or (os.cpu_count() or 1)
    if n_points is not None:
        workers = min(workers, max(n_points, 1))
    return workers


def run_point(snr: SnrMatrix, base: SchedulerConfig, point: SweepPoint) -> SweepRow:
    """Run the scheduler for one sweep point (process-pool entry point)."""
    cfg = base.model_copy(
        update={"n_sic": point.n_sic, "moderate": point.moderate, "permute_slots": point.permute}
    )
    stats = scheduler.run(snr, cfg, keep_decisions=False).stats()
    return SweepRow(
        n_sic=point.n_sic,
        moderate=point.moderate,
        permute=point.permute,
        min_bps=stats.min,
        mean_bps=stats.mean,
        max_bps=stats.max,
        sum_bps=stats.sum,
    )


def run_sweep(
    snr: SnrMatrix,
    base: SchedulerConfig,
    points: Sequence[SweepPoint],
    workers: Optional[int] = None,
    progress: bool = True,
    verbose: bool = False,
) -> SweepResult:
    """Run every sweep point against one SNR matrix.

    Args:
        snr: SNR matrix of one pass
        base: Scheduler settings shared by all points (seed, n_rep, ...)
        points: Combinations to run
        workers: Process count (None: SATNOMA_THREADS, 0: one per CPU)
        progress: Show a progress bar
        verbose: Log every finished point

    Returns:
        SweepResult with rows in ``points`` order
    """
    n_workers = resolve_workers(workers, len(points))
    rows: list[Optional[SweepRow]] = [None] * len(points)
    logger.info("Sweeping %d points on %d worker(s)", len(points), n_workers)

    with ProgressLogger(
        total=len(points), desc="Sweep", verbose=verbose, disable=not progress
    ) as tracker:
        if n_workers == 1:
            for i, point in enumerate(points):
                rows[i] = run_point(snr, base, point)
                tracker.log_success(point.label, f"mean {rows[i].mean_bps:.0f} bit/s")
        else:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                futures = {
                    pool.submit(run_point, snr, base, point): i for i, point in enumerate(points)
                }
                for future in as_completed(futures):
                    i = futures[future]
                    rows[i] = future.result()
                    tracker.log_success(points[i].label, f"mean {rows[i].mean_bps:.0f} bit/s")

    return SweepResult(
        rows=[r for r in rows if r is not None], sum_rate_bound=snr.sum_rate_bound()
    )

"""Multi-slot rate equalization.

In every slot the ``n_sic`` users with the smallest cumulative rate transmit;
the receiver decodes them strongest first (optionally after power
moderation) and their slot rates are added to the running totals. The pass
is repeated ``n_rep`` times with totals carried over.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt

from satnoma import noma
from satnoma.core.config import SchedulerConfig, TieBreak
from satnoma.core.rng import PERMUTATION_STREAM, TIE_BREAK_STREAM, stream
from satnoma.linkbudget import SnrMatrix

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IndexArray = npt.NDArray[np.intp]


@dataclass(frozen=True)
class SlotDecision:
    """What the receiver did in one slot.

    Attributes:
        slot_index: Column of the SNR matrix
        selected: Users allowed to transmit, in selection order
        sic_order: The same users in decoding order
        rho_used: SNRs used for decoding (moderated or raw), decoding order
        rates: Rate (bit/s/Hz) of each user of ``sic_order``
    """

    slot_index: int
    selected: IndexArray
    sic_order: IndexArray
    rho_used: FloatArray
    rates: FloatArray

    @property
    def min_rate(self) -> float:
        """Smallest rate in the slot (0 if nobody transmitted)."""
        return float(self.rates.min()) if self.rates.size else 0.0


@dataclass(frozen=True)
class ThroughputStats:
    """Per-user throughput summary (bit/s)."""

    min: float
    mean: float
    max: float
    sum: float

    @property
    def spread(self) -> float:
        """Relative fairness spread (max - min) / mean."""
        return (self.max - self.min) / self.mean if self.mean > 0 else 0.0


@dataclass(frozen=True)
class SimResult:
    """Outcome of a scheduler run.

    Attributes:
        cumulative: Per-user total spectral efficiency over all slots (bit/s/Hz)
        throughput: Per-user pass-averaged throughput (bit/s)
        sum_rate_bound: Full-SIC pass-averaged throughput ceiling (bit/s)
        n_slots: Slots per pass
        n_rep: Pass repetitions
        bandwidth: Bandwidth (Hz) used for the bit/s conversion
        per_slot: Slot decisions in processing order (empty if not kept)
    """

    cumulative: FloatArray
    throughput: FloatArray
    sum_rate_bound: float
    n_slots: int
    n_rep: int
    bandwidth: float
    per_slot: list[SlotDecision] = field(default_factory=list)

    def stats(self) -> ThroughputStats:
        """Min/mean/max/sum of the per-user throughputs."""
        return ThroughputStats(
            min=float(self.throughput.min()),
            mean=float(self.throughput.mean()),
            max=float(self.throughput.max()),
            sum=float(self.throughput.sum()),
        )


def select_users(
    cumulative: FloatArray,
    rho_slot: FloatArray,
    n_sic: int,
    tie_break: TieBreak = TieBreak.BY_INDEX,
    rng: Optional[np.random.Generator] = None,
) -> IndexArray:
    """Pick the ``n_sic`` eligible users with the smallest cumulative rate.

    Users with zero SNR in the slot are not eligible. If fewer than ``n_sic``
    users are eligible, all of them are returned.

    Args:
        cumulative: Per-user totals driving the selection
        rho_slot: Per-user SNRs of the slot
        n_sic: Users to select
        tie_break: Order among equal totals (lowest id, or seeded shuffle)
        rng: Generator for the random tie break

    Returns:
        User ids ordered by increasing total
    """
    cumulative = np.asarray(cumulative, dtype=float)
    rho_slot = np.asarray(rho_slot, dtype=float)
    if cumulative.shape != rho_slot.shape:
        raise ValueError(f"Shape mismatch: {cumulative.shape} vs {rho_slot.shape}")
    eligible = np.flatnonzero(rho_slot > 0.0)
    if tie_break is TieBreak.RANDOM:
        if rng is None:
            raise ValueError("Random tie break needs a generator")
        secondary = rng.permutation(eligible.size)
    else:
        secondary = eligible
    # lexsort: last key is primary
    order = np.lexsort((secondary, cumulative[eligible]))
    return eligible[order[:n_sic]]


def run_slot(
    user_ids: IndexArray,
    rho_selected: FloatArray,
    moderate: bool = False,
    slot_index: int = 0,
) -> SlotDecision:
    """Decode the selected users of one slot.

    Args:
        user_ids: Selected users
        rho_selected: Their SNRs (> 0), aligned with ``user_ids``
        moderate: Equalize rates by lowering SNRs
        slot_index: Slot being decoded
    """
    user_ids = np.asarray(user_ids, dtype=np.intp)
    rho_selected = np.asarray(rho_selected, dtype=float)
    if user_ids.size == 0:
        empty = np.empty(0)
        return SlotDecision(slot_index, user_ids, user_ids, empty, empty)

    order = noma.optimal_sic_order(rho_selected)
    rho_used = rho_selected[order]
    if moderate:
        rho_used = noma.moderate_powers(rho_used).rho_tilde
    return SlotDecision(
        slot_index=slot_index,
        selected=user_ids,
        sic_order=user_ids[order],
        rho_used=rho_used,
        rates=noma.rates_for_order(rho_used),
    )


def run(snr: SnrMatrix, cfg: SchedulerConfig, keep_decisions: bool = True) -> SimResult:
    """Run the scheduler over ``cfg.n_rep`` repetitions of the pass.

    Deterministic for a given (snr, cfg): slot permutations come from one
    stream per cycle and random tie breaks from a dedicated stream, all
    derived from ``cfg.seed``.

    Args:
        snr: SNR matrix of one pass
        cfg: Scheduler configuration
        keep_decisions: Record every SlotDecision in the result

    Returns:
        SimResult with totals, throughputs and the sum-rate bound
    """
    n_users, n_slots = snr.rho.shape
    totals = np.zeros(n_users)
    selection = np.zeros(n_users)
    tie_rng = stream(cfg.seed, TIE_BREAK_STREAM)
    decisions: list[SlotDecision] = []

    for cycle in range(cfg.n_rep):
        if cfg.reset_per_cycle:
            selection[:] = 0.0
        if cfg.permute_slots:
            slots = stream(cfg.seed, PERMUTATION_STREAM, cycle).permutation(n_slots)
        else:
            slots = np.arange(n_slots)

        for t in slots:
            rho_t = snr.rho[:, t]
            chosen = select_users(selection, rho_t, cfg.n_sic, cfg.tie_break, tie_rng)
            decision = run_slot(chosen, rho_t[chosen], cfg.moderate, int(t))
            totals[decision.sic_order] += decision.rates
            selection[decision.sic_order] += decision.rates
            if keep_decisions:
                decisions.append(decision)

        logger.debug("Cycle %d/%d done, min total %.4f", cycle + 1, cfg.n_rep, totals.min())

    throughput = totals * snr.bandwidth / (n_slots * cfg.n_rep)
    result = SimResult(
        cumulative=totals,
        throughput=throughput,
        sum_rate_bound=snr.sum_rate_bound(),
        n_slots=n_slots,
        n_rep=cfg.n_rep,
        bandwidth=snr.bandwidth,
        per_slot=decisions,
    )
    stats = result.stats()
    logger.info(
        "n_sic=%d moderate=%s permute=%s: mean %.0f bit/s, spread %.4f",
        cfg.n_sic,
        cfg.moderate,
        cfg.permute_slots,
        stats.mean,
        stats.spread,
    )
    return result

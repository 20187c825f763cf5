"""Brute-force verifiers for the SIC-order and power-moderation results.

The reference rate evaluator here sums interference directly for every user
and shares no code with ``satnoma.noma``; the checks compare the optimized
paths against it.
"""

import itertools
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, model_validator

from satnoma import noma
from satnoma.core.rng import ORACLE_STREAM, stream
from satnoma.exceptions import DomainError, OracleSizeError, OrderError

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_USERS = 8
ORDER_TOL = 1e-12
MODERATION_TOL = 1e-9
PHI_RTOL = 1e-9

# Failing inputs echoed per report
MAX_REPORTED = 20

# Sub-stream keys under ORACLE_STREAM
_AGREEMENT = 0
_SWAP = 1
_MODERATION = 2

OrderPolicy = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.intp]]


class VerifyReport(BaseModel):
    """Outcome of one verification check.

    Attributes:
        name: Check identifier
        trials: Inputs examined
        failures: Inputs violating the property
        worst_gap: Most negative margin found (0 when nothing was tested)
        failing_inputs: Up to MAX_REPORTED offending inputs
    """

    name: str
    trials: int = Field(default=0, ge=0)
    failures: int = Field(default=0, ge=0)
    worst_gap: float = 0.0
    failing_inputs: list[list[float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_consistency(self) -> "VerifyReport":
        """Failures and failing inputs go together."""
        if (self.failures == 0) != (len(self.failing_inputs) == 0):
            raise ValueError("failures and failing_inputs disagree")
        return self

    @property
    def passed(self) -> bool:
        """True when no input violated the property."""
        return self.failures == 0


class _Tally:
    """Accumulates margins into a VerifyReport."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.trials = 0
        self.failures = 0
        self.worst_gap = 0.0
        self.failing: list[list[float]] = []

    def record_many(
        self, gaps: npt.NDArray[np.float64], tol: float, inputs: npt.NDArray[np.float64]
    ) -> None:
        if gaps.size == 0:
            return
        worst = float(gaps.min())
        if self.trials == 0 or worst < self.worst_gap:
            self.worst_gap = worst
        self.trials += int(gaps.size)
        bad = np.flatnonzero(gaps < -tol)
        self.failures += int(bad.size)
        for idx in bad[: max(MAX_REPORTED - len(self.failing), 0)]:
            self.failing.append([float(x) for x in inputs[idx]])

    def record(self, gap: float, tol: float, inputs: Sequence[float]) -> None:
        self.record_many(np.array([gap]), tol, np.array([inputs], dtype=float))

    def report(self) -> VerifyReport:
        return VerifyReport(
            name=self.name,
            trials=self.trials,
            failures=self.failures,
            worst_gap=self.worst_gap,
            failing_inputs=self.failing,
        )


def reference_rates(seq: Sequence[float]) -> list[float]:
    """SIC rates of ``seq`` in the given order, interference summed per user."""
    values = [float(x) for x in seq]
    rates = []
    for i, rho in enumerate(values):
        interference = sum(values[i + 1 :])
        rates.append(math.log2(1.0 + rho / (1.0 + interference)))
    return rates


def reference_min_rate(seq: Sequence[float]) -> float:
    """Smallest reference rate of ``seq``."""
    return min(reference_rates(seq))


def _batch_min_rates(rows: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Reference min rate of every row of a (samples, N) array."""
    n = rows.shape[1]
    rates = np.empty_like(rows)
    interference = np.zeros(rows.shape[0])
    for i in range(n - 1, -1, -1):
        rates[:, i] = np.log2(1.0 + rows[:, i] / (1.0 + interference))
        interference = interference + rows[:, i]
    return rates.min(axis=1)


def _log_uniform(rng: np.random.Generator, size: int) -> npt.NDArray[np.float64]:
    """SNRs log-uniform in [0.01, 100]."""
    return 10.0 ** rng.uniform(-2.0, 2.0, size)


def exhaustive_max_min(rho: Sequence[float]) -> tuple[tuple[int, ...], float]:
    """Best decoding order by trying all of them.

    Returns:
        (order, min rate) of the first order reaching the largest min rate

    Raises:
        OracleSizeError: If more than MAX_EXHAUSTIVE_USERS users
    """
    values = [float(x) for x in rho]
    if len(values) > MAX_EXHAUSTIVE_USERS:
        raise OracleSizeError(
            f"Exhaustive search limited to {MAX_EXHAUSTIVE_USERS} users, got {len(values)}"
        )
    best_order: tuple[int, ...] = tuple(range(len(values)))
    best = -math.inf
    for perm in itertools.permutations(range(len(values))):
        value = reference_min_rate([values[i] for i in perm])
        if value > best:
            best, best_order = value, perm
    return best_order, best


def check_sic_order_agreement(
    trials: int,
    max_users: int,
    seed: int = 0,
    order_policy: Optional[OrderPolicy] = None,
) -> VerifyReport:
    """Compare an ordering policy against exhaustive search on random vectors.

    Args:
        trials: Random vectors to test
        max_users: Largest vector length (<= MAX_EXHAUSTIVE_USERS)
        seed: Seed of the trial streams
        order_policy: Policy under test, ``noma.optimal_sic_order`` by default
    """
    if max_users > MAX_EXHAUSTIVE_USERS:
        raise OracleSizeError(f"max_users {max_users} > {MAX_EXHAUSTIVE_USERS}")
    policy = order_policy or noma.optimal_sic_order
    tally = _Tally("sic_order_agreement")
    for trial in range(trials):
        rng = stream(seed, ORACLE_STREAM, _AGREEMENT, trial)
        rho = _log_uniform(rng, int(rng.integers(1, max_users + 1)))
        order = np.asarray(policy(rho))
        _, best = exhaustive_max_min(rho)
        tally.record(reference_min_rate(rho[order]) - best, ORDER_TOL, rho)
    return tally.report()


def check_swap_monotonicity(trials: int, max_users: int, seed: int = 0) -> VerifyReport:
    """Moving a stronger user ahead of a weaker one never lowers the min rate."""
    tally = _Tally("swap_monotonicity")
    for trial in range(trials):
        rng = stream(seed, ORACLE_STREAM, _SWAP, trial)
        n = int(rng.integers(2, max(max_users, 2) + 1))
        rho = _log_uniform(rng, n)
        a, b = sorted(int(i) for i in rng.choice(n, size=2, replace=False))
        if rho[a] > rho[b]:
            rho[a], rho[b] = rho[b], rho[a]
        swapped = rho.copy()
        swapped[a], swapped[b] = rho[b], rho[a]
        tally.record(reference_min_rate(swapped) - reference_min_rate(rho), ORDER_TOL, rho)
    return tally.report()


def probe_moderation_optimality(
    rho_sorted: Sequence[float],
    samples: int,
    rng: np.random.Generator,
) -> VerifyReport:
    """Search for a feasible SNR vector beating the moderated rate.

    Draws ``samples`` vectors with 0 < rho'_n <= rho_n, sorts each
    nonincreasingly and reports any whose min rate exceeds R-tilde.

    Raises:
        OrderError: If ``rho_sorted`` is not nonincreasing
        DomainError: If any entry is not positive
    """
    rho = np.asarray(rho_sorted, dtype=float)
    if np.any(rho <= 0.0):
        raise DomainError(f"Probing needs positive SNRs: {rho}")
    if np.any(np.diff(rho) > 0.0):
        raise OrderError(f"Probing needs nonincreasing SNRs: {rho}")
    r_tilde = noma.moderate_powers(rho).r_tilde

    tally = _Tally("moderation_probe")
    chunk = 10_000
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        # uniform on (0, rho_n]
        probes = (1.0 - rng.random((size, rho.size))) * rho
        probes = np.sort(probes, axis=1)[:, ::-1]
        tally.record_many(r_tilde - _batch_min_rates(probes), MODERATION_TOL, probes)
        done += size
    return tally.report()


def check_moderation(
    vectors: int,
    max_users: int,
    samples: int,
    seed: int = 0,
) -> VerifyReport:
    """Dominance, equalization and optimality of power moderation.

    For each random nonincreasing vector: moderated SNRs stay below the
    bounds, all moderated rates equal R-tilde, R-tilde is no worse than the
    unmoderated min rate, and random feasible probes never beat it.
    """
    tally = _Tally("moderation")
    for trial in range(vectors):
        rng = stream(seed, ORACLE_STREAM, _MODERATION, trial)
        rho = np.sort(_log_uniform(rng, int(rng.integers(1, max_users + 1))))[::-1]
        result = noma.moderate_powers(rho)
        rates = reference_rates(result.rho_tilde)
        margins = [
            float(np.min((rho - result.rho_tilde) / rho)),
            -max(abs(r - result.r_tilde) for r in rates),
            result.r_tilde - reference_min_rate(rho),
        ]
        if samples:
            probe = probe_moderation_optimality(rho, samples, rng)
            margins.append(probe.worst_gap)
        tally.record(min(margins), MODERATION_TOL, rho)
    return tally.report()


def check_phi_identity(
    max_users: int = 32,
    r_values: Optional[Sequence[float]] = None,
) -> VerifyReport:
    """Telescoping sum and rate equalization of phi on an (N, R) grid.

    Checks sum_n phi_n(R) = 2^(N R) - 1 and that the SNRs phi_n(R) decode at
    rate R for every user, to relative tolerance PHI_RTOL.
    """
    grid = np.linspace(0.25, 4.0, 16) if r_values is None else np.asarray(r_values, dtype=float)
    tally = _Tally("phi_identity")
    for n in range(1, max_users + 1):
        k = np.arange(n - 1, -1, -1)
        for r in grid:
            values = noma.phi(k, float(r))
            expected = math.expm1(n * float(r) * math.log(2.0))
            sum_err = abs(float(values.sum()) - expected) / expected
            rate_err = max(abs(x - r) for x in reference_rates(values)) / r
            tally.record(-max(sum_err, rate_err), PHI_RTOL, [float(n), float(r)])
    return tally.report()

"""Single-slot uplink NOMA rate mathematics.

SNR vectors are read in decoding order: index 0 is decoded first and sees
every later user as interference. Rates are spectral efficiencies in
bit/s/Hz; conversion to bit/s happens at reporting time.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from satnoma.exceptions import DomainError, OrderError

SnrVector = npt.NDArray[np.float64]
RateVector = npt.NDArray[np.float64]

LN2 = math.log(2.0)

# Bisection stops once the bracket is this small relative to its upper end
ROOT_RTOL = 1e-12
ROOT_MAX_ITER = 200
ROUNDING_RTOL = 8 * np.finfo(float).eps


def as_snr_vector(rho: Union[Sequence[float], SnrVector]) -> SnrVector:
    """Validate and convert to a 1-D float array.

    Raises:
        DomainError: If empty, not 1-D, non-finite or negative
    """
    arr = np.asarray(rho, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"SNR vector must be 1-D and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError(f"SNR entries must be finite and >= 0: {arr}")
    return arr


def rates_for_order(rho: Union[Sequence[float], SnrVector]) -> RateVector:
    """SIC rates log2(1 + rho_n / (1 + sum_{m>n} rho_m)) in the given order."""
    rho = as_snr_vector(rho)
    # interference seen by each user: running sum from the right, excluding itself
    tail = np.cumsum(rho[::-1])[::-1]
    interference = np.append(tail[1:], 0.0)
    return np.log1p(rho / (1.0 + interference)) / LN2


def sum_rate(rho: Union[Sequence[float], SnrVector]) -> float:
    """Sum rate log2(1 + sum rho), the same for every decoding order."""
    return float(np.log1p(as_snr_vector(rho).sum()) / LN2)


def min_rate(rho: Union[Sequence[float], SnrVector]) -> float:
    """Smallest SIC rate in the given order."""
    return float(rates_for_order(rho).min())


def optimal_sic_order(rho: Union[Sequence[float], SnrVector]) -> npt.NDArray[np.intp]:
    """Decoding order maximizing the minimum rate: strongest user first.

    Returns:
        Indices sorting ``rho`` nonincreasingly; ties keep their input order
    """
    return np.argsort(-as_snr_vector(rho), kind="stable")


def phi(
    k: Union[int, npt.NDArray[np.int_]], r: Union[float, npt.NDArray[np.float64]]
) -> npt.NDArray[np.float64]:
    """SNR giving rate ``r`` to a user decoded ahead of ``k`` users at rate ``r``.

    phi = 2^((k+1) r) - 2^(k r), written as 2^(k r) (2^r - 1).
    """
    k_arr = np.asarray(k, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    return np.exp2(k_arr * r_arr) * np.expm1(r_arr * LN2)


def _phi_roots(k: npt.NDArray[np.float64], rho: SnrVector) -> RateVector:
    """Solve phi(k, R) = rho elementwise by bisection.

    Works on g(R) = k R + log2(2^R - 1) - log2(rho), increasing on
    (0, log2(1 + rho)] and nonnegative at the upper end. Users with no
    interferers (k = 0) take the closed form log2(1 + rho).
    """
    hi = np.log1p(rho) / LN2
    lo = np.zeros_like(hi)
    closed = k == 0
    target = np.log2(rho)
    active = ~closed
    for _ in range(ROOT_MAX_ITER):
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        # no representable midpoint left between the bounds
        stalled = (mid <= lo) | (mid >= hi)
        below = k * mid + np.log2(np.expm1(mid * LN2)) - target < 0.0
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
        active &= ~stalled & (hi - lo > ROOT_RTOL * hi)
    # lower bound: phi(k, lo) never exceeds rho
    roots = lo.copy()
    roots[closed] = hi[closed]
    return roots


def solve_phi_root(n: int, n_users: int, rho_n: float) -> float:
    """Rate at which user ``n`` (1-based decoding position) of ``n_users`` hits ``rho_n``.

    Raises:
        DomainError: If rho_n <= 0 or n is outside 1..n_users
    """
    if not 1 <= n <= n_users:
        raise DomainError(f"Decoding position {n} outside 1..{n_users}")
    if not rho_n > 0.0 or not math.isfinite(rho_n):
        raise DomainError(f"phi root needs a positive finite SNR, got {rho_n}")
    return float(_phi_roots(np.array([n_users - n], dtype=float), np.array([rho_n]))[0])


def solve_phi_roots(rho_sorted: Union[Sequence[float], SnrVector]) -> RateVector:
    """All per-user roots for an SNR vector in decoding order.

    Raises:
        DomainError: If any entry is zero
    """
    rho = as_snr_vector(rho_sorted)
    if np.any(rho <= 0.0):
        raise DomainError("Silent users (rho = 0) must be removed before moderation")
    k = np.arange(rho.size - 1, -1, -1, dtype=float)
    return _phi_roots(k, rho)


@dataclass(frozen=True)
class ModerationResult:
    """Outcome of equalizing rates by lowering SNRs.

    Attributes:
        r_tilde: Common rate of all users after moderation (bit/s/Hz)
        rho_tilde: Moderated SNRs, in the same decoding order
        per_user_roots: Rate each user could sustain on its own bound
        binding_index: 0-based position attaining the minimum root
        power_scale: rho_tilde / rho, the transmit power reduction factors
    """

    r_tilde: float
    rho_tilde: SnrVector
    per_user_roots: RateVector
    binding_index: int
    power_scale: npt.NDArray[np.float64]


def moderate_powers(rho: Union[Sequence[float], SnrVector]) -> ModerationResult:
    """Lower SNRs so every user decodes at the same, max-min optimal rate.

    Args:
        rho: Positive SNR upper bounds in nonincreasing (decoding) order

    Raises:
        OrderError: If ``rho`` is not nonincreasing
        DomainError: If any entry is zero
    """
    rho = as_snr_vector(rho)
    if np.any(np.diff(rho) > 0.0):
        raise OrderError(f"SNRs must be nonincreasing for moderation: {rho}")
    roots = solve_phi_roots(rho)
    nu = int(np.argmin(roots))
    r_tilde = float(roots[nu])
    k = np.arange(rho.size - 1, -1, -1, dtype=float)
    rho_tilde = phi(k, r_tilde)
    # roots are lower bracket ends, so phi(k, r_tilde) <= rho up to rounding;
    # anything above ROUNDING_RTOL is left for the oracle to report
    rounded_over = (rho_tilde > rho) & (rho_tilde <= rho * (1.0 + ROUNDING_RTOL))
    rho_tilde = np.where(rounded_over, rho, rho_tilde)
    return ModerationResult(
        r_tilde=r_tilde,
        rho_tilde=rho_tilde,
        per_user_roots=roots,
        binding_index=nu,
        power_scale=rho_tilde / rho,
    )

"""Uplink link budget: satellite antenna gain, Friis received power, noise and SNR.

``build_snr_matrix`` turns a ``Scenario`` into the per-user, per-slot linear
SNR matrix that drives the scheduler.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import numpy.typing as npt

from satnoma.core.config import GainPattern, LinkConfig, Scenario
from satnoma.exceptions import DomainError, ValidationError
from satnoma.geometry import (
    central_angle_rad,
    nadir_track,
    off_axis_angle,
    slant_range,
    slot_edges,
    slot_midpoints,
    user_grid,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, npt.NDArray[np.float64]]
FloatArray = npt.NDArray[np.float64]


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    """Convert dB to a linear power ratio."""
    out = 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)
    return float(out) if np.ndim(out) == 0 else out


def linear_to_db(value: ArrayLike) -> ArrayLike:
    """Convert a linear power ratio to dB."""
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(np.asarray(value, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def watts_to_dbm(value: ArrayLike) -> ArrayLike:
    """Convert watts to dBm."""
    return linear_to_db(np.asarray(value, dtype=float) * 1e3)


def gain_dbi(pattern: GainPattern, psi: ArrayLike) -> ArrayLike:
    """Satellite antenna gain (dBi) at off-axis angle ``psi`` (degrees).

    Six branches, first match wins: parabolic main lobe up to a*psi_b, two
    near-in side-lobe plateaus up to b*psi_b, a -25 log10(psi) envelope up to
    Y, the far-out level below 90 deg and the back lobe beyond.

    Raises:
        DomainError: If any angle lies outside [0, 180]
    """
    psi_arr = np.asarray(psi, dtype=float)
    if np.any(psi_arr < 0.0) or np.any(psi_arr > 180.0) or np.any(np.isnan(psi_arr)):
        raise DomainError(f"Off-axis angle outside [0, 180] deg: {psi}")

    p = pattern
    plateau = p.g_max + p.l_l
    with np.errstate(divide="ignore"):
        envelope = p.x_level - 25.0 * np.log10(psi_arr)
    gain = np.select(
        [
            psi_arr <= p.a * p.psi_b,
            psi_arr <= (p.b / 2.0) * p.psi_b,
            psi_arr <= p.b * p.psi_b,
            psi_arr <= p.y_angle,
            psi_arr < 90.0,
        ],
        [
            p.g_max - 3.0 * (psi_arr / p.psi_b) ** p.alpha,
            plateau - 20.0 * math.log10(p.z),
            plateau,
            envelope,
            p.l_f,
        ],
        default=p.l_b,
    )
    return float(gain) if np.ndim(gain) == 0 else gain


def free_space_loss_db(link: LinkConfig, d_km: ArrayLike) -> ArrayLike:
    """Free-space path loss (dB) over ``d_km`` kilometres."""
    d_m = np.asarray(d_km, dtype=float) * 1e3
    return linear_to_db((4.0 * math.pi * d_m / link.wavelength) ** 2)


def received_power(
    link: LinkConfig, pattern: GainPattern, psi: ArrayLike, d_km: ArrayLike
) -> ArrayLike:
    """Friis received power (W) at the satellite.

    Raises:
        DomainError: If any distance is not positive
    """
    d_m = np.asarray(d_km, dtype=float) * 1e3
    if np.any(d_m <= 0.0):
        raise DomainError(f"Distance must be positive, got {d_km}")
    gains = db_to_linear(link.g_term + np.asarray(gain_dbi(pattern, psi)))
    p_rx = gains * (link.wavelength / (4.0 * math.pi * d_m)) ** 2 * link.p_tx
    return float(p_rx) if np.ndim(p_rx) == 0 else p_rx


def noise_power(link: LinkConfig) -> float:
    """Thermal noise power k * T0 * B (W)."""
    return link.boltzmann * link.temperature * link.bandwidth


def snr_linear(
    link: LinkConfig, pattern: GainPattern, psi: ArrayLike, d_km: ArrayLike
) -> ArrayLike:
    """Received SNR as a linear ratio."""
    snr = np.asarray(received_power(link, pattern, psi, d_km)) / noise_power(link)
    return float(snr) if np.ndim(snr) == 0 else snr


@dataclass(frozen=True)
class SnrMatrix:
    """Linear SNR of every user in every slot.

    Attributes:
        rho: N x T array, rho[n, t] >= 0
        slot_times: Time (s) each column was evaluated at
        slot_duration: Slot length (s)
        bandwidth: Receiver bandwidth (Hz) used to convert rates to bit/s
        user_lats: User latitudes (degrees), if known
        user_lons: User longitudes (degrees), if known
    """

    rho: FloatArray
    slot_times: FloatArray
    slot_duration: float
    bandwidth: float
    user_lats: Optional[FloatArray] = None
    user_lons: Optional[FloatArray] = None

    def __post_init__(self) -> None:
        if self.rho.ndim != 2:
            raise DomainError(f"SNR matrix must be 2-D, got shape {self.rho.shape}")
        if not np.all(np.isfinite(self.rho)) or np.any(self.rho < 0.0):
            raise DomainError("SNR matrix entries must be finite and >= 0")
        if self.slot_times.shape != (self.n_slots,):
            raise DomainError(
                f"{self.slot_times.shape[0]} slot times for {self.n_slots} slots"
            )
        for coords in (self.user_lats, self.user_lons):
            if coords is not None and coords.shape != (self.n_users,):
                raise DomainError(f"{coords.shape[0]} user positions for {self.n_users} users")

    @property
    def n_users(self) -> int:
        """Number of users (rows)."""
        return int(self.rho.shape[0])

    @property
    def n_slots(self) -> int:
        """Number of slots (columns)."""
        return int(self.rho.shape[1])

    def rho_db(self) -> FloatArray:
        """SNR matrix in dB."""
        return np.asarray(linear_to_db(self.rho))

    def sum_rate_bound(self) -> float:
        """Pass-averaged full-SIC throughput (bit/s): mean_t log2(1 + sum_n rho) * B."""
        per_slot = np.log1p(self.rho.sum(axis=0)) / math.log(2.0)
        return float(per_slot.mean() * self.bandwidth)


def _snr_at(
    scenario: Scenario, lats: FloatArray, lons: FloatArray, times: FloatArray
) -> FloatArray:
    track = scenario.track
    nadir_lats, nadir_lons = nadir_track(track, times)
    gamma = central_angle_rad(
        nadir_lats[np.newaxis, :],
        nadir_lons[np.newaxis, :],
        lats[:, np.newaxis],
        lons[:, np.newaxis],
    )
    d = slant_range(gamma, track.altitude, track.earth_radius)
    psi = off_axis_angle(gamma, d, track.earth_radius)
    return np.asarray(snr_linear(scenario.link, scenario.gain, psi, d))


def build_snr_matrix(
    scenario: Scenario,
    users: Optional[tuple[FloatArray, FloatArray]] = None,
) -> SnrMatrix:
    """Evaluate every user's SNR at every slot midpoint of the pass.

    Args:
        scenario: Validated scenario
        users: Optional (lats, lons) overriding the scenario's user grid

    Returns:
        SnrMatrix of shape (n_users, n_slots)
    """
    if users is None:
        lats, lons = user_grid(scenario.region, scenario.sim.grid_rows, scenario.sim.grid_cols)
    else:
        lats, lons = (np.asarray(c, dtype=float) for c in users)
    n_slots = scenario.sim.n_slots
    times = slot_midpoints(scenario.track, n_slots)
    rho = _snr_at(scenario, lats, lons, times)
    logger.debug(
        "Built %dx%d SNR matrix, %.2f..%.2f dB",
        rho.shape[0],
        rho.shape[1],
        float(linear_to_db(rho.min())),
        float(linear_to_db(rho.max())),
    )
    return SnrMatrix(
        rho=rho,
        slot_times=times,
        slot_duration=scenario.track.passage_duration / n_slots,
        bandwidth=scenario.link.bandwidth,
        user_lats=lats,
        user_lons=lons,
    )


def intra_slot_variation_db(
    scenario: Scenario,
    users: Optional[tuple[FloatArray, FloatArray]] = None,
) -> FloatArray:
    """Per-user worst |SNR(slot start) - SNR(slot end)| in dB over the pass."""
    if users is None:
        lats, lons = user_grid(scenario.region, scenario.sim.grid_rows, scenario.sim.grid_cols)
    else:
        lats, lons = (np.asarray(c, dtype=float) for c in users)
    edges = slot_edges(scenario.track, scenario.sim.n_slots)
    rho_db = np.asarray(linear_to_db(_snr_at(scenario, lats, lons, edges)))
    return np.abs(np.diff(rho_db, axis=1)).max(axis=1)


def read_snr_csv(path: Path, scenario: Scenario) -> SnrMatrix:
    """Re-import an SNR matrix exported by ``satnoma snr``.

    User positions are taken from the scenario grid when the user counts
    agree and left unknown otherwise.

    Raises:
        ValidationError: If the file is not a valid SNR export
    """
    from satnoma.validation.csv import create_snr_validator

    frame = create_snr_validator().load(Path(path))
    user_cols = [c for c in frame.columns if c.startswith("user_")]
    rho_db = frame[user_cols].to_numpy(dtype=float).T
    times = frame["t_seconds"].to_numpy(dtype=float)
    if times.size > 1:
        slot_duration = float(np.mean(np.diff(times)))
    else:
        slot_duration = 2.0 * float(times[0])
    if slot_duration <= 0.0:
        raise ValidationError(f"Slot times in {path} are not increasing")

    lats: Optional[FloatArray] = None
    lons: Optional[FloatArray] = None
    if len(user_cols) == scenario.n_users:
        lats, lons = user_grid(scenario.region, scenario.sim.grid_rows, scenario.sim.grid_cols)
    else:
        logger.warning(
            "%s has %d users, scenario grid has %d; user positions unknown",
            path,
            len(user_cols),
            scenario.n_users,
        )
    return SnrMatrix(
        rho=np.asarray(db_to_linear(rho_db)),
        slot_times=times,
        slot_duration=slot_duration,
        bandwidth=scenario.link.bandwidth,
        user_lats=lats,
        user_lons=lons,
    )

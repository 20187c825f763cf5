"""Pass geometry: nadir track, central angle, slant range and off-axis angle.

Angles cross the API in degrees except the central angle, which is returned
in radians because it only feeds the slant-range and off-axis formulas. All
functions below the scalar ``GeoPoint`` helpers accept numpy arrays and
broadcast elementwise.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from satnoma.core.config import EARTH_RADIUS_KM, CoverageRegion, GroundTrack
from satnoma.exceptions import DomainError, OutOfPassError

ArrayLike = Union[float, npt.NDArray[np.float64]]

# Slack on the pass boundaries for times computed by floating arithmetic
_PASS_EPS = 1e-9


def wrap_longitude(lon: ArrayLike) -> ArrayLike:
    """Normalize longitudes to [-180, 180)."""
    wrapped = (np.asarray(lon, dtype=float) + 180.0) % 360.0 - 180.0
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


@dataclass(frozen=True)
class GeoPoint:
    """A point on the spherical Earth, in degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not abs(self.lat) <= 90.0:
            raise DomainError(f"Latitude {self.lat} outside [-90, 90]")
        object.__setattr__(self, "lon", wrap_longitude(self.lon))


def _check_pass_times(track: GroundTrack, t: npt.NDArray[np.float64]) -> None:
    duration = track.passage_duration
    if np.any(t < -_PASS_EPS) or np.any(t > duration + _PASS_EPS):
        raise OutOfPassError(f"Time outside the pass [0, {duration:.6f}] s: {t}")


def nadir_track(
    track: GroundTrack, t: npt.NDArray[np.float64]
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Vectorized nadir latitudes and longitudes at times ``t``.

    Raises:
        OutOfPassError: If any time lies outside [0, passage_duration]
    """
    t = np.asarray(t, dtype=float)
    _check_pass_times(track, t)
    offset = (t - track.passage_duration / 2.0) * track.angular_speed
    incl = math.radians(track.inclination)
    lats = track.center_lat + offset * math.cos(incl)
    lons = wrap_longitude(track.center_lon + offset * math.sin(incl))
    return lats, np.asarray(lons, dtype=float)


def nadir_at(track: GroundTrack, t: float) -> GeoPoint:
    """Sub-satellite point ``t`` seconds after the nadir enters the region.

    The track is a straight line in (lat, lon) through the region center,
    reached at mid-pass.

    Raises:
        OutOfPassError: If ``t`` lies outside [0, passage_duration]
    """
    lats, lons = nadir_track(track, np.array([t], dtype=float))
    return GeoPoint(float(lats[0]), float(lons[0]))


def central_angle_rad(
    lat1: ArrayLike, lon1: ArrayLike, lat2: ArrayLike, lon2: ArrayLike
) -> ArrayLike:
    """Great-circle angle (radians) between points given in degrees (haversine)."""
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dphi = phi2 - phi1
    dlam = np.radians(np.asarray(lon2, dtype=float) - np.asarray(lon1, dtype=float))
    h = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlam / 2.0) ** 2
    h = np.clip(h, 0.0, 1.0)
    gamma = 2.0 * np.arctan2(np.sqrt(h), np.sqrt(1.0 - h))
    return float(gamma) if np.ndim(gamma) == 0 else gamma


def central_angle(nadir: GeoPoint, user: GeoPoint) -> float:
    """Central Earth angle (radians) between the nadir and a user."""
    return float(central_angle_rad(nadir.lat, nadir.lon, user.lat, user.lon))


def slant_range(gamma: ArrayLike, h: float, earth_radius: float = EARTH_RADIUS_KM) -> ArrayLike:
    """Satellite-to-user distance (km) for central angle ``gamma`` (radians).

    Law of cosines written as h^2 + 4 R (R+h) sin^2(gamma/2), which is exact
    at the nadir.
    """
    r_sat = earth_radius + h
    d = np.sqrt(h * h + 4.0 * earth_radius * r_sat * np.sin(np.asarray(gamma) / 2.0) ** 2)
    return float(d) if np.ndim(d) == 0 else d


def off_axis_angle(
    gamma: ArrayLike, d: ArrayLike, earth_radius: float = EARTH_RADIUS_KM
) -> ArrayLike:
    """Angle (degrees) at the satellite between the nadir direction and the user."""
    ratio = np.clip(earth_radius * np.sin(gamma) / np.asarray(d, dtype=float), -1.0, 1.0)
    psi = np.degrees(np.arcsin(ratio))
    return float(psi) if np.ndim(psi) == 0 else psi


def central_angle_for_off_axis(
    psi: float, h: float, earth_radius: float = EARTH_RADIUS_KM
) -> float:
    """Central angle (radians) seen at off-axis angle ``psi`` (degrees).

    Inverse of ``off_axis_angle(gamma, slant_range(gamma))`` on the near side
    of the horizon, from the sine rule in the Earth-center/satellite/user
    triangle.

    Raises:
        DomainError: If the direction misses the Earth
    """
    psi_rad = math.radians(psi)
    s = (earth_radius + h) / earth_radius * math.sin(psi_rad)
    if s > 1.0:
        raise DomainError(f"Off-axis angle {psi} deg misses the Earth from {h} km")
    return math.asin(s) - psi_rad


def slot_midpoints(track: GroundTrack, n_slots: int) -> npt.NDArray[np.float64]:
    """Slot-center times t_k = (k - 1/2) * passage / T, k = 1..T."""
    if n_slots < 1:
        raise DomainError(f"n_slots must be >= 1, got {n_slots}")
    return (np.arange(1, n_slots + 1) - 0.5) * track.passage_duration / n_slots


def slot_edges(track: GroundTrack, n_slots: int) -> npt.NDArray[np.float64]:
    """Slot boundary times 0, passage/T, ..., passage."""
    return np.linspace(0.0, track.passage_duration, n_slots + 1)


def _axis(center: float, half_width: float, count: int) -> npt.NDArray[np.float64]:
    if count == 1:
        return np.array([center])
    return np.linspace(center - half_width, center + half_width, count)


def user_grid(
    region: CoverageRegion, rows: int, cols: int
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Uniform user grid over the region, endpoints included.

    Users are numbered row-major: latitude outer, longitude inner. A single
    row or column sits on the region center line.

    Returns:
        (lats, lons), each of length rows * cols
    """
    lat_axis = _axis(region.center_lat, region.delta_lat, rows)
    lon_axis = _axis(region.center_lon, region.delta_lon, cols)
    lats, lons = np.meshgrid(lat_axis, lon_axis, indexing="ij")
    return lats.ravel(), np.asarray(wrap_longitude(lons.ravel()), dtype=float)


def probe_points(region: CoverageRegion) -> list[GeoPoint]:
    """The nine probe users (center +/- delta on each axis), latitude outer."""
    return [
        GeoPoint(region.center_lat + i * region.delta_lat, region.center_lon + j * region.delta_lon)
        for i in (-1, 0, 1)
        for j in (-1, 0, 1)
    ]

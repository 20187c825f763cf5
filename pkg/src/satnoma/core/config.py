"""Scenario configuration using Pydantic.

A scenario document is a JSON object with one section per concern::

    {
      "track": {"center_lat": 0.0, "inclination": 53.0, ...},
      "gain":  {"g_max": 36.0, "psi_b": 1.75, ...},
      "link":  {"p_tx": 10.0, "freq": 1.4e10, ...},
      "sim":   {"grid_rows": 16, "n_slots": 100, "n_sic": 4, ...}
    }

Keys are addressed in dotted form (``gain.psi_b``) in error messages. Every
key is optional and defaults to the 550 km / 53 deg Ku-band reference pass.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError
from pydantic import model_validator

from satnoma.exceptions import ConfigError

EARTH_RADIUS_KM = 6371.0
SPEED_OF_LIGHT = 2.998e8
BOLTZMANN = 1.38e-23

# One orbit in 90 minutes
ORBITAL_ANGULAR_SPEED = 360.0 / (90 * 60)

_SECTION_CONFIG = {"frozen": True, "extra": "forbid"}


class CoverageRegion(BaseModel):
    """Latitude/longitude box served by the beam.

    Attributes:
        center_lat: Region center latitude in degrees
        center_lon: Region center longitude in degrees
        delta_lat: Half-width in latitude (degrees)
        delta_lon: Half-width in longitude (degrees)
    """

    model_config = _SECTION_CONFIG

    center_lat: float = Field(default=0.0, ge=-90.0, le=90.0)
    center_lon: float = 0.0
    delta_lat: float = Field(default=0.1, gt=0.0)
    delta_lon: float = Field(default=0.1 * math.tan(math.radians(53.0)), gt=0.0)


class GroundTrack(BaseModel):
    """Straight-line nadir track of one satellite pass over the region.

    Attributes:
        center_lat: Latitude crossed at mid-pass (degrees)
        center_lon: Longitude crossed at mid-pass (degrees)
        inclination: Track inclination w.r.t. the equator (degrees)
        angular_speed: Central Earth angle swept per second (degrees/s)
        altitude: Orbit altitude above the surface (km)
        earth_radius: Spherical Earth radius (km)
        delta_lat: Half-width of the coverage region in latitude (degrees)
    """

    model_config = _SECTION_CONFIG

    center_lat: float = Field(default=0.0, ge=-90.0, le=90.0)
    center_lon: float = 0.0
    inclination: float = Field(default=53.0, ge=0.0, lt=90.0)
    angular_speed: float = Field(default=ORBITAL_ANGULAR_SPEED, gt=0.0)
    altitude: float = Field(default=550.0, gt=0.0)
    earth_radius: float = Field(default=EARTH_RADIUS_KM, gt=0.0)
    delta_lat: float = Field(default=0.1, gt=0.0)

    @property
    def lat_span(self) -> float:
        """Latitude span crossed during the pass (degrees)."""
        return 2.0 * self.delta_lat

    @property
    def passage_duration(self) -> float:
        """Time (s) the nadir needs to cross the region."""
        return self.lat_span / (math.cos(math.radians(self.inclination)) * self.angular_speed)

    @property
    def region(self) -> CoverageRegion:
        """Coverage region whose diagonal is the track."""
        return CoverageRegion(
            center_lat=self.center_lat,
            center_lon=self.center_lon,
            delta_lat=self.delta_lat,
            delta_lon=self.delta_lat * math.tan(math.radians(self.inclination)),
        )


class GainPattern(BaseModel):
    """Parameters of the piecewise satellite antenna gain approximation.

    Attributes:
        g_max: Peak main-lobe gain (dBi)
        psi_b: Half of the 3-dB beamwidth (degrees)
        alpha: Main-lobe roll-off exponent
        l_l: Near-in side-lobe level relative to the peak (dB)
        l_f: Far-out side-lobe level (dBi)
        l_b: Back-lobe level (dBi)
        z: Major/minor axis ratio
        a: Main-lobe extent in units of psi_b
        b: Near-in side-lobe extent in units of psi_b
    """

    model_config = _SECTION_CONFIG

    g_max: float = 36.0
    psi_b: float = Field(default=1.75, gt=0.0)
    alpha: float = Field(default=2.0, gt=0.0)
    l_l: float = Field(default=-15.0, le=0.0)
    l_f: float = 0.0
    l_b: float = -10.0
    z: float = Field(default=1.0, ge=1.0)
    a: float = Field(default=2.58, gt=0.0)
    b: float = Field(default=6.32, gt=0.0)

    @property
    def x_level(self) -> float:
        """Intercept X of the -25 log10(psi) side-lobe envelope (dBi)."""
        return self.g_max + self.l_l + 25.0 * math.log10(self.b * self.psi_b)

    @property
    def y_angle(self) -> float:
        """Angle Y (degrees) where the envelope meets the far-out level."""
        return self.b * self.psi_b * 10.0 ** (0.04 * (self.g_max + self.l_l - self.l_f))

    @model_validator(mode="after")
    def check_breakpoints(self) -> "GainPattern":
        """Breakpoints must be ordered a*psi_b <= (b/2)*psi_b < b*psi_b < Y <= 90."""
        if self.a > self.b / 2.0:
            raise ValueError(f"a ({self.a}) must not exceed b/2 ({self.b / 2.0})")
        y = self.y_angle
        if not self.b * self.psi_b < y <= 90.0:
            raise ValueError(
                f"far-out breakpoint Y={y:.3f} deg must lie in "
                f"({self.b * self.psi_b:.3f}, 90]"
            )
        return self


class LinkConfig(BaseModel):
    """Uplink budget constants.

    Attributes:
        p_tx: Terminal transmit power (W)
        g_term: Terminal antenna gain (dBi)
        freq: Carrier frequency (Hz)
        bandwidth: Receiver bandwidth (Hz)
        temperature: Noise temperature (K)
        boltzmann: Boltzmann constant (J/K)
        speed_of_light: Propagation speed (m/s)
    """

    model_config = _SECTION_CONFIG

    p_tx: float = Field(default=10.0, gt=0.0)
    g_term: float = 3.0
    freq: float = Field(default=14e9, gt=0.0)
    bandwidth: float = Field(default=1e7, gt=0.0)
    temperature: float = Field(default=290.0, gt=0.0)
    boltzmann: float = Field(default=BOLTZMANN, gt=0.0)
    speed_of_light: float = Field(default=SPEED_OF_LIGHT, gt=0.0)

    @property
    def wavelength(self) -> float:
        """Carrier wavelength (m)."""
        return self.speed_of_light / self.freq


class TieBreak(str, Enum):
    """How users with equal cumulative rate are ordered for selection."""

    BY_INDEX = "by_index"
    RANDOM = "random"


class SchedulerConfig(BaseModel):
    """Knobs of the multi-slot rate-equalization scheduler.

    Attributes:
        n_sic: Users decoded per slot (SIC depth)
        moderate: Equalize rates inside each slot by power moderation
        permute_slots: Visit the slots of each cycle in a random order
        n_rep: Number of periodic repetitions of the pass
        seed: Seed of all random streams of a run
        tie_break: Ordering of users with equal cumulative rate
        reset_per_cycle: Restart selection totals at every repetition
    """

    model_config = _SECTION_CONFIG

    n_sic: int = Field(default=4, ge=1)
    moderate: bool = False
    permute_slots: bool = False
    n_rep: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0, le=2**64 - 1)
    tie_break: TieBreak = TieBreak.BY_INDEX
    reset_per_cycle: bool = False


class SimConfig(SchedulerConfig):
    """Simulation section: user grid and slotting plus the scheduler knobs.

    Attributes:
        grid_rows: User rows (latitude direction)
        grid_cols: User columns (longitude direction)
        n_slots: Slots per pass
    """

    grid_rows: int = Field(default=16, ge=1)
    grid_cols: int = Field(default=16, ge=1)
    n_slots: int = Field(default=100, ge=1)

    @property
    def n_users(self) -> int:
        """Total users on the grid."""
        return self.grid_rows * self.grid_cols

    @property
    def scheduler(self) -> SchedulerConfig:
        """Scheduler-only view of this section."""
        return SchedulerConfig(
            **{name: getattr(self, name) for name in SchedulerConfig.model_fields}
        )


class Scenario(BaseModel):
    """Full experiment configuration."""

    model_config = _SECTION_CONFIG

    track: GroundTrack = Field(default_factory=GroundTrack)
    gain: GainPattern = Field(default_factory=GainPattern)
    link: LinkConfig = Field(default_factory=LinkConfig)
    sim: SimConfig = Field(default_factory=SimConfig)

    @property
    def region(self) -> CoverageRegion:
        """Coverage region implied by the track."""
        return self.track.region

    @property
    def n_users(self) -> int:
        """Number of users on the grid."""
        return self.sim.n_users

    def with_sim(self, **overrides: Any) -> "Scenario":
        """Return a copy with validated overrides of the ``sim`` section.

        ``None`` values are ignored so CLI options can be passed straight
        through.

        Raises:
            ConfigError: If an override is invalid
        """
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        data = self.to_dict()
        data["sim"].update(updates)
        return scenario_from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        """Convert scenario to a JSON-compatible dictionary."""
        return self.model_dump(mode="json")


def _dotted_key(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"])


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """Validate a scenario document.

    Raises:
        ConfigError: Naming the dotted key of the first invalid entry
    """
    try:
        return Scenario.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        key = _dotted_key(first)
        raise ConfigError(f"{key}: {first['msg']}", key=key, cause=e) from e


def load_scenario(path: Optional[Path] = None) -> Scenario:
    """Load a scenario file, or the reference scenario if ``path`` is None.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation
    """
    if path is None:
        return Scenario()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}", cause=e) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config {path} is not valid JSON: {e}", cause=e) from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config {path} must contain a JSON object")
    return scenario_from_dict(data)


def dump_scenario(scenario: Scenario) -> str:
    """Serialize a scenario to its canonical JSON text."""
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def save_scenario(scenario: Scenario, path: Path) -> None:
    """Write a scenario file (parent directories are created)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_scenario(scenario), encoding="utf-8")

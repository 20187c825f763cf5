"""Tests for pass geometry."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from satnoma.core.config import GroundTrack, Scenario
from satnoma.exceptions import DomainError, OutOfPassError
from satnoma.geometry import (
    GeoPoint,
    central_angle,
    central_angle_for_off_axis,
    central_angle_rad,
    nadir_at,
    nadir_track,
    off_axis_angle,
    probe_points,
    slant_range,
    slot_edges,
    slot_midpoints,
    user_grid,
    wrap_longitude,
)


class TestNadirTrack:
    """Tests for the straight-line nadir track."""

    def test_mid_pass_is_region_center(self) -> None:
        """Test that the nadir crosses the region center at mid-pass."""
        track = GroundTrack(center_lat=10.0, center_lon=20.0)
        point = nadir_at(track, track.passage_duration / 2.0)

        assert point.lat == pytest.approx(10.0)
        assert point.lon == pytest.approx(20.0)

    def test_endpoints_are_region_corners(self) -> None:
        """Test that the pass runs corner to corner along the diagonal."""
        track = GroundTrack()
        region = track.region
        start = nadir_at(track, 0.0)
        end = nadir_at(track, track.passage_duration)

        assert start.lat == pytest.approx(-region.delta_lat)
        assert start.lon == pytest.approx(-region.delta_lon)
        assert end.lat == pytest.approx(region.delta_lat)
        assert end.lon == pytest.approx(region.delta_lon)

    def test_out_of_pass(self) -> None:
        """Test that times outside the pass raise."""
        track = GroundTrack()
        with pytest.raises(OutOfPassError):
            nadir_at(track, -0.1)
        with pytest.raises(OutOfPassError):
            nadir_at(track, track.passage_duration + 0.1)

    def test_vectorized_matches_scalar(self) -> None:
        """Test that the array form agrees with nadir_at."""
        track = GroundTrack()
        times = np.array([0.0, 1.0, 2.5])
        lats, lons = nadir_track(track, times)

        for t, lat, lon in zip(times, lats, lons):
            point = nadir_at(track, float(t))
            assert (lat, lon) == pytest.approx((point.lat, point.lon))

    def test_longitude_wraps(self) -> None:
        """Test that a track across the antimeridian stays in [-180, 180)."""
        track = GroundTrack(center_lon=179.99)
        _, lons = nadir_track(track, np.array([track.passage_duration]))

        assert -180.0 <= lons[0] < 180.0
        assert wrap_longitude(180.0) == -180.0


class TestAngles:
    """Tests for central angle, slant range and off-axis angle."""

    def test_central_angle_zero_at_nadir(self) -> None:
        """Test that a user under the satellite has gamma = 0."""
        assert central_angle(GeoPoint(5.0, 5.0), GeoPoint(5.0, 5.0)) == 0.0

    def test_central_angle_along_meridian(self) -> None:
        """Test that a latitude offset on a meridian equals the angle."""
        gamma = central_angle(GeoPoint(0.0, 0.0), GeoPoint(0.3, 0.0))

        assert math.degrees(gamma) == pytest.approx(0.3)

    def test_slant_range_at_nadir_is_altitude(self) -> None:
        """Test d(0) = h exactly."""
        assert slant_range(0.0, 550.0) == 550.0

    def test_off_axis_zero_at_nadir(self) -> None:
        """Test psi(0) = 0."""
        assert off_axis_angle(0.0, 550.0) == 0.0

    def test_beam_edge_central_angle(self) -> None:
        """Test that psi = 1.75 deg maps to a full Earth angle of about 0.30 deg."""
        gamma = central_angle_for_off_axis(1.75, 550.0)

        assert 2.0 * math.degrees(gamma) == pytest.approx(0.30, abs=0.01)

    def test_beam_edge_round_trip(self) -> None:
        """Test that the inverse reproduces the off-axis angle."""
        gamma = central_angle_for_off_axis(1.75, 550.0)

        assert off_axis_angle(gamma, slant_range(gamma, 550.0)) == pytest.approx(1.75)

    def test_beyond_horizon(self) -> None:
        """Test that a direction missing the Earth raises."""
        with pytest.raises(DomainError):
            central_angle_for_off_axis(80.0, 550.0)

    def test_invalid_latitude(self) -> None:
        """Test that latitudes beyond the poles are rejected."""
        with pytest.raises(DomainError):
            GeoPoint(91.0, 0.0)

    @given(
        lat=st.floats(min_value=-1.0, max_value=1.0),
        lon=st.floats(min_value=-1.0, max_value=1.0),
    )
    def test_central_angle_symmetric(self, lat: float, lon: float) -> None:
        """Test gamma(a, b) == gamma(b, a) and slant range grows with gamma."""
        g1 = central_angle_rad(0.0, 0.0, lat, lon)
        g2 = central_angle_rad(lat, lon, 0.0, 0.0)

        assert g1 == pytest.approx(g2, abs=1e-15)
        assert slant_range(g1, 550.0) >= 550.0


class TestGridsAndSlots:
    """Tests for user grids, probe points and slot times."""

    def test_grid_row_major_with_endpoints(self) -> None:
        """Test grid ordering and that the corners are included."""
        region = Scenario().region
        lats, lons = user_grid(region, 16, 16)

        assert lats.shape == (256,)
        assert lats[0] == pytest.approx(-region.delta_lat)
        assert lons[0] == pytest.approx(-region.delta_lon)
        assert lats[15] == pytest.approx(-region.delta_lat)
        assert lons[15] == pytest.approx(region.delta_lon)
        assert lats[-1] == pytest.approx(region.delta_lat)

    def test_single_cell_grid_is_center(self) -> None:
        """Test that a 1x1 grid sits on the region center."""
        lats, lons = user_grid(Scenario().region, 1, 1)

        assert lats.tolist() == [0.0]
        assert lons.tolist() == [0.0]

    def test_probe_points(self) -> None:
        """Test the nine probe locations, center in the middle."""
        region = Scenario().region
        points = probe_points(region)

        assert len(points) == 9
        assert points[4] == GeoPoint(0.0, 0.0)
        assert points[0].lat == pytest.approx(-region.delta_lat)
        assert points[2].lon == pytest.approx(region.delta_lon)

    def test_slot_midpoints(self) -> None:
        """Test t_k = (k - 1/2) * passage / T."""
        track = GroundTrack()
        times = slot_midpoints(track, 100)
        step = track.passage_duration / 100

        assert times[0] == pytest.approx(step / 2.0)
        assert times[-1] == pytest.approx(track.passage_duration - step / 2.0)
        assert np.allclose(np.diff(times), step)

    def test_slot_edges(self) -> None:
        """Test that T slots have T + 1 edges spanning the pass."""
        track = GroundTrack()
        edges = slot_edges(track, 4)

        assert edges.shape == (5,)
        assert edges[-1] == pytest.approx(track.passage_duration)

    def test_invalid_slot_count(self) -> None:
        """Test that zero slots is rejected."""
        with pytest.raises(DomainError):
            slot_midpoints(GroundTrack(), 0)

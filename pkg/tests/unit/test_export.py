"""Tests for CSV/JSON writers."""

import json
from pathlib import Path

import numpy as np
import pytest

from satnoma import scheduler
from satnoma.core.config import SchedulerConfig
from satnoma.exceptions import ExportError
from satnoma.experiments import SweepResult, SweepRow
from satnoma.export import (
    simulation_summary,
    summary_path,
    write_slot_trace_csv,
    write_snr_csv,
    write_summary_json,
    write_sweep_csv,
    write_throughput_csv,
)
from satnoma.linkbudget import SnrMatrix


@pytest.fixture
def tiny_snr() -> SnrMatrix:
    """Two users, two slots, 10^1.25 and 10 linear."""
    return SnrMatrix(
        rho=np.array([[10.0**1.25, 10.0], [1.0, 2.0]]),
        slot_times=np.array([0.25, 0.75]),
        slot_duration=0.5,
        bandwidth=1e6,
        user_lats=np.array([0.1, -0.1]),
        user_lons=np.array([0.0, 0.05]),
    )


class TestSnrCsv:
    """Tests for the SNR matrix export."""

    def test_exact_bytes(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test header and 6-decimal dB formatting."""
        path = write_snr_csv(tiny_snr, tmp_path / "snr.csv")

        assert path.read_text() == (
            "slot,t_seconds,user_0,user_1\n"
            "0,0.250000,12.500000,0.000000\n"
            "1,0.750000,10.000000,3.010300\n"
        )

    def test_unwritable(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test that a directory in place of the file is an export error."""
        target = tmp_path / "dir.csv"
        target.mkdir()

        with pytest.raises(ExportError):
            write_snr_csv(tiny_snr, target)


class TestThroughputCsv:
    """Tests for the per-user throughput export."""

    def test_columns_and_integers(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test user,lat,lon,throughput_bps with integer bit/s."""
        result = scheduler.run(tiny_snr, SchedulerConfig(n_sic=2, n_rep=1))
        path = write_throughput_csv(result, tiny_snr, tmp_path / "tp.csv")
        lines = path.read_text().splitlines()

        assert lines[0] == "user,lat,lon,throughput_bps"
        assert lines[1].startswith("0,0.100000,0.000000,")
        assert lines[2].startswith("1,-0.100000,0.050000,")
        assert lines[1].split(",")[3].isdigit()

    def test_unknown_positions_blank(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test that lat/lon are left empty without positions."""
        snr = SnrMatrix(tiny_snr.rho, tiny_snr.slot_times, 0.5, 1e6)
        result = scheduler.run(snr, SchedulerConfig(n_sic=2, n_rep=1))
        lines = write_throughput_csv(result, snr, tmp_path / "tp.csv").read_text().splitlines()

        assert lines[1].startswith("0,,,")


class TestSlotTrace:
    """Tests for the per-slot rate trace."""

    def test_nine_decimals(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test spectral efficiencies are printed with 9 decimals."""
        result = scheduler.run(tiny_snr, SchedulerConfig(n_sic=1, n_rep=1))
        lines = write_slot_trace_csv(result, tmp_path / "trace.csv").read_text().splitlines()

        assert lines[0] == "step,slot,n_selected,min_rate,sum_rate"
        assert len(lines) == 3
        assert len(lines[1].split(",")[3].split(".")[1]) == 9


class TestSweepCsv:
    """Tests for the sweep export."""

    def test_exact_bytes(self, tmp_path: Path) -> None:
        """Test column order, lowercase booleans and rounding."""
        sweep = SweepResult(
            rows=[SweepRow(4, True, False, 1.4, 2.5, 3.6, 10.49)],
            sum_rate_bound=20.0,
        )
        path = write_sweep_csv(sweep, tmp_path / "sweep.csv")

        assert path.read_text() == (
            "n_sic,moderate,permute,min_bps,mean_bps,max_bps,sum_bps\n"
            "4,true,false,1,2,4,10\n"
        )


class TestSummaryJson:
    """Tests for summary documents."""

    def test_summary_path(self) -> None:
        """Test <stem>.summary.json beside the output."""
        assert summary_path(Path("out/run.csv")) == Path("out/run.summary.json")

    def test_sorted_and_rounded(self, tiny_snr: SnrMatrix, tmp_path: Path) -> None:
        """Test key order and float rounding are stable."""
        result = scheduler.run(tiny_snr, SchedulerConfig(n_sic=2, n_rep=1))
        summary = simulation_summary(result, {"n_sic": 2, "ratio": 1.0 / 3.0})
        path = write_summary_json(summary, tmp_path / "s.json")
        data = json.loads(path.read_text())

        assert list(data) == sorted(data)
        assert set(data) >= {"min", "max", "mean", "sum", "sum_rate_bound", "params"}
        assert data["params"]["ratio"] == 0.333333
        assert data["sum"] == pytest.approx(data["sum_rate_bound"], abs=1e-5)

"""End-to-end tests of the command-line interface."""

import json
from pathlib import Path

import numpy as np
import pytest
from pytest_mock import MockerFixture
from typer.testing import CliRunner

from satnoma import __version__
from satnoma.cli import EXIT_CONFIG, EXIT_IO, EXIT_VERIFY_FAILED, app
from satnoma.core.config import load_scenario

pytestmark = pytest.mark.integration


def _invoke(runner: CliRunner, *args: str):  # type: ignore[no-untyped-def]
    return runner.invoke(app, list(args))


def _config(tmp_path: Path, data: dict, name: str = "cfg.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


class TestSnrCommand:
    """Tests for `satnoma snr`."""

    def test_probe_9(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test nine probe columns over 100 slots with the default scenario."""
        out = tmp_path / "probe.csv"
        result = _invoke(runner, "--out", str(out), "snr", "--probe-9")

        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == "slot,t_seconds," + ",".join(f"user_{i}" for i in range(9))
        assert len(lines) == 101

    def test_single_slot(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that T = 1 writes a single data row."""
        config = _config(tmp_path, {"sim": {"n_slots": 1, "grid_rows": 2, "grid_cols": 2}})
        out = tmp_path / "snr.csv"
        result = _invoke(runner, "--config", str(config), "--out", str(out), "snr")

        assert result.exit_code == 0, result.output
        assert len(out.read_text().splitlines()) == 2

    def test_invalid_config_names_key(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test exit code 2 and the offending key for psi_b = 0."""
        config = _config(tmp_path, {"gain": {"psi_b": 0}})
        result = _invoke(runner, "--config", str(config), "--out", str(tmp_path / "x.csv"), "snr")

        assert result.exit_code == EXIT_CONFIG
        assert "gain.psi_b" in result.output

    def test_missing_config(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that a missing config file is a config error."""
        result = _invoke(runner, "--config", str(tmp_path / "nope.json"), "snr")

        assert result.exit_code == EXIT_CONFIG


class TestSimulateCommand:
    """Tests for `satnoma simulate`."""

    def test_outputs(self, runner: CliRunner, small_config_file: Path, tmp_path: Path) -> None:
        """Test the throughput CSV and its summary document."""
        out = tmp_path / "run.csv"
        result = _invoke(runner, "--config", str(small_config_file), "--out", str(out), "simulate")

        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == "user,lat,lon,throughput_bps"
        assert len(lines) == 17

        summary = json.loads((tmp_path / "run.summary.json").read_text())
        assert {"min", "max", "mean", "sum", "sum_rate_bound", "params"} <= set(summary)
        assert summary["min"] <= summary["mean"] <= summary["max"]
        assert summary["params"]["n_sic"] == 4
        assert summary["params"]["seed"] == 7

    def test_full_sic_equals_bound(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test that n_sic = N reaches the normalized sum-rate bound."""
        out = tmp_path / "full.csv"
        result = _invoke(
            runner,
            "--config",
            str(small_config_file),
            "--out",
            str(out),
            "simulate",
            "--n-sic",
            "16",
            "--no-moderate",
        )

        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "full.summary.json").read_text())
        assert summary["sum"] == pytest.approx(summary["sum_rate_bound"], rel=1e-3)

    def test_moderation_lowers_sum(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test that the moderated sum throughput is strictly smaller."""
        sums = {}
        for flag in ("--moderate", "--no-moderate"):
            out = tmp_path / f"{flag.strip('-')}.csv"
            result = _invoke(
                runner, "--config", str(small_config_file), "--out", str(out), "simulate", flag
            )
            assert result.exit_code == 0, result.output
            sums[flag] = json.loads(out.with_name(f"{out.stem}.summary.json").read_text())["sum"]

        assert sums["--moderate"] < sums["--no-moderate"]

    def test_deterministic(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test that two runs with seed 42 are byte-identical."""
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name / "run.csv"
            result = _invoke(
                runner,
                "--config",
                str(small_config_file),
                "--out",
                str(out),
                "--seed",
                "42",
                "simulate",
                "--permute",
            )
            assert result.exit_code == 0, result.output
            outputs.append(
                (out.read_bytes(), out.with_name("run.summary.json").read_bytes())
            )

        assert outputs[0] == outputs[1]

    def test_from_snr_csv(self, runner: CliRunner, small_config_file: Path, tmp_path: Path) -> None:
        """Test that a re-imported SNR export gives the same throughputs."""
        snr_path = tmp_path / "snr.csv"
        direct = tmp_path / "direct.csv"
        imported = tmp_path / "imported.csv"
        base = ["--config", str(small_config_file)]

        assert _invoke(runner, *base, "--out", str(snr_path), "snr").exit_code == 0
        assert _invoke(runner, *base, "--out", str(direct), "simulate").exit_code == 0
        result = _invoke(
            runner, *base, "--out", str(imported), "simulate", "--snr-csv", str(snr_path)
        )

        assert result.exit_code == 0, result.output
        a = np.sort(np.loadtxt(direct, delimiter=",", skiprows=1, usecols=3))
        b = np.sort(np.loadtxt(imported, delimiter=",", skiprows=1, usecols=3))
        assert np.allclose(a, b, rtol=1e-3)

    def test_bad_snr_csv(self, runner: CliRunner, small_config_file: Path, tmp_path: Path) -> None:
        """Test that an invalid SNR file is an I/O error."""
        bad = tmp_path / "bad.csv"
        bad.write_text("slot,t_seconds\n0,0.5\n")
        result = _invoke(
            runner, "--config", str(small_config_file), "simulate", "--snr-csv", str(bad)
        )

        assert result.exit_code == EXIT_IO

    def test_unwritable_output(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test that writing onto a directory exits with the I/O code."""
        target = tmp_path / "taken"
        target.mkdir()
        result = _invoke(
            runner, "--config", str(small_config_file), "--out", str(target), "simulate"
        )

        assert result.exit_code == EXIT_IO


class TestSweepCommand:
    """Tests for `satnoma sweep`."""

    def test_rows_and_summary(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test one row per combination and the bound in the summary."""
        out = tmp_path / "sweep.csv"
        result = _invoke(
            runner,
            "--config",
            str(small_config_file),
            "--out",
            str(out),
            "sweep",
            "--n-sic",
            "2,4,16",
            "--moderate",
            "both",
            "--workers",
            "1",
            "--no-progress",
        )

        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == "n_sic,moderate,permute,min_bps,mean_bps,max_bps,sum_bps"
        assert len(lines) == 7
        assert lines[1].startswith("2,false,false,")
        assert lines[4].startswith("2,true,false,")

        summary = json.loads((tmp_path / "sweep.summary.json").read_text())
        full_sic_sum = int(lines[3].split(",")[6])
        assert full_sic_sum == pytest.approx(summary["sum_rate_bound"], abs=1.0)

    def test_deterministic(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test byte-identical sweeps with a fixed seed."""
        outputs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            result = _invoke(
                runner,
                "--config",
                str(small_config_file),
                "--out",
                str(out),
                "--seed",
                "42",
                "sweep",
                "--n-sic",
                "2,3",
                "--permute",
                "on",
                "--workers",
                "1",
                "--no-progress",
            )
            assert result.exit_code == 0, result.output
            outputs.append(out.read_bytes())

        assert outputs[0] == outputs[1]

    @pytest.mark.parametrize("args", [["--n-sic", "2,zero"], ["--moderate", "sometimes"]])
    def test_invalid_arguments(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path, args: list
    ) -> None:
        """Test that bad lists and toggles are config errors."""
        result = _invoke(runner, "--config", str(small_config_file), "sweep", *args)

        assert result.exit_code == EXIT_CONFIG


class TestVerifyCommand:
    """Tests for `satnoma verify`."""

    def _run(self, runner: CliRunner, tmp_path: Path, *args: str) -> tuple[int, dict]:
        out = tmp_path / "verify.json"
        result = _invoke(runner, "--out", str(out), "verify", *args)
        return result.exit_code, json.loads(out.read_text())

    def test_passes(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that all checks pass on a reduced run."""
        code, document = self._run(
            runner, tmp_path, "--trials", "100", "--samples", "200", "--vectors", "20"
        )

        assert code == 0
        assert document["passed"] is True
        names = [r["name"] for r in document["reports"]]
        assert names == ["sic_order_agreement", "swap_monotonicity", "moderation", "phi_identity"]
        assert document["reports"][1]["trials"] == 1000

    def test_zero_trials(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that trials = 0 passes with empty trial-based reports."""
        code, document = self._run(runner, tmp_path, "--trials", "0")

        assert code == 0
        assert document["reports"][0]["trials"] == 0
        assert document["reports"][2]["trials"] == 0

    def test_ascending_policy_fails(
        self, runner: CliRunner, tmp_path: Path, mocker: MockerFixture
    ) -> None:
        """Test that a weakest-first ordering policy is caught (exit 1)."""
        mocker.patch(
            "satnoma.noma.optimal_sic_order",
            side_effect=lambda rho: np.argsort(np.asarray(rho), kind="stable"),
        )
        code, document = self._run(
            runner, tmp_path, "--trials", "50", "--samples", "0", "--vectors", "0"
        )

        assert code == EXIT_VERIFY_FAILED
        assert document["passed"] is False
        agreement = document["reports"][0]
        assert agreement["failures"] > 0
        assert agreement["failing_inputs"]

    @pytest.mark.parametrize("flag,expected", [((), 5), (("--seed", "0"), 0), (("--seed", "9"), 9)])
    def test_seed_from_config(
        self,
        runner: CliRunner,
        tmp_path: Path,
        mocker: MockerFixture,
        flag: tuple,
        expected: int,
    ) -> None:
        """Test that sim.seed drives the checks unless --seed overrides it."""
        from satnoma import oracle

        agreement = mocker.spy(oracle, "check_sic_order_agreement")
        moderation = mocker.spy(oracle, "check_moderation")
        cfg = _config(tmp_path, {"sim": {"seed": 5}})
        out = tmp_path / "verify.json"

        result = _invoke(
            runner,
            "--config",
            str(cfg),
            *flag,
            "--out",
            str(out),
            "verify",
            "--trials",
            "10",
            "--samples",
            "0",
        )

        assert result.exit_code == 0
        assert agreement.call_args.args[2] == expected
        assert moderation.call_args.args[3] == expected

    def test_max_users_bound(self, runner: CliRunner) -> None:
        """Test that exhaustive search beyond eight users is refused."""
        result = _invoke(runner, "verify", "--max-users", "9")

        assert result.exit_code != 0


class TestConfigAndVersion:
    """Tests for `satnoma config` and `satnoma version`."""

    def test_config_round_trip(
        self, runner: CliRunner, small_config_file: Path, tmp_path: Path
    ) -> None:
        """Test that the written scenario loads back unchanged."""
        out = tmp_path / "effective.json"
        result = _invoke(runner, "--config", str(small_config_file), "--out", str(out), "config")

        assert result.exit_code == 0, result.output
        assert load_scenario(out) == load_scenario(small_config_file)

    def test_config_seed_override(self, runner: CliRunner) -> None:
        """Test that --seed lands in the printed scenario."""
        result = _invoke(runner, "--seed", "123", "config")

        assert result.exit_code == 0
        assert '"seed": 123' in result.output

    def test_version(self, runner: CliRunner) -> None:
        """Test version output."""
        result = _invoke(runner, "version")

        assert result.exit_code == 0
        assert __version__ in result.output

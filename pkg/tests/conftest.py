"""Pytest configuration and fixtures."""

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from satnoma.core.config import Scenario, scenario_from_dict
from satnoma.linkbudget import SnrMatrix, build_snr_matrix


@pytest.fixture
def tmp_output_dir(tmp_path: Path) -> Path:
    """Create a temporary output directory."""
    output_dir = tmp_path / "output"
    output_dir.mkdir()
    return output_dir


@pytest.fixture
def default_scenario() -> Scenario:
    """The reference scenario (16x16 users, 100 slots)."""
    return Scenario()


@pytest.fixture
def small_scenario_dict() -> dict:
    """Raw document of a 4x4-user, 10-slot scenario."""
    return {
        "sim": {
            "grid_rows": 4,
            "grid_cols": 4,
            "n_slots": 10,
            "n_rep": 3,
            "n_sic": 4,
            "seed": 7,
        }
    }


@pytest.fixture
def small_scenario(small_scenario_dict: dict) -> Scenario:
    """A 4x4-user, 10-slot scenario that runs in milliseconds."""
    return scenario_from_dict(small_scenario_dict)


@pytest.fixture
def small_snr(small_scenario: Scenario) -> SnrMatrix:
    """SNR matrix of the small scenario."""
    return build_snr_matrix(small_scenario)


@pytest.fixture
def small_config_file(tmp_path: Path, small_scenario_dict: dict) -> Path:
    """Small scenario written as a JSON config file."""
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(small_scenario_dict))
    return path


@pytest.fixture
def runner() -> CliRunner:
    """Typer CLI runner."""
    return CliRunner()


@pytest.fixture
def sample_snr_csv(tmp_path: Path) -> Path:
    """A valid two-user, three-slot SNR export."""
    csv_content = """slot,t_seconds,user_0,user_1
0,0.830949,12.500000,10.250000
1,2.492847,12.750000,11.000000
2,4.154745,12.500000,10.250000
"""
    csv_path = tmp_path / "snr.csv"
    csv_path.write_text(csv_content)
    return csv_path


@pytest.fixture
def empty_csv(tmp_path: Path) -> Path:
    """Create a header-only CSV file for testing."""
    csv_path = tmp_path / "empty.csv"
    csv_path.write_text("slot,t_seconds,user_0\n")
    return csv_path

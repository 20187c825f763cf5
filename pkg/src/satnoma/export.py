"""CSV and JSON writers with pinned numeric formats.

Numbers are formatted to strings before pandas sees them so the files are
byte-stable across platforms: SNR in dB with 6 decimals, throughputs in
integer bit/s, spectral efficiencies with 9 decimals.
"""

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd

from satnoma.exceptions import ExportError
from satnoma.linkbudget import SnrMatrix
from satnoma.scheduler import SimResult

if TYPE_CHECKING:
    from satnoma.experiments import SweepResult

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["n_sic", "moderate", "permute", "min_bps", "mean_bps", "max_bps", "sum_bps"]

# Decimals kept in summary JSON floats
SUMMARY_DECIMALS = 6


def _fmt(values: np.ndarray, decimals: int) -> list[str]:
    return [f"{v:.{decimals}f}" for v in np.asarray(values, dtype=float)]


def _bps(values: np.ndarray) -> list[str]:
    return [str(int(v)) for v in np.rint(np.asarray(values, dtype=float))]


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", cause=e) from e
    logger.debug("Wrote %d rows to %s", len(frame), path)
    return path


def snr_frame(snr: SnrMatrix) -> pd.DataFrame:
    """SNR matrix as ``slot,t_seconds,user_0..user_{N-1}`` (dB), one row per slot."""
    columns: dict[str, list[Any]] = {
        "slot": list(range(snr.n_slots)),
        "t_seconds": _fmt(snr.slot_times, 6),
    }
    rho_db = snr.rho_db()
    for n in range(snr.n_users):
        columns[f"user_{n}"] = _fmt(rho_db[n], 6)
    return pd.DataFrame(columns)


def write_snr_csv(snr: SnrMatrix, path: Path) -> Path:
    """Write the SNR matrix CSV.

    Raises:
        ExportError: If the file cannot be written
    """
    return _write_frame(snr_frame(snr), path)


def throughput_frame(result: SimResult, snr: SnrMatrix) -> pd.DataFrame:
    """Per-user ``user,lat,lon,throughput_bps``; lat/lon blank when unknown."""
    n_users = result.throughput.size
    if snr.user_lats is not None and snr.user_lons is not None:
        lats = _fmt(snr.user_lats, 6)
        lons = _fmt(snr.user_lons, 6)
    else:
        lats = lons = [""] * n_users
    return pd.DataFrame(
        {
            "user": list(range(n_users)),
            "lat": lats,
            "lon": lons,
            "throughput_bps": _bps(result.throughput),
        }
    )


def write_throughput_csv(result: SimResult, snr: SnrMatrix, path: Path) -> Path:
    """Write the per-user throughput CSV.

    Raises:
        ExportError: If the file cannot be written
    """
    return _write_frame(throughput_frame(result, snr), path)


def slot_trace_frame(result: SimResult) -> pd.DataFrame:
    """``step,slot,n_selected,min_rate,sum_rate`` for every kept slot decision."""
    decisions = result.per_slot
    return pd.DataFrame(
        {
            "step": list(range(len(decisions))),
            "slot": [d.slot_index for d in decisions],
            "n_selected": [int(d.selected.size) for d in decisions],
            "min_rate": _fmt(np.array([d.min_rate for d in decisions]), 9),
            "sum_rate": _fmt(np.array([float(d.rates.sum()) for d in decisions]), 9),
        }
    )


def write_slot_trace_csv(result: SimResult, path: Path) -> Path:
    """Write the per-slot spectral-efficiency trace.

    Raises:
        ExportError: If the file cannot be written
    """
    return _write_frame(slot_trace_frame(result), path)


def sweep_frame(sweep: "SweepResult") -> pd.DataFrame:
    """One row per sweep combination, booleans as ``true``/``false``."""
    rows = [
        {
            "n_sic": row.n_sic,
            "moderate": "true" if row.moderate else "false",
            "permute": "true" if row.permute else "false",
            "min_bps": _bps(np.array([row.min_bps]))[0],
            "mean_bps": _bps(np.array([row.mean_bps]))[0],
            "max_bps": _bps(np.array([row.max_bps]))[0],
            "sum_bps": _bps(np.array([row.sum_bps]))[0],
        }
        for row in sweep.rows
    ]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def write_sweep_csv(sweep: "SweepResult", path: Path) -> Path:
    """Write the sweep CSV.

    Raises:
        ExportError: If the file cannot be written
    """
    return _write_frame(sweep_frame(sweep), path)


def _round(value: Any) -> Any:
    if isinstance(value, float):
        return round(value, SUMMARY_DECIMALS)
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    return value


def summary_path(out_path: Path) -> Path:
    """``<out stem>.summary.json`` next to ``out_path``."""
    out_path = Path(out_path)
    return out_path.with_name(f"{out_path.stem}.summary.json")


def simulation_summary(result: SimResult, params: dict[str, Any]) -> dict[str, Any]:
    """Summary document of a scheduler run."""
    stats = result.stats()
    return {
        "min": stats.min,
        "max": stats.max,
        "mean": stats.mean,
        "sum": stats.sum,
        "spread": stats.spread,
        "sum_rate_bound": result.sum_rate_bound,
        "params": params,
    }


def write_summary_json(summary: dict[str, Any], path: Path) -> Path:
    """Write a summary document with sorted keys and rounded floats.

    Raises:
        ExportError: If the file cannot be written
    """
    path = Path(path)
    text = json.dumps(_round(summary), indent=2, sort_keys=True) + "\n"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", cause=e) from e
    logger.debug("Wrote summary %s", path)
    return path

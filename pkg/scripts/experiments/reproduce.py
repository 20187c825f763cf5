#!/usr/bin/env python3
"""Full-scale fairness experiments on the default scenario.

Writes the nine-probe SNR curves, the N_SIC sweep (moderation and slot
permutation on and off) and the N_SIC = N run, then prints the trend
checks: mean throughput against log2(N_SIC), fairness spread, moderation
cost and the sum-rate bound.

Usage:
    python -m scripts.experiments.reproduce --output-dir ./results

Or run directly:
    python scripts/experiments/reproduce.py
"""

import sys
from pathlib import Path
from typing import Optional

import numpy as np

# Add project root to path for direct execution
if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from scripts.experiments.config import (
    BOUND_RTOL,
    DEFAULT_N_SIC_VALUES,
    DEFAULT_OUTPUT_DIR,
    MAX_SPREAD_AT_LOW_N_SIC,
    OUTPUT_FILES,
    PERMUTATION_MEAN_RTOL,
    SPREAD_STEP_SLACK,
)
from satnoma import export, linkbudget, scheduler
from satnoma.core.config import load_scenario
from satnoma.experiments import SweepResult, Toggle, run_sweep, sweep_points
from satnoma.geometry import probe_points
from satnoma.utils.progress import configure_logging


def log2_fit_r_squared(n_sic: list[int], means: list[float]) -> float:
    """R^2 of a least-squares line of mean throughput against log2(N_SIC)."""
    x = np.log2(n_sic)
    y = np.asarray(means)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(1.0 - np.sum(residual**2) / np.sum((y - y.mean()) ** 2))


def print_trends(sweep: SweepResult) -> bool:
    """Print the trend checks; return True when all hold."""
    plain = sweep.select(moderate=False, permute=False)
    moderated = sweep.select(moderate=True, permute=False)
    permuted = sweep.select(moderate=False, permute=True)

    means = [r.mean_bps for r in plain]
    spreads = [r.spread for r in plain]
    r_squared = log2_fit_r_squared([r.n_sic for r in plain], means)
    checks = {
        "mean increasing in N_SIC": all(b > a for a, b in zip(means, means[1:])),
        "log2 fit R^2 >= 0.95": r_squared >= 0.95,
        f"spread <= {MAX_SPREAD_AT_LOW_N_SIC:.0%} at N_SIC={plain[0].n_sic}": (
            spreads[0] <= MAX_SPREAD_AT_LOW_N_SIC
        ),
        "moderated sum below unmoderated": all(
            m.sum_bps < p.sum_bps for p, m in zip(plain, moderated)
        ),
        f"spread rises by <= {SPREAD_STEP_SLACK} per step": all(
            b <= a + SPREAD_STEP_SLACK for a, b in zip(spreads, spreads[1:])
        ),
        f"permutation changes mean < {PERMUTATION_MEAN_RTOL:.0%}": all(
            abs(q.mean_bps - p.mean_bps) < PERMUTATION_MEAN_RTOL * p.mean_bps
            for p, q in zip(plain, permuted)
        ),
    }

    print(f"{'n_sic':>6} {'mean_bps':>12} {'spread':>8} {'step':>8} {'moderated_sum':>14}")
    for i, (p, m) in enumerate(zip(plain, moderated)):
        step = p.spread - spreads[i - 1] if i else 0.0
        print(
            f"{p.n_sic:>6} {p.mean_bps:>12.0f} {p.spread:>8.4f} {step:>+8.4f} {m.sum_bps:>14.0f}"
        )
    print(f"log2 fit R^2: {r_squared:.4f}")
    print("")
    for name, ok in checks.items():
        print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    return all(checks.values())


def run_reproduction(
    output_dir: Path = DEFAULT_OUTPUT_DIR,
    n_sic_values: Optional[list[int]] = None,
    config_path: Optional[Path] = None,
    workers: Optional[int] = None,
    verbose: bool = False,
) -> bool:
    """Run every experiment and write its CSV files.

    Args:
        output_dir: Directory for the CSV and summary files
        n_sic_values: Swept N_SIC values
        config_path: Scenario JSON (defaults when None)
        workers: Sweep worker processes (SATNOMA_THREADS when None)
        verbose: Enable verbose logging

    Returns:
        True when all trend checks hold
    """
    configure_logging(verbose=verbose)
    values = n_sic_values or DEFAULT_N_SIC_VALUES
    scenario = load_scenario(config_path)
    cfg = scenario.sim.scheduler

    print("=" * 60)
    print("Max-min fair NOMA scheduling experiments")
    print("=" * 60)
    print(f"Users: {scenario.n_users}  slots: {scenario.sim.n_slots}  reps: {cfg.n_rep}")
    print(f"Output directory: {output_dir}")
    print("")

    points = probe_points(scenario.region)
    probe_users = (np.array([p.lat for p in points]), np.array([p.lon for p in points]))
    export.write_snr_csv(
        linkbudget.build_snr_matrix(scenario, probe_users), output_dir / OUTPUT_FILES["probe_snr"]
    )

    snr = linkbudget.build_snr_matrix(scenario)
    sweep = run_sweep(
        snr,
        cfg,
        sweep_points(values, moderate=Toggle.BOTH, permute=Toggle.BOTH),
        workers=workers,
        verbose=verbose,
    )
    sweep_path = output_dir / OUTPUT_FILES["sweep"]
    export.write_sweep_csv(sweep, sweep_path)
    export.write_summary_json(
        sweep.to_summary({"n_sic": values, "n_rep": cfg.n_rep, "seed": cfg.seed}),
        export.summary_path(sweep_path),
    )

    full = scheduler.run(
        snr, cfg.model_copy(update={"n_sic": snr.n_users, "moderate": False}), keep_decisions=False
    )
    full_path = output_dir / OUTPUT_FILES["full_sic"]
    export.write_throughput_csv(full, snr, full_path)
    full_sum = full.stats().sum
    bound_ok = abs(full_sum - full.sum_rate_bound) <= BOUND_RTOL * full.sum_rate_bound

    print("")
    ok = print_trends(sweep)
    print(
        f"  [{'ok' if bound_ok else 'FAIL'}] N_SIC=N sum {full_sum:.0f} vs bound "
        f"{full.sum_rate_bound:.0f} bit/s"
    )
    print("\nDone!")
    return ok and bound_ok


if __name__ == "__main__":
    import typer

    def main(
        output_dir: Path = typer.Option(
            DEFAULT_OUTPUT_DIR,
            "--output-dir",
            "-o",
            help="Output directory",
        ),
        n_sic: str = typer.Option(
            ",".join(str(v) for v in DEFAULT_N_SIC_VALUES),
            "--n-sic",
            help="Comma-separated N_SIC values",
        ),
        config: Optional[Path] = typer.Option(
            None,
            "--config",
            "-c",
            help="Scenario JSON file",
        ),
        workers: Optional[int] = typer.Option(
            None,
            "--workers",
            "-w",
            help="Worker processes",
        ),
        verbose: bool = typer.Option(
            False,
            "--verbose",
            "-v",
            help="Verbose output",
        ),
    ) -> None:
        """Reproduce the fairness and throughput trends."""
        from satnoma.experiments import parse_n_sic_list

        ok = run_reproduction(
            output_dir=output_dir,
            n_sic_values=parse_n_sic_list(n_sic),
            config_path=config,
            workers=workers,
            verbose=verbose,
        )
        raise typer.Exit(0 if ok else 1)

    typer.run(main)

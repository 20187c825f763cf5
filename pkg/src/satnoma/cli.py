"""CLI interface for satnoma using Typer."""

import json
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterator, Optional

import numpy as np
import typer

from satnoma.exceptions import ConfigError, ExportError, ValidationError

if TYPE_CHECKING:
    from satnoma.core.config import Scenario

app = typer.Typer(
    name="satnoma",
    help="Max-min fair uplink NOMA simulator for a LEO satellite pass.",
    add_completion=False,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class CliState:
    """Global options shared by all commands."""

    config: Optional[Path]
    out: Optional[Path]
    seed: Optional[int]
    verbose: bool


@contextmanager
def _exit_on_error() -> Iterator[None]:
    """Turn library errors into exit codes."""
    try:
        yield
    except ConfigError as e:
        typer.echo(f"Config error: {e}", err=True)
        raise typer.Exit(EXIT_CONFIG) from e
    except (ValidationError, ExportError, OSError) as e:
        typer.echo(f"I/O error: {e}", err=True)
        raise typer.Exit(EXIT_IO) from e


def _state(ctx: typer.Context) -> CliState:
    return ctx.obj if isinstance(ctx.obj, CliState) else CliState(None, None, None, False)


def _load(state: CliState, **sim_overrides: Any) -> "Scenario":
    from satnoma.core.config import load_scenario

    scenario = load_scenario(state.config)
    return scenario.with_sim(seed=state.seed, **sim_overrides)


def _out(state: CliState, default: str) -> Path:
    return state.out if state.out is not None else Path(default)


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(
        None,
        "--config",
        "-c",
        help="Scenario JSON file (defaults to the reference scenario)",
        dir_okay=False,
    ),
    out: Optional[Path] = typer.Option(
        None,
        "--out",
        "-o",
        help="Output file",
    ),
    seed: Optional[int] = typer.Option(
        None,
        "--seed",
        help="Seed overriding sim.seed",
        min=0,
        max=MAX_SEED,
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Verbose logging",
    ),
    log_file: Optional[Path] = typer.Option(
        None,
        "--log-file",
        help="Also write DEBUG logs to this file",
    ),
) -> None:
    """Max-min fair uplink NOMA simulator for a LEO satellite pass."""
    from satnoma.utils.progress import configure_logging

    configure_logging(verbose=verbose, log_file=log_file)
    ctx.obj = CliState(config=config, out=out, seed=seed, verbose=verbose)


@app.command()
def snr(
    ctx: typer.Context,
    probe_9: bool = typer.Option(
        False,
        "--probe-9",
        help="Only the nine probe locations (center and +/- delta on each axis)",
    ),
) -> None:
    """Write the per-slot SNR matrix (dB) of every user."""
    from satnoma import export, linkbudget
    from satnoma.geometry import probe_points

    state = _state(ctx)
    with _exit_on_error():
        scenario = _load(state)
        users = None
        if probe_9:
            points = probe_points(scenario.region)
            users = (np.array([p.lat for p in points]), np.array([p.lon for p in points]))
        matrix = linkbudget.build_snr_matrix(scenario, users)
        variation = linkbudget.intra_slot_variation_db(scenario, users)
        path = export.write_snr_csv(matrix, _out(state, "snr.csv"))

    rho_db = matrix.rho_db()
    typer.echo(f"Wrote {path}: {matrix.n_users} users x {matrix.n_slots} slots")
    typer.echo(f"SNR range:            {rho_db.min():.2f} .. {rho_db.max():.2f} dB")
    typer.echo(f"Intra-slot variation: {variation.max():.3f} dB (worst user)")


@app.command()
def simulate(
    ctx: typer.Context,
    n_sic: Optional[int] = typer.Option(None, "--n-sic", help="Users decoded per slot", min=1),
    moderate: Optional[bool] = typer.Option(
        None,
        "--moderate/--no-moderate",
        help="Equalize rates by power moderation",
    ),
    permute: Optional[bool] = typer.Option(
        None,
        "--permute/--no-permute",
        help="Shuffle slot order in every cycle",
    ),
    n_rep: Optional[int] = typer.Option(None, "--n-rep", help="Pass repetitions", min=1),
    snr_csv: Optional[Path] = typer.Option(
        None,
        "--snr-csv",
        help="Use an SNR matrix written by `satnoma snr`",
        dir_okay=False,
    ),
    trace: Optional[Path] = typer.Option(
        None,
        "--trace",
        help="Also write the per-slot rate trace CSV",
    ),
) -> None:
    """Run the max-min scheduler and write per-user throughputs."""
    from satnoma import export, linkbudget, scheduler

    state = _state(ctx)
    with _exit_on_error():
        scenario = _load(state, n_sic=n_sic, moderate=moderate, permute_slots=permute, n_rep=n_rep)
        if snr_csv is not None:
            matrix = linkbudget.read_snr_csv(snr_csv, scenario)
        else:
            matrix = linkbudget.build_snr_matrix(scenario)
        cfg = scenario.sim.scheduler
        result = scheduler.run(matrix, cfg, keep_decisions=trace is not None)

        out_path = _out(state, "throughput.csv")
        export.write_throughput_csv(result, matrix, out_path)
        params = {
            **cfg.model_dump(mode="json"),
            "n_users": matrix.n_users,
            "n_slots": matrix.n_slots,
        }
        summary = export.simulation_summary(result, params)
        summary_file = export.write_summary_json(summary, export.summary_path(out_path))
        if trace is not None:
            export.write_slot_trace_csv(result, trace)

    stats = result.stats()
    typer.echo(f"Wrote {out_path} and {summary_file}")
    typer.echo(
        f"Per-user throughput: min {stats.min:.0f}  mean {stats.mean:.0f}  "
        f"max {stats.max:.0f} bit/s"
    )
    typer.echo(f"Sum throughput:      {stats.sum:.0f} bit/s (bound {result.sum_rate_bound:.0f})")


@app.command()
def sweep(
    ctx: typer.Context,
    n_sic: str = typer.Option(
        "2,3,4,5,10,20",
        "--n-sic",
        help="Comma-separated N_SIC values",
    ),
    moderate: str = typer.Option("off", "--moderate", help="Power moderation: off, on or both"),
    permute: str = typer.Option("off", "--permute", help="Slot permutation: off, on or both"),
    workers: Optional[int] = typer.Option(
        None,
        "--workers",
        "-w",
        help="Worker processes (default: SATNOMA_THREADS, 0 = one per CPU)",
        min=0,
    ),
    progress: bool = typer.Option(True, "--progress/--no-progress", help="Show a progress bar"),
) -> None:
    """Run the scheduler for every requested (n_sic, moderate, permute) combination."""
    from satnoma import export, linkbudget
    from satnoma.experiments import Toggle, parse_n_sic_list, run_sweep, sweep_points

    state = _state(ctx)
    with _exit_on_error():
        try:
            moderate_axis, permute_axis = Toggle(moderate), Toggle(permute)
        except ValueError as e:
            raise ConfigError(f"Expected off, on or both: {e}", key="sweep", cause=e) from e
        values = parse_n_sic_list(n_sic)
        scenario = _load(state)
        matrix = linkbudget.build_snr_matrix(scenario)
        cfg = scenario.sim.scheduler
        points = sweep_points(values, moderate_axis, permute_axis)
        result = run_sweep(
            matrix, cfg, points, workers=workers, progress=progress, verbose=state.verbose
        )

        out_path = _out(state, "sweep.csv")
        export.write_sweep_csv(result, out_path)
        params = {
            **cfg.model_dump(mode="json", exclude={"n_sic", "moderate", "permute_slots"}),
            "n_sic": values,
            "n_users": matrix.n_users,
            "n_slots": matrix.n_slots,
        }
        export.write_summary_json(result.to_summary(params), export.summary_path(out_path))

    typer.echo(f"{'n_sic':>6} {'moderate':>8} {'permute':>7} {'mean_bps':>12} {'spread':>8}")
    for row in result.rows:
        typer.echo(
            f"{row.n_sic:>6} {str(row.moderate).lower():>8} {str(row.permute).lower():>7} "
            f"{row.mean_bps:>12.0f} {row.spread:>8.4f}"
        )
    typer.echo(f"Sum-rate bound: {result.sum_rate_bound:.0f} bit/s")
    typer.echo(f"Wrote {out_path}")


@app.command()
def verify(
    ctx: typer.Context,
    trials: int = typer.Option(1000, "--trials", help="Random vectors for the order check", min=0),
    max_users: int = typer.Option(
        6,
        "--max-users",
        help="Largest vector for exhaustive search",
        min=1,
        max=8,
    ),
    samples: int = typer.Option(
        10_000,
        "--samples",
        help="Feasible probes per moderation vector",
        min=0,
    ),
    vectors: Optional[int] = typer.Option(
        None,
        "--vectors",
        help="Moderation vectors (default: trials / 2)",
        min=0,
    ),
    moderation_users: int = typer.Option(
        16,
        "--moderation-users",
        help="Largest vector for the moderation checks",
        min=1,
    ),
) -> None:
    """Check SIC ordering and power moderation against brute force."""
    from satnoma import oracle
    from satnoma.utils.progress import ProgressLogger

    state = _state(ctx)
    with _exit_on_error():
        seed = _load(state).sim.seed
    n_vectors = trials // 2 if vectors is None else vectors
    checks = [
        ("sic_order_agreement", lambda: oracle.check_sic_order_agreement(trials, max_users, seed)),
        ("swap_monotonicity", lambda: oracle.check_swap_monotonicity(10 * trials, max_users, seed)),
        (
            "moderation",
            lambda: oracle.check_moderation(n_vectors, moderation_users, samples, seed),
        ),
        ("phi_identity", lambda: oracle.check_phi_identity()),
    ]

    reports = []
    with ProgressLogger(total=len(checks), desc="Verify", verbose=state.verbose) as tracker:
        for name, check in checks:
            report = check()
            reports.append(report)
            if report.passed:
                tracker.log_success(name, f"{report.trials} trials")
            else:
                tracker.log_failure(name, f"{report.failures}/{report.trials} failed")

    passed = all(r.passed for r in reports)
    document = {"passed": passed, "reports": [r.model_dump() for r in reports]}
    text = json.dumps(document, indent=2)
    typer.echo(text)
    if state.out is not None:
        with _exit_on_error():
            try:
                state.out.parent.mkdir(parents=True, exist_ok=True)
                state.out.write_text(text + "\n", encoding="utf-8")
            except OSError as e:
                raise ExportError(f"Cannot write {state.out}: {e}", cause=e) from e
    if not passed:
        raise typer.Exit(EXIT_VERIFY_FAILED)


@app.command()
def config(ctx: typer.Context) -> None:
    """Print (or write with --out) the effective scenario JSON."""
    from satnoma.core.config import dump_scenario, save_scenario

    state = _state(ctx)
    with _exit_on_error():
        scenario = _load(state)
        if state.out is not None:
            save_scenario(scenario, state.out)
            typer.echo(f"Wrote {state.out}")
            return
    typer.echo(dump_scenario(scenario), nl=False)


@app.command()
def version() -> None:
    """Show version information."""
    from satnoma import __version__

    typer.echo(f"satnoma version {__version__}")


def main() -> None:
    """Entry point for CLI."""
    app()


if __name__ == "__main__":
    main()

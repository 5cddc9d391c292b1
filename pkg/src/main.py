"""
Rotor Map - command-line entry point

    python -m src.main run CONFIG.json [--out DIR] [--svg]
    python -m src.main reproduce-tables [--out DIR] [--workers N]
    python -m src.main polar CONFIG.json --svg PATH
    python -m src.main cobweb CONFIG.json --out DIR

Exit codes: 0 success, 1 reference mismatch, 2 invalid input.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import typer
from rich.console import Console
from rich.table import Table

from .app import bootstrap
from .config import ExperimentConfig, Settings, load_config
from .dynamics.orbit import analyze
from .errors import ConfigError, DomainError
from .models import InvariantModel, MapParams, OrbitReport, Trajectory
from .tools.artifacts import write_frame_csv, write_report_json, write_run
from .tools.plotting import default_grids, emit_cobweb_data, emit_polar_svg
from .tools.tables import reproduce_tables

logger = logging.getLogger(__name__)

EXIT_MISMATCH = 1
EXIT_INVALID = 2

cli = typer.Typer(add_completion=False, help="Exact rotor map: simulation, invariants and stability.")
console = Console()

_state = {'settings': None}


@cli.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level", help="Override ROTORMAP_LOG_LEVEL")):
    try:
        _state['settings'] = bootstrap(log_level)
    except ConfigError as e:
        console.print(f"[red]Invalid settings:[/red] {e}")
        raise typer.Exit(code=EXIT_INVALID)


def _settings() -> Settings:
    return _state['settings'] or Settings()


def _load_and_run(config_path: Path) -> Tuple[ExperimentConfig, MapParams, OrbitReport, Trajectory, InvariantModel]:
    try:
        config = load_config(config_path)
        params, theta1, policy = config.resolve()
        report, trajectory, model = analyze(params, theta1, config.omega1, config.steps, policy)
    except (ConfigError, DomainError) as e:
        console.print(f"[red]Invalid input:[/red] {e}")
        raise typer.Exit(code=EXIT_INVALID)
    return config, params, report, trajectory, model


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _summary_table(report: OrbitReport) -> Table:
    table = Table(title="Run summary")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key in ('steps', 'completed_steps', 'trimmed_states', 'termination', 'periodic', 'period', 'drift_pct',
                'max_err_pct', 'max_err_index', 'assumption_satisfied', 'min_omega', 'e_bar', 'sigma'):
        value = getattr(report, key)
        table.add_row(key, _fmt(value.value if hasattr(value, 'value') else value))
    if report.eigenvalues is not None:
        table.add_row('|lambda|', ", ".join(f"{v:.6f}" for v in report.eigenvalues))
    return table


@cli.command()
def run(config_path: Path = typer.Argument(..., help="Experiment config (JSON)"),
        out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
        svg: bool = typer.Option(False, "--svg", help="Also write the polar plot")):
    """Simulate one configuration and write the trajectory CSV and report JSON."""
    config, params, report, trajectory, model = _load_and_run(config_path)
    out_dir = out or _settings().output_dir
    stem = config_path.stem
    artifact = write_run(trajectory, report, model, params, out_dir, stem=stem,
                         config=config.model_dump(mode='json'))
    if svg:
        svg_path = Path(out_dir) / f"{stem}_polar.svg"
        emit_polar_svg(trajectory, model, svg_path)
        artifact.svg_paths.append(svg_path)
    logger.info("Run %s: %d states, termination %s", stem, report.steps, report.termination.value)
    console.print(_summary_table(report))
    console.print(f"CSV: {artifact.trajectory_csv}\nJSON: {artifact.report_json}")


@cli.command("reproduce-tables")
def reproduce(out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
              workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Override ROTORMAP_WORKERS")):
    """Rerun every reference case and compare against the expected values."""
    result = reproduce_tables(workers=workers or _settings().workers)
    out_dir = out or _settings().output_dir
    path = write_report_json(result, Path(out_dir) / "tables_report.json")

    table = Table(title="Reference cases")
    for column in ("row", "metric", "expected", "actual", "tol", "ok"):
        table.add_column(column)
    for row in result['rows']:
        for cell in row['cells']:
            mark = "[green]pass[/green]" if cell['pass'] else "[red]FAIL[/red]"
            table.add_row(row['row_id'], cell['metric'], _fmt(cell['expected']),
                          _fmt(cell['actual']), _fmt(cell['tolerance']), mark)
    console.print(table)
    console.print(f"{result['passed']} passed, {result['failed']} failed; report at {path}")
    if result['status'] != "success":
        raise typer.Exit(code=EXIT_MISMATCH)


@cli.command()
def polar(config_path: Path = typer.Argument(..., help="Experiment config (JSON)"),
          svg: Path = typer.Option(..., "--svg", help="SVG output path")):
    """Write the polar plot of the exact trajectory over the invariant prediction."""
    _, _, _, trajectory, model = _load_and_run(config_path)
    emit_polar_svg(trajectory, model, svg, title=config_path.stem)
    console.print(f"SVG: {svg}")


@cli.command()
def cobweb(config_path: Path = typer.Argument(..., help="Experiment config (JSON)"),
           out: Path = typer.Option(..., "--out", help="Output directory"),
           theta_points: int = typer.Option(73, "--theta-points", min=1),
           omega_points: int = typer.Option(61, "--omega-points", min=1)):
    """Write the step surface and the cobweb path as CSV."""
    _, params, _, trajectory, _ = _load_and_run(config_path)
    theta_grid, omega_grid = default_grids(trajectory, theta_points, omega_points)
    surface, path = emit_cobweb_data(params, trajectory, theta_grid, omega_grid)
    surface_csv = write_frame_csv(surface, Path(out) / f"{config_path.stem}_surface.csv")
    path_csv = write_frame_csv(path, Path(out) / f"{config_path.stem}_path.csv")
    console.print(f"Surface: {surface_csv}\nPath: {path_csv}")


if __name__ == '__main__':
    cli()

"""CLI interface for hilbertgeom."""

import functools
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from . import __version__, config
from .catalogue import default_catalogue, load_catalogue, verify_theorem
from .convex_domain import load_domain
from .errors import HilbertError
from .figures import FIGURES, ball_figure, make_figure
from .hilbert_metric import distance, metric_ball, unique_geodesic_probe
from .maps import MapFamily, make_map
from .models import RunConfig, SamplingConfig, Thresholds
from .webs_isometry import classify_map, load_sampled_map, probe_points

logger = logging.getLogger("hilbertgeom")

console = Console()
err_console = Console(stderr=True)

EXIT_MISMATCH = 1
EXIT_INPUT_ERROR = 2


class PointType(click.ParamType):
    """An affine point written as "x,y"."""

    name = "point"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            x, y = (float(v) for v in value.split(","))
        except ValueError:
            self.fail(f"expected 'x,y', got {value!r}", param, ctx)
        return (x, y)


POINT = PointType()
DOMAIN_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def handle_errors(func):
    """Turn library and input errors into a red one-line message and exit code 2."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (HilbertError, ValidationError, json.JSONDecodeError, OSError, ValueError) as exc:
            err_console.print(f"[bold red]error:[/] {escape(str(exc).splitlines()[0] if str(exc) else type(exc).__name__)}")
            sys.exit(EXIT_INPUT_ERROR)

    return wrapper


def sampling_options(func):
    """--seed, budgets and verdict tolerances shared by the pipeline commands."""
    options = [
        click.option("--seed", type=int, default=None, help="Sampling seed (default: HILBERT_SEED)"),
        click.option("--pairs", type=int, default=None, help="Random pairs for the isometry defect"),
        click.option("--lines-per-pole", type=int, default=None, help="Lines per pencil"),
        click.option("--samples-per-line", type=int, default=None, help="Samples per pencil line"),
        click.option("--tol-isometry", type=float, default=None, help="Isometry defect threshold"),
        click.option("--tol-residual", type=float, default=None, help="Projective fit residual threshold"),
        click.option("--tol-collineation", type=float, default=None, help="Line straightness threshold"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_run_config(base: SamplingConfig | None = None, output: Path | None = None, **flags) -> RunConfig:
    """Command-line flags over an optional sampling block over the environment defaults."""
    sampling = (base or SamplingConfig()).model_dump()
    for key in ("seed", "pairs", "lines_per_pole", "samples_per_line"):
        if flags.get(key) is not None:
            sampling[key] = flags[key]
    thresholds = Thresholds().model_dump()
    for key, flag in (("isometry", "tol_isometry"), ("residual", "tol_residual"), ("collineation", "tol_collineation")):
        if flags.get(flag) is not None:
            thresholds[key] = flags[flag]
    return RunConfig(
        sampling=SamplingConfig(**sampling),
        thresholds=Thresholds(**thresholds),
        output=str(output) if output is not None else None,
    )


def _echo_json(data) -> None:
    click.echo(json.dumps(data, indent=2))


@click.group()
@click.version_option(__version__)
@click.option(
    "--log-level",
    default=config.LOG_LEVEL,
    type=click.Choice(["debug", "info", "warning", "error"]),
    help="Logging verbosity",
)
def cli(log_level):
    """hilbertgeom - Hilbert metric toolkit and isometry classifier for planar convex domains."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
    )


# --- Metric ---

@cli.command("distance")
@click.argument("domain_file", type=DOMAIN_FILE)
@click.option("--x", "x", type=POINT, required=True, help="First point, 'x,y'")
@click.option("--y", "y", type=POINT, required=True, help="Second point, 'x,y'")
@handle_errors
def distance_cmd(domain_file, x, y):
    """Print the Hilbert distance between two interior points."""
    d = distance(load_domain(domain_file), x, y)
    click.echo(f"{d:.15g}")


@cli.command("ball")
@click.argument("domain_file", type=DOMAIN_FILE)
@click.option("--center", type=POINT, required=True, help="Ball center, 'x,y'")
@click.option("--radius", type=float, required=True, help="Radius in nats")
@click.option("--directions", type=int, default=64, help="Rays from the center")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Also write an SVG figure")
@handle_errors
def ball_cmd(domain_file, center, radius, directions, svg_path):
    """Print the boundary polyline of a Hilbert ball as JSON."""
    domain = load_domain(domain_file)
    points = metric_ball(domain, center, radius, directions)
    if svg_path is not None:
        ball_figure(domain, center, [radius], directions).save(svg_path)
    _echo_json({"center": list(center), "radius": radius, "points": points.tolist()})


@cli.command("geodesic-probe")
@click.argument("domain_file", type=DOMAIN_FILE)
@click.option("--x", "x", type=POINT, required=True, help="First point, 'x,y'")
@click.option("--y", "y", type=POINT, required=True, help="Second point, 'x,y'")
@click.option("--resolution", type=int, default=200, help="Grid points per axis")
@click.option("--threshold", type=float, default=1e-9, help="Defect certifying a second geodesic")
@handle_errors
def geodesic_probe_cmd(domain_file, x, y, resolution, threshold):
    """Search a grid for off-segment points that split d(x, y) additively."""
    report = unique_geodesic_probe(load_domain(domain_file), x, y, resolution, threshold)
    data = report.model_dump(mode="json")
    data["certifies_nonunique"] = report.certifies_nonunique
    _echo_json(data)


# --- Classification ---

@cli.command("classify")
@click.argument("map_file", type=DOMAIN_FILE)
@sampling_options
@handle_errors
def classify_cmd(map_file, **flags):
    """Classify a sampled map as projective isometry, non-projective isometry or neither."""
    smap, sampling = load_sampled_map(map_file)
    ignored = [f"--{k.replace('_', '-')}" for k in ("lines_per_pole", "samples_per_line") if flags.pop(k) is not None]
    if ignored:
        logger.warning("Ignoring %s: web lines of a sample table are read from its samples", ", ".join(ignored))
    run = build_run_config(sampling, **flags)
    report = classify_map(smap, sampling=run.sampling, thresholds=run.thresholds)
    _echo_json(report.model_dump(mode="json"))


@cli.command("make-map")
@click.argument("family", type=click.Choice([f.value for f in MapFamily]))
@click.argument("domain_file", type=DOMAIN_FILE)
@click.argument("output", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--epsilon", type=float, default=1e-2, help="Perturbation magnitude (perturbed)")
@click.option("--factor", type=float, default=0.9, help="Squeeze factor (squeeze)")
@click.option("--index", type=int, default=0, help="Symmetry index 0..11 (hex-symmetry)")
@click.option("--matrix", default=None, help="Nine comma-separated row-major entries (projective, perturbed)")
@sampling_options
@handle_errors
def make_map_cmd(family, domain_file, output, epsilon, factor, index, matrix, **flags):
    """Tabulate a closed-form map on the points the classifier will probe."""
    run = build_run_config(output=output, **flags)
    domain = load_domain(domain_file)
    entries = [float(v) for v in matrix.split(",")] if matrix else None
    rng = np.random.default_rng(run.sampling.seed)
    smap = make_map(MapFamily(family), domain, rng, epsilon=epsilon, factor=factor, index=index, matrix=entries)
    table = smap.tabulate(probe_points(domain, run.sampling))
    Path(run.output).write_text(json.dumps(table.to_spec(run.sampling).model_dump(mode="json")))
    console.print(f"[green]Wrote[/] {len(table)} samples of the {family} map to {run.output}")


@cli.command("verify-theorem")
@click.argument("catalogue_file", type=DOMAIN_FILE, required=False)
@sampling_options
@handle_errors
def verify_theorem_cmd(catalogue_file, **flags):
    """Classify every catalogue shape against projective, perturbed and reciprocal maps."""
    run = build_run_config(**flags)
    catalogue = load_catalogue(catalogue_file) if catalogue_file else default_catalogue()
    rows = verify_theorem(catalogue, run.sampling, run.thresholds)

    table = Table(show_header=True, header_style="bold cyan", title="Isometry verdicts")
    table.add_column("Shape", style="white")
    table.add_column("Map")
    table.add_column("Predicted")
    table.add_column("Verdict")
    table.add_column("Isometry", justify="right")
    table.add_column("Collineation", justify="right")
    table.add_column("Residual", justify="right")
    table.add_column("Match", justify="center")
    for r in rows:
        table.add_row(
            r.shape,
            r.family,
            r.prediction.value,
            r.verdict.value,
            f"{r.isometry_defect:.2e}",
            f"{r.collineation_defect:.2e}",
            f"{r.residual:.2e}",
            "[green]yes[/]" if r.matches else "[red]NO[/]",
        )
    console.print(table)

    mismatches = [r for r in rows if not r.matches]
    for r in mismatches:
        err_console.print(f"[bold red]mismatch:[/] {escape(r.model_dump_json())}")
    if mismatches:
        sys.exit(EXIT_MISMATCH)


@cli.command("figure")
@click.argument("kind", type=click.Choice(FIGURES))
@click.argument("domain_file", type=DOMAIN_FILE)
@click.argument("output", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--lines", type=int, default=config.LINES_PER_POLE, help="Lines per pencil")
@click.option("--radius", type=float, default=1.0, help="Largest ball radius (ball)")
@handle_errors
def figure_cmd(kind, domain_file, output, lines, radius):
    """Write an SVG figure of a chord, a pencil, a web, a quadrilateral split or metric balls."""
    make_figure(kind, load_domain(domain_file), lines=lines, radius=radius).save(output)
    console.print(f"[green]Wrote[/] {kind} figure to {output}")

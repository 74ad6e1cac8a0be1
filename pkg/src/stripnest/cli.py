"""Command line interface: ``nest`` and its subcommands."""
from __future__ import annotations

import sys
from typing import Optional, Tuple

import click

from .bench import run_bench, write_csv, rows_to_csv
from .datasets import BUNDLED, load_bundled, load_dataset
from .geometry import rotate
from .metrics import layout_extension_area, layout_pieces_area, wasted_fraction
from .placement import SolverConfig, pack
from .render import write_svg
from .search import SearchConfig, hill_climb
from .semidiscrete import GAP_ALL_INTERIOR, GAP_ZERO_ONLY, dump, semidiscretize
from .oracle import verify_layout


def _load(path: str):
    if path in BUNDLED:
        return load_bundled(path)
    return load_dataset(path)


def _parse_rotations(text: Optional[str]) -> Optional[Tuple[float, ...]]:
    if not text:
        return None
    return tuple(float(x) for x in text.split(","))


def _config(resolution, rotations, dtheta, no_warm_start, gap_closure) -> SolverConfig:
    return SolverConfig(
        resolution=resolution,
        rotations=_parse_rotations(rotations),
        dtheta=dtheta,
        warm_start=not no_warm_start,
        gap_scope=GAP_ALL_INTERIOR if gap_closure == "all" else GAP_ZERO_ONLY,
    )


common_options = [
    click.option("--input", "input_path", required=True,
                 help="Dataset JSON file or a bundled name: " + ", ".join(BUNDLED)),
    click.option("--resolution", type=float, default=None,
                 help="Resolution R (default: derived base resolution)."),
    click.option("--rotations", default=None,
                 help="Comma separated rotation angles in degrees."),
    click.option("--dtheta", type=float, default=None,
                 help="Rotation step for datasets with free rotation."),
    click.option("--no-warm-start", is_flag=True, default=False),
    click.option("--gap-closure", type=click.Choice(["zero", "all"]), default="all"),
]


def add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@click.group()
def main():
    """Strip nesting with a semi-discrete bottom-left-fill heuristic."""


@main.command("pack")
@add_options(common_options)
@click.option("--svg", "svg_path", default=None, help="Write the layout as SVG.")
@click.option("--report", "report_path", default=None, help="Write a CSV report.")
def pack_cmd(input_path, resolution, rotations, dtheta, no_warm_start, gap_closure,
             svg_path, report_path):
    """Pack a dataset and print the resulting strip length."""
    ds = _load(input_path)
    cfg = _config(resolution, rotations, dtheta, no_warm_start, gap_closure)
    result = pack(ds, cfg)
    wf = wasted_fraction(
        result.used_length, result.strip_width, layout_pieces_area(ds, result)
    )
    click.echo(f"dataset       {ds.name}")
    click.echo(f"pieces        {len(result.records)}")
    click.echo(f"resolution    {result.resolution:g}")
    click.echo(f"rotations     {','.join(f'{a:g}' for a in result.angles_used)}")
    click.echo(f"strip length  {result.used_length:g}")
    click.echo(f"wasted        {wf:.2f} %")
    click.echo(f"checks        {result.total_checks}")
    click.echo(f"disc/place ms {result.disc_ms:.2f} / {result.place_ms:.2f}")
    if svg_path:
        write_svg(svg_path, result.placed_polygons(ds), result.strip_width,
                  result.used_length)
        click.echo(f"svg           {svg_path}")
    if report_path:
        rows = run_bench(ds, [result.resolution], cfg, reps=1)
        write_csv(report_path, rows)
        click.echo(f"report        {report_path}")


@main.command("discretize")
@click.option("--input", "input_path", required=True)
@click.option("--piece", "piece_id", required=True)
@click.option("--resolution", type=float, required=True)
@click.option("--rotation", type=float, default=0.0)
@click.option("--gap-closure", type=click.Choice(["zero", "all"]), default="all")
def discretize_cmd(input_path, piece_id, resolution, rotation, gap_closure):
    """Print the semi-discrete columns of one piece."""
    ds = _load(input_path)
    match = [p for p in ds.pieces if p.id == piece_id]
    if not match:
        raise click.ClickException(f"no piece with id {piece_id!r}")
    scope = GAP_ALL_INTERIOR if gap_closure == "all" else GAP_ZERO_ONLY
    sd = semidiscretize(rotate(match[0].polygon, rotation), resolution, scope)
    click.echo(dump(sd))


@main.command("verify")
@add_options(common_options)
def verify_cmd(input_path, resolution, rotations, dtheta, no_warm_start, gap_closure):
    """Pack, audit with the exact oracle, print a JSON report."""
    ds = _load(input_path)
    cfg = _config(resolution, rotations, dtheta, no_warm_start, gap_closure)
    result = pack(ds, cfg)
    report = verify_layout(result.placed_polygons(ds), result.strip_width, ds.name)
    click.echo(report.to_json())
    if not report.ok:
        sys.exit(1)


@main.command("bench")
@add_options(common_options)
@click.option("--resolutions", default=None,
              help="Comma separated resolutions (default: the base resolution).")
@click.option("--reps", type=int, default=1)
@click.option("--report", "report_path", default=None)
def bench_cmd(input_path, resolution, rotations, dtheta, no_warm_start, gap_closure,
              resolutions, reps, report_path):
    """Benchmark packing at one or more resolutions."""
    ds = _load(input_path)
    cfg = _config(resolution, rotations, dtheta, no_warm_start, gap_closure)
    rs = (
        [float(x) for x in resolutions.split(",")] if resolutions else [resolution]
    )
    rows = run_bench(ds, rs, cfg, reps=reps)
    out = rows_to_csv(rows)
    click.echo(out.rstrip("\n"))
    if report_path:
        write_csv(report_path, rows)


@main.command("hillclimb")
@add_options(common_options)
@click.option("--iterations", type=int, default=100)
@click.option("--seed", type=int, default=0)
def hillclimb_cmd(input_path, resolution, rotations, dtheta, no_warm_start,
                  gap_closure, iterations, seed):
    """Improve the greedy layout by local search."""
    ds = _load(input_path)
    cfg = _config(resolution, rotations, dtheta, no_warm_start, gap_closure)
    res = hill_climb(ds, cfg, SearchConfig(iterations=iterations, seed=seed))
    for line in res.log:
        click.echo(line)
    click.echo(f"greedy length {res.initial.used_length:g}")
    click.echo(f"best length   {res.best.used_length:g}")
    click.echo(f"accepted      {res.accepted}")


@main.command("render")
@add_options(common_options)
@click.option("--out", "out_path", required=True)
def render_cmd(input_path, resolution, rotations, dtheta, no_warm_start, gap_closure,
               out_path):
    """Pack a dataset and write the layout as SVG."""
    ds = _load(input_path)
    cfg = _config(resolution, rotations, dtheta, no_warm_start, gap_closure)
    result = pack(ds, cfg)
    write_svg(out_path, result.placed_polygons(ds), result.strip_width,
              result.used_length)
    click.echo(f"wrote {out_path} (length {result.used_length:g})")


if __name__ == "__main__":
    main()

from pathlib import Path

import click
from engine import schema
from engine.exceptions import RangeError
from engine.geometry import DEFAULT_GRID, round_sphere

METRICS = ["sphere", "csv"]


def metric_options(f):
    f = click.option(
        "--input",
        "input_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="metric CSV (r,w) with its JSON sidecar, for --metric csv",
    )(f)
    f = click.option("--metric", type=click.Choice(METRICS), default="sphere", show_default=True)(f)
    return f


def check_metric_options(params):
    if params["metric"] == "csv" and params.get("input_path") is None:
        raise click.UsageError("--metric csv needs --input")


def load_metric(params, radius=1.0):
    if params["metric"] == "csv":
        return schema.read_metric(params["input_path"])
    return round_sphere(params["n"], params.get("grid") or DEFAULT_GRID, radius)


def load_weight(metric, path):
    """u from a CSV sampled on the metric grid, None without one"""
    if path is None:
        return None
    u = schema.read_field(path)
    if not metric.same_grid(u.grid):
        raise RangeError(f"{Path(path).name} is not sampled on the metric grid")
    return u

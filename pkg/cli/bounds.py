import math
from pathlib import Path

import click
from engine import schema
from engine.bounds import (
    barrier_constants,
    c_coefficient,
    diameter_verdict,
    gamma_range_check,
    sharp_gamma_max,
    volume_verdict,
)
from engine.exceptions import RangeError
from engine.geometry import DEFAULT_GRID, RadialField

from .inputs import check_metric_options, load_metric, load_weight, metric_options
from .options import bounded, grid_option, nonnegative, positive, sweepable
from .run import dispatch


@click.group(name="bounds")
def bounds():
    """sharp diameter and volume bounds"""


def _radius(params):
    """sphere radius, lambda^(-1/2) unless given"""
    return params["radius"] if params["radius"] is not None else 1 / math.sqrt(params["lam"])


@bounds.command(name="diameter")
@sweepable("--n", base=int, default=3, callback=bounded(3), help="dimension")
@sweepable("--gamma", default=1.0, callback=nonnegative, help="weight of the Laplacian")
@sweepable("--lambda", "lam", default=1.0, callback=positive, help="spectral lower bound")
@metric_options
@click.option(
    "--weight",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="weight CSV (r,u) on the metric grid, u = 1 by default",
)
@sweepable("--radius", default=None, callback=positive, help="sphere radius [default: lambda^(-1/2)]")
@grid_option(DEFAULT_GRID)
@click.pass_context
def diameter(ctx, **params):
    """measured diameter against pi / sqrt(lambda) (u_max / u_min)^(gamma (n - 3) / (n - 1))"""
    check_metric_options(params)
    return dispatch(ctx, "bounds.diameter", params)


@bounds.command(name="volume")
@sweepable("--n", base=int, default=3, callback=bounded(2), help="dimension")
@sweepable("--lambda", "lam", default=1.0, callback=positive, help="spectral lower bound")
@metric_options
@sweepable("--radius", default=None, callback=positive, help="sphere radius [default: lambda^(-1/2)]")
@grid_option(DEFAULT_GRID)
@click.pass_context
def volume(ctx, **params):
    """measured volume against lambda^(-n/2) vol(S^n)"""
    check_metric_options(params)
    return dispatch(ctx, "bounds.volume", params)


@bounds.command(name="gamma-range")
@sweepable("--n", base=int, default=4, callback=bounded(3), help="dimension")
@sweepable("--gamma", default=1.0, callback=nonnegative, help="weight of the Laplacian")
@click.pass_context
def gamma_range(ctx, **params):
    """where gamma sits relative to the sharp and the universal diameter ranges"""
    return dispatch(ctx, "bounds.gamma-range", params)


def _summary(verdict):
    return f"lhs={verdict.lhs:.12g} rhs={verdict.rhs:.12g} slack={verdict.slack:.3e} rigid={str(verdict.rigid).lower()}"


def run_diameter(command, params, out_dir):
    metric = load_metric(params, _radius(params))
    u = load_weight(metric, params["weight"])
    if u is None:
        u = RadialField.constant(metric.grid, 1.0)
    verdict = diameter_verdict(metric, u, params["gamma"], params["lam"])
    u_max, u_min = float(u.values.max()), float(u.values.min())
    constants = barrier_constants(metric.n, params["gamma"], params["lam"], u_max, u_min)
    schema.write_verdicts(out_dir / "verdicts.csv", [verdict])
    schema.write_json(
        out_dir / "diameter.json",
        {**verdict.as_row(), "exact": verdict.exact, "barrier": constants._asdict()},
    )
    summary = _summary(verdict) + ("" if verdict.exact else " (lower bound)")
    return verdict.holds, summary


def run_volume(command, params, out_dir):
    metric = load_metric(params, _radius(params))
    verdict = volume_verdict(metric, params["lam"])
    schema.write_verdicts(out_dir / "verdicts.csv", [verdict])
    return verdict.holds, _summary(verdict)


def run_gamma_range(command, params, out_dir):
    n, gamma = params["n"], params["gamma"]
    ranges = gamma_range_check(n, gamma)
    payload = {"n": n, "gamma": gamma, "sharp_max": sharp_gamma_max(n), **ranges._asdict()}
    try:
        payload["c"] = c_coefficient(n, gamma)
    except RangeError:
        payload["c"] = None
    schema.write_json(out_dir / "gamma_range.json", payload)
    sharp, universal = str(ranges.sharp).lower(), str(ranges.universal_diameter).lower()
    summary = f"n={n} gamma={gamma:g} sharp={sharp} universal={universal}"
    return ranges.sharp, summary

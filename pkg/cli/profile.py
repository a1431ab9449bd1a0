import math
from pathlib import Path

import click
from engine import schema
from engine.geometry import DEFAULT_GRID, RadialField, vol_round_sphere
from engine.profile import (
    TRIM,
    VISCOSITY_TOL,
    comparison_verdict,
    model_profile,
    psi_transform,
    radial_weighted_profile,
    viscosity_residual,
)

from .inputs import check_metric_options, load_metric, load_weight, metric_options
from .options import bounded, grid_option, nonnegative, positive, sweepable
from .run import dispatch


@click.group(name="profile")
def profile():
    """isoperimetric profiles and the viscosity comparison"""


def comparison_options(f):
    f = sweepable("--trim", default=TRIM, callback=nonnegative, help="fraction of v cut at both ends")(f)
    f = sweepable("--tol", default=VISCOSITY_TOL, callback=positive, help="viscosity residual tolerance")(f)
    return f


@profile.command(name="model")
@sweepable("--n", base=int, default=3, callback=bounded(2), help="dimension")
@sweepable("--lambda", "lam", default=1.0, callback=positive, help="model curvature")
@sweepable("--zeta", default=None, callback=positive, help="area scale [default: vol(S^(n-1))]")
@grid_option(DEFAULT_GRID)
@comparison_options
@click.pass_context
def model(ctx, **params):
    """the round model profile I_zeta"""
    return dispatch(ctx, "profile.model", params)


@profile.command(name="radial")
@sweepable("--n", base=int, default=3, callback=bounded(2), help="dimension")
@sweepable("--gamma", default=0.0, callback=nonnegative, help="weight exponent")
@sweepable("--lambda", "lam", default=1.0, callback=positive, help="spectral lower bound")
@metric_options
@click.option(
    "--weight",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="weight CSV (r,u) on the metric grid, u = 1 by default",
)
@sweepable("--radius", default=None, callback=positive, help="sphere radius [default: lambda^(-1/2)]")
@grid_option(DEFAULT_GRID)
@comparison_options
@click.pass_context
def radial(ctx, **params):
    """centered-ball profile of a warped metric with weight u"""
    check_metric_options(params)
    return dispatch(ctx, "profile.radial", params)


@profile.command(name="check")
@click.option(
    "--input",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="profile CSV (v,I) with its JSON sidecar",
)
@comparison_options
@click.pass_context
def check(ctx, **params):
    """viscosity residual, psi residual and comparison verdict of a stored profile"""
    return dispatch(ctx, "profile.check", params)


def _compare(curve, params, out_dir):
    residual = viscosity_residual(curve, params["trim"])
    psi = psi_transform(curve, params["trim"])
    verdict = comparison_verdict(curve, params["tol"], trim=params["trim"])
    schema.write_residual(out_dir / "residual.csv", residual)
    schema.write_residual(out_dir / "psi_residual.csv", psi.residual)
    schema.write_json(out_dir / "verdict.json", verdict.to_dict())
    summary = (
        f"status={verdict.status.value} V={verdict.V_measured:.12g} bound={verdict.V_bound:.12g} "
        f"residual={verdict.worst_residual:.3e}"
    )
    return verdict.passed, summary


def run_model(command, params, out_dir):
    n = params["n"]
    zeta = params["zeta"] if params["zeta"] is not None else vol_round_sphere(n - 1)
    curve = model_profile(zeta, params["lam"], n).curve(params["grid"])
    schema.write_profile(out_dir / "profile.csv", curve)
    return _compare(curve, params, out_dir)


def run_radial(command, params, out_dir):
    radius = params["radius"] if params["radius"] is not None else 1 / math.sqrt(params["lam"])
    metric = load_metric(params, radius)
    u = load_weight(metric, params["weight"])
    if u is None:
        u = RadialField.constant(metric.grid, 1.0)
    curve = radial_weighted_profile(metric, u, params["gamma"], params["lam"])
    schema.write_profile(out_dir / "profile.csv", curve)
    return _compare(curve, params, out_dir)


def run_check(command, params, out_dir):
    return _compare(schema.read_profile(params["input_path"]), params, out_dir)

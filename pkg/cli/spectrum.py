import click
import numpy as np
from engine import schema
from engine.geometry import DEFAULT_GRID, FieldKind, RadialField, curvature_profile, ric_min_field
from engine.spectral import SturmLiouvilleProblem, principal_eigenvalue

from .inputs import check_metric_options, load_metric, metric_options
from .options import bounded, grid_option, nonnegative, positive, sweepable
from .run import dispatch

POTENTIALS = ["ric", "zero", "cos2"]


def build_potential(metric, name):
    if name == "ric":
        return ric_min_field(metric)
    if name == "zero":
        return RadialField.constant(metric.grid, 0.0, FieldKind.POTENTIAL)
    return RadialField.from_function(metric.grid, lambda r: -2 * np.cos(2 * r), FieldKind.POTENTIAL)


@click.command(name="spectrum")
@sweepable("--n", base=int, default=3, callback=bounded(2), help="dimension")
@sweepable("--gamma", default=1.0, callback=nonnegative, help="weight of the Laplacian")
@metric_options
@click.option("--potential", type=click.Choice(POTENTIALS), default="ric", show_default=True, help="V(r)")
@sweepable("--radius", default=1.0, callback=positive, help="sphere radius")
@sweepable("--lambda", "lam", default=1.0, callback=nonnegative, help="verdict: lambda1 >= (n - 1) lambda")
@sweepable("--tol", default=1e-6, callback=positive, help="verdict tolerance")
@grid_option(DEFAULT_GRID)
@click.option("--angular-check", is_flag=True, help="also solve on the first angular sector")
@click.pass_context
def spectrum(ctx, **params):
    """principal eigenvalue of -gamma Laplacian + V on a warped metric"""
    check_metric_options(params)
    return dispatch(ctx, "spectrum", params)


def run_spectrum(command, params, out_dir):
    n = params["n"]
    metric = load_metric(params, params["radius"])
    potential = build_potential(metric, params["potential"])
    result = principal_eigenvalue(SturmLiouvilleProblem(metric, params["gamma"], potential))

    threshold = (metric.n - 1) * params["lam"]
    passed = result.value >= threshold - params["tol"]
    payload = {"n": metric.n, "gamma": params["gamma"], "potential": params["potential"], **result.to_dict()}
    summary = f"n={n} gamma={params['gamma']:g} lambda1={result.value:.12g} threshold={threshold:.12g}"

    if params["angular_check"]:
        sector = principal_eigenvalue(SturmLiouvilleProblem(metric, params["gamma"], potential, sector=1))
        payload["sector1"] = sector.to_dict()
        radial_minimal = sector.value >= result.value - params["tol"]
        payload["radial_minimal"] = bool(radial_minimal)
        passed = passed and radial_minimal
        summary += f" sector1={sector.value:.12g}"

    schema.write_metric(out_dir / "metric.csv", metric)
    if params["potential"] == "ric":
        schema.write_curvature(out_dir / "curvature.csv", curvature_profile(metric))
    schema.write_field(out_dir / "eigenfunction.csv", result.eigenfunction, schema.EIGENFUNCTION)
    schema.write_json(out_dir / "spectrum.json", payload)
    return bool(passed), summary

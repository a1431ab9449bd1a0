import click
import numpy as np
from engine import schema
from engine.bounds import c_coefficient, grouping_identity_residual

from .options import bounded
from .run import dispatch

IDENTITY_TOL = 1e-12


@click.group(name="identity")
def identity():
    """algebraic identities behind the bounds"""


@identity.command(name="grouping")
@click.option("--samples", type=int, default=100000, show_default=True, callback=bounded(1), help="random tuples")
@click.option("--seed", type=int, default=0, show_default=True, help="random seed")
@click.pass_context
def grouping(ctx, **params):
    """completing-the-square identity for c(n, gamma) on random (n, gamma, h, Y) with 0 <= gamma <= 6 - n"""
    return dispatch(ctx, "identity.grouping", params)


def run_grouping(command, params, out_dir):
    rng = np.random.default_rng(params["seed"])
    count = params["samples"]
    n = rng.integers(3, 6, size=count)
    gamma = rng.uniform(0.0, 1.0, size=count) * (6 - n)
    h = rng.normal(size=count)
    Y = rng.normal(size=count)

    worst = 0.0
    for dim in (3, 4, 5):
        pick = n == dim
        if not np.any(pick):
            continue
        # gamma and (h, Y) broadcast together
        residual = grouping_identity_residual(dim, gamma[pick], h[pick], Y[pick])
        worst = max(worst, float(np.max(np.abs(residual) / (1 + h[pick] ** 2 + Y[pick] ** 2))))

    corners = {"c(4,2)": c_coefficient(4, 2), "c(3,3)": c_coefficient(3, 3), "c(5,1)": c_coefficient(5, 1)}
    passed = bool(
        worst <= IDENTITY_TOL
        and corners["c(4,2)"] == 0.5
        and abs(corners["c(3,3)"]) <= IDENTITY_TOL
        and abs(corners["c(5,1)"]) <= IDENTITY_TOL
    )
    schema.write_json(out_dir / "grouping.json", {"samples": count, "seed": params["seed"], "worst": worst, **corners})
    return passed, f"samples={count} worst={worst:.3e} c(4,2)={corners['c(4,2)']:g}"

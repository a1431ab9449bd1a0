"""
Periodic warped products S^1 x S^{n-1} with lambda_1(-gamma Laplacian + Ric) > 0 for gamma above (n - 1) / (n - 2).
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from engine.exceptions import RangeError, StageError, stage
from engine.geometry import (
    DEFAULT_GRID,
    ClosedForm,
    FieldKind,
    RadialField,
    Topology,
    WarpedMetric,
    curvature_profile,
    diameter_estimate,
    laplacian_radial,
    ric_min_field,
)
from engine.spectral import SturmLiouvilleProblem, coercivity_constant, principal_eigenvalue
from modules.report import Check, ConstructionReport, check_at_least, check_at_most

logger = logging.getLogger(__name__)

ID = "supercritical"

HALVINGS = 40

# positive 2 pi periodic profiles as (f, f', f'')
F_SPECS = {
    "cosine": ClosedForm(
        lambda r: 2 + np.cos(r),
        lambda r: -np.sin(r),
        lambda r: -np.cos(r),
    ),
    "cosine2": ClosedForm(
        lambda r: 3 + np.cos(2 * r),
        lambda r: -2 * np.sin(2 * r),
        lambda r: -4 * np.cos(2 * r),
    ),
}


def critical_gamma(n):
    return (n - 1) / (n - 2)


@dataclass(frozen=True)
class SupercriticalParams:
    n: int = field(default=3, metadata={"help": "dimension, at least 3"})
    gamma: float = field(default=2.5, metadata={"help": "spectral weight above (n-1)/(n-2)"})
    f_spec: str = field(default="cosine", metadata={"help": "periodic profile: " + ", ".join(F_SPECS)})
    epsilon: float = field(default=1.0, metadata={"help": "initial warp scale, halved until Ric(d_r, d_r) is minimal"})
    points: int = field(default=DEFAULT_GRID, metadata={"help": "grid points on one period"})

    def __post_init__(self):
        if self.n < 3:
            raise RangeError(f"the supercritical example needs n >= 3, got {self.n}")
        if self.gamma <= critical_gamma(self.n):
            raise RangeError(
                f"gamma = {self.gamma} does not exceed (n-1)/(n-2) = {critical_gamma(self.n):.6g}, "
                "the example proves nothing there"
            )
        if self.f_spec not in F_SPECS:
            raise RangeError(f"unknown profile '{self.f_spec}', use one of {', '.join(F_SPECS)}")
        if self.epsilon <= 0:
            raise RangeError(f"epsilon must be positive, got {self.epsilon}")
        if self.points < 64:
            raise RangeError(f"at least 64 grid points are needed, got {self.points}")


def _scaled(spec, epsilon):
    return ClosedForm(
        lambda r: epsilon * spec.w(r),
        lambda r: epsilon * spec.dw(r),
        lambda r: epsilon * spec.ddw(r),
    )


def _weight(spec, n, grid):
    """u = f^(2 - n) with its exact derivatives"""
    f, df, ddf = spec.w(grid), spec.dw(grid), spec.ddw(grid)
    k = 2 - n
    return RadialField(
        grid,
        f**k,
        FieldKind.WEIGHT,
        k * f ** (k - 1) * df,
        k * ((k - 1) * f ** (k - 2) * df**2 + f ** (k - 1) * ddf),
        source=lambda r: spec.w(r) ** k,
    )


def build_supercritical_example(params):
    n, gamma = params.n, params.gamma
    gamma0 = critical_gamma(n)
    spec = F_SPECS[params.f_spec]
    grid = np.linspace(0.0, 2 * math.pi, params.points)

    with stage("epsilon"):
        bending = float(np.max(spec.dw(grid) ** 2 - spec.w(grid) * spec.ddw(grid)))
        epsilon = params.epsilon
        for _ in range(HALVINGS):
            if epsilon**2 * bending <= 1:
                break
            epsilon /= 2
        else:
            raise StageError("epsilon", "no epsilon in the halving budget makes Ric(d_r, d_r) minimal")
        logger.info("epsilon = %.6g (max f'^2 - f f'' = %.6g)", epsilon, bending)

    with stage("warp"):
        closed = _scaled(spec, epsilon)
        warp = closed.w(grid)
        warp[-1] = warp[0]
        metric = WarpedMetric(n, grid, warp, Topology.PERIODIC, closed_form=closed, label=ID)
        u = _weight(spec, n, grid)

    with stage("verify"):
        curvature = curvature_profile(metric)
        lap = laplacian_radial(metric, u).values
        residual_identity = float(np.max(np.abs(-gamma0 * lap + curvature.ric_radial * u.values)) / np.max(u.values))
        radial_excess = float(np.max(curvature.ric_radial - curvature.ric_tangential))
        curvature_scale = max(1.0, float(np.max(np.abs(curvature.ric_radial))))
        lambda1 = principal_eigenvalue(SturmLiouvilleProblem(metric, gamma, ric_min_field(metric)))
        coercivity, coercivity_levels = coercivity_constant(metric, u, gamma - gamma0, gamma0 * np.min(u.values) ** 2)
        diameter = diameter_estimate(metric)
    logger.info("supercritical example: lambda1 %.9g, c(M) %.9g", lambda1.value, coercivity)

    parameters = {
        "n": n,
        "gamma": gamma,
        "gamma0": gamma0,
        "f_spec": params.f_spec,
        "epsilon": epsilon,
        "points": params.points,
        "coercivity": coercivity,
        "coercivity_levels": [level.lambda1 for level in coercivity_levels],
    }
    checks = [
        check_at_most("identity_residual", residual_identity, 1e-8),
        check_at_most("radial_ricci_excess", radial_excess, 1e-8 * curvature_scale),
        Check("coercivity", coercivity, 0.0, bool(coercivity > 0)),
        check_at_least("lambda1_above_coercivity", lambda1.value - coercivity, -1e-6),
        Check("lambda1", lambda1.value, 0.0, bool(lambda1.value > 0)),
    ]
    return ConstructionReport(ID, n, gamma, metric, u, parameters, residual_identity, lambda1, diameter, checks)

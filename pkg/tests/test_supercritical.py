import math

import numpy as np
import pytest
from engine.exceptions import RangeError
from engine.geometry import Topology, curvature_profile, laplacian_radial, ric_min_field
from engine.spectral import SturmLiouvilleProblem, coercivity_constant, principal_eigenvalue
from modules.supercritical.construction import (
    SupercriticalParams,
    build_supercritical_example,
    critical_gamma,
)


@pytest.fixture(scope="module")
def report():
    return build_supercritical_example(SupercriticalParams(n=3, gamma=2.5))


def test_critical_gamma():
    assert critical_gamma(3) == 2
    assert critical_gamma(5) == pytest.approx(4 / 3)


@pytest.mark.parametrize(
    "values", [{"n": 2}, {"gamma": 2.0}, {"gamma": 1.5}, {"f_spec": "sine"}, {"epsilon": 0.0}, {"points": 32}]
)
def test_params_validation(values):
    with pytest.raises(RangeError):
        SupercriticalParams(**values)


def test_report_passes(report):
    assert report.failed_checks == []
    assert report.lambda1.value > 0


def test_epsilon_is_halved_for_cosine(report):
    # max f'^2 - f f'' = 3 for f = 2 + cos r
    assert report.parameters["epsilon"] == 0.5


def test_metric_is_periodic(report):
    metric = report.metric
    assert metric.topology == Topology.PERIODIC
    assert metric.grid[-1] - metric.grid[0] == pytest.approx(2 * math.pi)
    assert metric.warp[0] == metric.warp[-1]


def test_weight_solves_critical_equation(report):
    metric, u = report.metric, report.u
    gamma0 = critical_gamma(metric.n)
    ric = curvature_profile(metric).ric_radial
    residual = -gamma0 * laplacian_radial(metric, u).values + ric * u.values
    assert np.max(np.abs(residual)) <= 1e-6


def test_radial_ricci_is_minimal(report):
    profile = curvature_profile(report.metric)
    assert np.all(profile.ric_radial <= profile.ric_tangential + 1e-8)


def test_lambda1_above_coercivity(report):
    coercivity = report.parameters["coercivity"]
    assert coercivity > 0
    assert report.lambda1.value >= coercivity - 1e-6


def test_coercivity_against_halved_grid(report):
    metric, u = report.metric, report.u
    gamma0 = critical_gamma(metric.n)
    alpha, beta = report.gamma - gamma0, gamma0 * np.min(u.values) ** 2
    fine, _ = coercivity_constant(metric, u, alpha, beta)
    coarse_metric = metric.resampled((metric.points + 1) // 2)
    coarse_u = type(u).from_function(coarse_metric.grid, u.source)
    coarse, _ = coercivity_constant(coarse_metric, coarse_u, alpha, beta)
    assert fine == pytest.approx(report.parameters["coercivity"], abs=1e-12)
    assert coarse == pytest.approx(fine, abs=1e-6)


@pytest.mark.parametrize("n,gamma", [(4, 2.0), (5, 1.5)])
def test_cosine2_profile(n, gamma):
    report = build_supercritical_example(SupercriticalParams(n=n, gamma=gamma, f_spec="cosine2", points=1025))
    assert report.passed
    assert report.lambda1.value > 0


def test_lambda1_is_monotone_in_gamma(report):
    metric = report.metric
    potential = ric_min_field(metric)
    values = [
        principal_eigenvalue(SturmLiouvilleProblem(metric, gamma, potential), levels=1).lambda1
        for gamma in (1.0, 2.0, 2.5, 3.0)
    ]
    assert all(a <= b + 1e-9 * max(1.0, abs(b)) for a, b in zip(values, values[1:]))
    assert values[0] >= np.min(potential.values) - 1e-9

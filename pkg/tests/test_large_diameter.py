import json
import math

import numpy as np
import pytest
from engine.exceptions import NoSolution, RangeError
from engine.geometry import Topology
from modules.large_diameter.construction import (
    Cutoff,
    LargeDiameterParams,
    build_large_diameter_metric,
    coupling_factor,
    coupling_residual,
    find_delta,
    solve_coupling_constants,
)
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


@pytest.fixture(scope="module")
def params():
    return LargeDiameterParams(n=5, gamma=1.25, L=10.0)


@pytest.fixture(scope="module")
def report(params):
    return build_large_diameter_metric(params)


def q_oracle(params, a, b, delta):
    """Q(2 delta) of Q' = -(n-1) - Q^2/(n-1) - K eta^2 b^2 - eta b Q with Q(delta) = -(n-1) tan(delta)"""
    n = params.n
    K = coupling_factor(n, params.gamma)
    cutoff = Cutoff(delta, math.inf, model=params.eta0)

    def rhs(s, q):
        eta = float(cutoff(s))
        return [-(n - 1) - q[0] ** 2 / (n - 1) - K * (eta * b) ** 2 - eta * b * q[0]]

    sol = solve_ivp(rhs, (delta, 2 * delta), [-(n - 1) * math.tan(delta)], method="RK45", rtol=1e-12, atol=1e-12)
    return float(sol.y[0, -1])


@pytest.mark.parametrize("n,gamma", [(5, 1.25), (4, 1.4), (6, 1.2), (5, 4 / 3)])
def test_coupling_constants(n, gamma):
    a, b = solve_coupling_constants(n, gamma)
    assert a > 0 and b > 0
    assert abs(coupling_residual(n, gamma, a, b)) <= 1e-12 * max(1.0, a * b)


def test_coupling_constants_need_gamma_above_threshold():
    with pytest.raises(NoSolution):
        solve_coupling_constants(5, 1.0)
    with pytest.raises(NoSolution):
        solve_coupling_constants(4, 4 / 3)
    with pytest.raises(RangeError):
        solve_coupling_constants(3, 1.9)


@pytest.mark.parametrize(
    "values",
    [{"n": 3, "gamma": 1.9}, {"gamma": 1.0}, {"gamma": 1.5}, {"L": 0.0}, {"eta0": "cubic"}, {"collar": 1.0}],
)
def test_params_validation(values):
    with pytest.raises(RangeError):
        LargeDiameterParams(**values)


def test_cutoff_shape():
    cutoff = Cutoff(0.5, 10.0, 2.0)
    r = np.array([0.0, 0.5, 1.0, 5.0, -5.0, 10.0, 12.0, 20.0])
    assert np.allclose(cutoff(r), [0, 0, 1, 1, 1, 1, 0, 0])
    assert 0 < float(cutoff(0.75)) < 1
    assert float(cutoff(0.75)) == pytest.approx(0.5)
    assert float(cutoff(11.0)) == pytest.approx(0.5)
    assert float(cutoff.derivative(0.75)) > 0
    assert float(cutoff.derivative(11.0)) < 0


def test_delta_against_independent_integration(params):
    a, b = solve_coupling_constants(params.n, params.gamma)
    search = find_delta(params, a, b)
    assert 0 < search.delta < search.delta0
    assert search.residual <= params.delta_search_tol
    assert q_oracle(params, a, b, search.delta) == pytest.approx(-a, abs=1e-6)
    assert search.Q[0] == 0
    assert search.Q[-1] == pytest.approx(-a, abs=params.delta_search_tol)


def test_delta_reproduced_by_independent_search(params):
    a, b = solve_coupling_constants(params.n, params.gamma)
    search = find_delta(params, a, b)
    lo, hi = 0.5 * search.delta, search.delta + 0.5 * (search.delta0 - search.delta)
    oracle = brentq(lambda delta: q_oracle(params, a, b, delta) + a, lo, hi, xtol=1e-13)
    assert search.delta == pytest.approx(oracle, abs=1e-8)


def test_report_passes(report):
    assert report.failed_checks == []
    assert report.passed


def test_metric_shape(report, params):
    metric = report.metric
    assert metric.topology == Topology.TWO_CAPS
    assert metric.points == params.points
    assert np.allclose(metric.warp, metric.warp[::-1], atol=1e-12 * np.max(metric.warp))
    assert np.allclose(metric.grid, -metric.grid[::-1])


def test_diameter_exceeds_twice_L(report, params):
    assert report.diameter.value > 2 * params.L
    assert report.parameters["r0"] > params.L + report.parameters["mu"]


def test_spectral_lower_bound(report, params):
    assert report.lambda1.value >= params.n - 1 - 1e-3


def test_identity_residual(report):
    assert report.residual_identity <= 1e-6


def test_weight_and_plateau(report, params):
    grid = report.metric.grid
    u = report.u.values
    p = report.parameters
    assert np.all(u > 0)
    assert np.max(u) == pytest.approx(1.0)
    assert u[len(u) // 2] == pytest.approx(np.min(u))
    assert np.allclose(u[np.abs(grid) >= params.L + p["mu"]], 1.0, rtol=1e-12)

    tol = 10 * params.ode_tol * max(1.0, p["a"])
    Q = report.arrays["Q"]
    plateau = (grid >= 2 * p["delta"]) & (grid <= params.L)
    assert np.any(plateau)
    assert np.max(np.abs(Q[plateau] + p["a"])) <= tol
    mirrored = (grid <= -2 * p["delta"]) & (grid >= -params.L)
    assert np.max(np.abs(Q[mirrored] - p["a"])) <= tol


def test_fields_are_symmetric(report):
    arrays = report.arrays
    for name in ("u", "f"):
        values = arrays[name]
        assert np.allclose(values, values[::-1], rtol=1e-12, atol=1e-12 * np.max(np.abs(values)))
    for name in ("Q", "h"):
        values = arrays[name]
        assert np.allclose(values, -values[::-1], rtol=1e-12, atol=1e-12 * np.max(np.abs(values)))


def test_q_vanishes_as_delta_shrinks(params):
    a, b = solve_coupling_constants(params.n, params.gamma)
    ends = [abs(q_oracle(params, a, b, delta)) for delta in (1e-2, 1e-3, 1e-4)]
    assert ends[0] > ends[1] > ends[2]
    assert ends[2] <= 1e-3 * params.n * max(1.0, b**2)


def test_report_files(report, tmp_path):
    report.write(tmp_path)
    for name in ("metric.csv", "metric.json", "u.csv", "eigenfunction.csv", "profiles.csv", "report.json"):
        assert (tmp_path / name).is_file()
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["construction"] == "large-diameter"
    assert payload["passed"] is True
    markdown = (tmp_path / "report.md").read_text()
    assert markdown.startswith("# large-diameter (n = 5, gamma = 1.25)")
    assert "All checks passed." in markdown

import math

import numpy as np
import pytest
from engine.exceptions import GridMismatch, RangeError
from engine.geometry import FieldKind, RadialField, ric_min_field, round_sphere
from engine.spectral import (
    SturmLiouvilleProblem,
    principal_eigenvalue,
    rayleigh_quotient,
    spectral_residual,
    verify_spectral_condition,
)
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


def cos2_potential(grid):
    return RadialField.from_function(grid, lambda r: -2 * np.cos(2 * r), FieldKind.POTENTIAL)


def shooting_eigenvalue(n, gamma, potential, start=1e-5):
    """
    Ground state of -gamma (y'' + (n - 1) cot(r) y') + V y = lam y on the round sphere for a potential symmetric
    about the equator: shoot from the pole and ask for y'(pi / 2) = 0.
    """

    def slope_at_equator(lam):
        curvature = (potential(0.0) - lam) / (gamma * n)

        def rhs(r, y):
            return [y[1], (potential(r) - lam) / gamma * y[0] - (n - 1) / math.tan(r) * y[1]]

        y0 = [1 + 0.5 * curvature * start**2, curvature * start]
        sol = solve_ivp(rhs, (start, math.pi / 2), y0, method="DOP853", rtol=1e-12, atol=1e-14)
        return sol.y[1, -1]

    return brentq(slope_at_equator, -2.5, 2.0, xtol=1e-13)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_sphere_with_ricci_potential(gamma):
    n = 4
    metric = round_sphere(n, 1025)
    result = principal_eigenvalue(SturmLiouvilleProblem(metric, gamma, ric_min_field(metric)))
    assert result.value == pytest.approx(n - 1, abs=1e-8)
    phi = result.eigenfunction.values
    assert np.allclose(phi / phi[0], 1.0, atol=1e-6)


def test_sphere_without_potential(sphere):
    zero = RadialField.constant(sphere.grid, 0.0, FieldKind.POTENTIAL)
    assert principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, zero)).value == pytest.approx(0, abs=1e-10)


def test_cos2_potential_against_shooting(sphere):
    result = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, cos2_potential(sphere.grid)))
    expected = shooting_eigenvalue(3, 1.0, lambda r: -2 * math.cos(2 * r))
    assert result.value == pytest.approx(expected, abs=1e-6)
    assert len(result.grid_levels) == 3


def test_eigenfunction_is_positive(sphere):
    result = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, cos2_potential(sphere.grid)))
    assert np.all(result.eigenfunction.values > 0)


def test_rayleigh_quotient(sphere):
    n = sphere.n
    constant = RadialField.constant(sphere.grid, 1.0)
    potential = RadialField.constant(sphere.grid, 2.5, FieldKind.POTENTIAL)
    assert rayleigh_quotient(SturmLiouvilleProblem(sphere, 1.0, potential), constant) == pytest.approx(2.5)

    zero = RadialField.constant(sphere.grid, 0.0, FieldKind.POTENTIAL)
    harmonic = RadialField(sphere.grid, np.cos(sphere.grid))
    assert rayleigh_quotient(SturmLiouvilleProblem(sphere, 1.0, zero), harmonic) == pytest.approx(n, rel=1e-4)


def test_rayleigh_quotient_of_eigenfunction(sphere):
    problem = SturmLiouvilleProblem(sphere, 1.0, cos2_potential(sphere.grid))
    result = principal_eigenvalue(problem, levels=1)
    assert rayleigh_quotient(problem, result.eigenfunction) == pytest.approx(result.lambda1, rel=1e-9)


def test_angular_sector_lies_above_radial(sphere):
    potential = cos2_potential(sphere.grid)
    radial = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, potential))
    sector = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, potential, sector=1))
    assert sector.value > radial.value


@pytest.mark.parametrize("lam", [1.0, 4.0])
def test_spectral_condition_on_sphere_of_radius_lambda(lam):
    metric = round_sphere(3, 1025, radius=1 / math.sqrt(lam))
    u = RadialField.constant(metric.grid, 1.0)
    check = verify_spectral_condition(metric, u, 1.0, lam)
    assert check.holds
    assert abs(check.worst_residual) < 1e-8


def test_spectral_condition_fails_for_larger_lambda(sphere, unit_weight):
    check = verify_spectral_condition(sphere, unit_weight, 1.0, 1.5)
    assert not check.holds
    assert check.worst_residual == pytest.approx(-1.0, abs=1e-8)
    assert np.allclose(spectral_residual(sphere, unit_weight, 1.0, 1.5).values, -1.0, atol=1e-8)


def test_problem_validation(sphere):
    potential = RadialField.constant(sphere.grid, 0.0, FieldKind.POTENTIAL)
    with pytest.raises(RangeError):
        SturmLiouvilleProblem(sphere, -1.0, potential)
    with pytest.raises(GridMismatch):
        SturmLiouvilleProblem(sphere, 1.0, RadialField.constant(np.linspace(0, 1, 9), 0.0, FieldKind.POTENTIAL))


def test_zero_gamma_is_degenerate(sphere):
    result = principal_eigenvalue(SturmLiouvilleProblem(sphere, 0.0, cos2_potential(sphere.grid)))
    assert result.method == "degenerate"
    assert result.lambda1 == pytest.approx(-2.0)
    assert result.grid_levels == []
    assert result.extrapolated is None and result.observed_order is None
    assert result.to_dict()["method"] == "degenerate"


def test_two_cap_result_is_sturm(sphere):
    result = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, cos2_potential(sphere.grid)))
    assert result.method == "sturm"
    assert [level.points for level in result.grid_levels] == sorted(level.points for level in result.grid_levels)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sphere_eigenvalue_on_fine_grid(n):
    metric = round_sphere(n, 4097)
    potential = ric_min_field(metric)
    for gamma in (0.0, 1.0, (n - 1) / (n - 2)):
        result = principal_eigenvalue(SturmLiouvilleProblem(metric, gamma, potential))
        assert result.value == pytest.approx(n - 1, abs=1e-6)
        for level in result.grid_levels:
            assert level.lambda1 == pytest.approx(n - 1, abs=1e-6)


def test_observed_order_is_two():
    metric = round_sphere(3, 513)
    result = principal_eigenvalue(SturmLiouvilleProblem(metric, 1.0, cos2_potential(metric.grid)))
    assert len(result.grid_levels) == 3
    assert 1.6 <= result.observed_order <= 2.4


def test_eigenvalue_is_monotone_in_potential(sphere):
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b, c = rng.uniform(-1, 1, 3)
        d, k = rng.uniform(0.01, 1.0), int(rng.integers(1, 4))
        lower = RadialField.from_function(
            sphere.grid, lambda r: a + b * np.cos(r) + c * np.cos(2 * r), FieldKind.POTENTIAL
        )
        upper = RadialField(sphere.grid, lower.values + d * (1 + np.cos(k * sphere.grid)), FieldKind.POTENTIAL)
        low = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, lower), levels=1).lambda1
        high = principal_eigenvalue(SturmLiouvilleProblem(sphere, 1.0, upper), levels=1).lambda1
        assert low <= high + 1e-10


def test_eigenvalue_is_monotone_in_gamma(sphere):
    potential = cos2_potential(sphere.grid)
    values = [
        principal_eigenvalue(SturmLiouvilleProblem(sphere, gamma, potential), levels=1).lambda1
        for gamma in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)
    ]
    assert values[0] == pytest.approx(np.min(potential.values))
    assert all(a <= b + 1e-10 for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("scale", [0.1, 3.0, 10.0])
def test_spectral_condition_is_scale_invariant(sphere, scale):
    u = RadialField.from_function(
        sphere.grid, lambda r: 3 + np.cos(r), dfn=lambda r: -np.sin(r), ddfn=lambda r: -np.cos(r)
    )
    outcomes = []
    for lam in (0.25, 1.5):
        base = verify_spectral_condition(sphere, u, 0.5, lam, tol=0.0)
        check = verify_spectral_condition(sphere, u.scaled(scale), 0.5, lam, tol=0.0)
        outcomes.append(check.holds)
        assert check.holds == base.holds
        assert check.location == base.location
        assert check.worst_residual == pytest.approx(scale * base.worst_residual, rel=1e-12, abs=1e-15)
    assert outcomes == [True, False]

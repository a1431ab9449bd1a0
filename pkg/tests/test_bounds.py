import math

import numpy as np
import pytest
from engine.bounds import (
    BoundKind,
    barrier_constants,
    barrier_profile,
    c_coefficient,
    diameter_bound_rhs,
    diameter_verdict,
    gamma_range_check,
    grouping_identity_residual,
    sharp_gamma_max,
    volume_bound_rhs,
    volume_verdict,
)
from engine.exceptions import RangeError
from engine.geometry import RadialField, round_sphere


@pytest.mark.parametrize("gamma", [0.0, 1.0, 2.0])
def test_diameter_bound_in_dimension_three(gamma):
    assert diameter_bound_rhs(3, gamma, 1.0, 5.0, 0.2) == pytest.approx(math.pi)


def test_diameter_bound_values():
    assert diameter_bound_rhs(4, 0.0, 4.0, 3.0, 1.0) == pytest.approx(math.pi / 2)
    assert diameter_bound_rhs(5, 1.0, 1.0, math.e, 1.0) == pytest.approx(math.pi * math.sqrt(math.e))


def test_diameter_bound_refuses_gamma_outside_sharp_range():
    with pytest.raises(RangeError):
        diameter_bound_rhs(4, 2.0, 1.0, 1.0, 1.0)
    with pytest.raises(RangeError):
        diameter_bound_rhs(4, -0.1, 1.0, 1.0, 1.0)


def test_volume_bound():
    assert volume_bound_rhs(2, 1.0) == pytest.approx(4 * math.pi)
    assert volume_bound_rhs(3, 1.0) == pytest.approx(2 * math.pi**2)
    assert volume_bound_rhs(3, 4.0) == pytest.approx(2 * math.pi**2 / 8)


@pytest.mark.parametrize("lam", [1.0, 0.25, 4.0])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_round_sphere_is_rigid(n, lam):
    metric = round_sphere(n, radius=1 / math.sqrt(lam))
    verdict = volume_verdict(metric, lam)
    assert verdict.kind == BoundKind.VOLUME
    assert verdict.rigid
    assert verdict.holds
    assert abs(verdict.slack) <= 1e-6 * verdict.rhs

    u = RadialField.constant(metric.grid, 1.0)
    diameter = diameter_verdict(metric, u, 1.0, lam)
    assert diameter.rigid
    assert diameter.holds
    assert diameter.lhs == pytest.approx(math.pi / math.sqrt(lam))


def test_small_sphere_has_slack():
    metric = round_sphere(3, radius=0.5)
    verdict = volume_verdict(metric, 1.0)
    assert verdict.holds
    assert not verdict.rigid
    assert verdict.slack == pytest.approx(2 * math.pi**2 * (1 - 0.125))
    assert verdict.as_row()["kind"] == "volume"


def test_c_coefficient():
    assert c_coefficient(3, 1.0) == pytest.approx(2 / 3)
    assert c_coefficient(4, 2.0) == 0.5
    assert c_coefficient(3, 3.0) == pytest.approx(0.0)
    assert c_coefficient(5, 1.0) == pytest.approx(0.0)
    assert c_coefficient(4, 1.0) == pytest.approx(0.5)
    with pytest.raises(RangeError):
        c_coefficient(6, 0.0)
    with pytest.raises(RangeError):
        c_coefficient(3, 3.5)


def test_grouping_identity():
    assert grouping_identity_residual(3, 1.0, 1.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    for n in (3, 4, 5):
        h = np.linspace(-3, 3, 13)
        assert np.allclose(grouping_identity_residual(n, 0.0, h, 0.0), 0.0, atol=1e-14)


@pytest.mark.parametrize("n,gamma", [(3, 1.0), (3, 2.5), (4, 1.5), (5, 0.5)])
def test_grouping_identity_at_vertex(n, gamma):
    h = np.linspace(-2, 2, 9)
    Y = (4 - n) * h / (4 - (n - 2) * gamma)
    lhs_only = grouping_identity_residual(n, gamma, h, Y)
    assert np.allclose(lhs_only, 0.0, atol=1e-13)


def test_grouping_identity_random():
    rng = np.random.default_rng(7)
    h, Y = rng.normal(size=(2, 1000))
    for n, gamma in [(3, 0.3), (4, 1.9), (5, 0.9)]:
        assert np.max(np.abs(grouping_identity_residual(n, gamma, h, Y))) < 1e-12


@pytest.mark.parametrize(
    "n,gamma,expected",
    [(3, 2.0, (True, True)), (5, 1.3, (True, False)), (4, 2.0, (False, False)), (5, 0.5, (True, True))],
)
def test_gamma_range(n, gamma, expected):
    assert tuple(gamma_range_check(n, gamma)) == expected


def test_sharp_gamma_max():
    assert sharp_gamma_max(3) == 2
    assert sharp_gamma_max(5) == pytest.approx(4 / 3)


@pytest.mark.parametrize("n,gamma,ratio", [(3, 1.0, 2.0), (5, 1.0, math.e), (6, 1.1, 3.0)])
def test_barrier_reach_is_the_diameter_bound(n, gamma, ratio):
    C, D = barrier_constants(n, gamma, 2.0, ratio, 1.0)
    assert math.pi / math.sqrt(C * D) == pytest.approx(diameter_bound_rhs(n, gamma, 2.0, ratio, 1.0))


def test_barrier_profile_solves_riccati():
    constants = barrier_constants(5, 1.0, 1.0, 2.0, 1.0)
    C, D = constants
    reach = math.pi / math.sqrt(C * D)
    d = np.linspace(0.1, 0.9, 9) * reach
    step = 1e-6
    h = barrier_profile(constants, d)
    slope = (barrier_profile(constants, d + step) - barrier_profile(constants, d - step)) / (2 * step)
    assert np.allclose(slope, -(C * h**2 + D), rtol=1e-6)
    with pytest.raises(RangeError):
        barrier_profile(constants, [reach])

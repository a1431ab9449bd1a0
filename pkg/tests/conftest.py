import math

import numpy as np
import pytest
from engine.geometry import ClosedForm, RadialField, Topology, WarpedMetric, round_sphere


def cylinder(n, closed, lo, hi, points=2001):
    """CYLINDER metric dr^2 + w^2 g on [lo, hi] from a closed-form positive warp"""
    grid = np.linspace(lo, hi, points)
    return WarpedMetric(n, grid, closed.w(grid), Topology.CYLINDER, closed_form=closed)


def sphere_volume(n):
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


@pytest.fixture
def sphere():
    return round_sphere(3)


@pytest.fixture
def unit_weight(sphere):
    return RadialField.constant(sphere.grid, 1.0)


@pytest.fixture
def euclidean():
    return cylinder(4, ClosedForm(lambda r: r, np.ones_like, np.zeros_like), 0.5, 2.0)


@pytest.fixture
def hyperbolic():
    return cylinder(4, ClosedForm(np.sinh, np.cosh, np.sinh), 0.5, 2.0)

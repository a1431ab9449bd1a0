"""
Closed-form sharp bounds, the c(n, gamma) coefficient and the verdicts comparing measured metrics against them.
"""
import math
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import RangeError
from .geometry import diameter_estimate, vol_round_ball, vol_round_sphere, weighted_volume  # noqa: F401

RIGIDITY_RTOL = 1e-6

GammaRange = namedtuple("GammaRange", ["sharp", "universal_diameter"])
BarrierConstants = namedtuple("BarrierConstants", ["C", "D"])


class BoundKind(Enum):
    DIAMETER = "diameter"
    VOLUME = "volume"


@dataclass(frozen=True)
class BoundVerdict:
    kind: BoundKind
    lhs: float
    rhs: float
    slack: float
    rigid: bool
    exact: bool = True

    @classmethod
    def compare(cls, kind, lhs, rhs, rtol=RIGIDITY_RTOL, exact=True):
        slack = rhs - lhs
        return cls(kind, float(lhs), float(rhs), float(slack), bool(abs(slack) <= rtol * abs(rhs)), exact)

    @property
    def holds(self):
        return self.slack >= -RIGIDITY_RTOL * abs(self.rhs)

    def as_row(self):
        return {"kind": self.kind.value, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "rigid": self.rigid}


def sharp_gamma_max(n):
    return (n - 1) / (n - 2)


def _check_sharp_range(n, gamma):
    if n < 3:
        raise RangeError(f"the spectral bounds need n >= 3, got {n}")
    if not 0 <= gamma <= sharp_gamma_max(n):
        raise RangeError(f"gamma = {gamma} is outside the sharp range [0, {sharp_gamma_max(n):.6g}] for n = {n}")


def diameter_bound_rhs(n, gamma, lam, u_max, u_min):
    """pi / sqrt(lam) * (u_max / u_min)^(gamma (n - 3) / (n - 1))"""
    _check_sharp_range(n, gamma)
    if lam <= 0:
        raise RangeError(f"lambda must be positive, got {lam}")
    if not u_max >= u_min > 0:
        raise RangeError(f"need u_max >= u_min > 0, got u_max = {u_max}, u_min = {u_min}")
    exponent = gamma * (n - 3) / (n - 1)
    return math.pi / math.sqrt(lam) * (u_max / u_min) ** exponent


def volume_bound_rhs(n, lam):
    if lam <= 0:
        raise RangeError(f"lambda must be positive, got {lam}")
    return lam ** (-n / 2) * vol_round_sphere(n)


def volume_verdict(metric, lam, rtol=RIGIDITY_RTOL):
    """measured volume against lam^(-n/2) vol(S^n); rigid flags the round sphere equality case"""
    return BoundVerdict.compare(BoundKind.VOLUME, weighted_volume(metric), volume_bound_rhs(metric.n, lam), rtol)


def diameter_verdict(metric, u, gamma, lam, rtol=RIGIDITY_RTOL):
    rhs = diameter_bound_rhs(metric.n, gamma, lam, float(np.max(u.values)), float(np.min(u.values)))
    estimate = diameter_estimate(metric)
    return BoundVerdict.compare(BoundKind.DIAMETER, estimate.value, rhs, rtol, exact=estimate.exact)


def c_coefficient(n, gamma):
    """c(n, gamma) = (6 - n) / 4 - (4 - n)^2 gamma / (4 (4 - (n - 2) gamma)), with c(4, 2) = 1/2"""
    if not 3 <= n <= 5:
        raise RangeError(f"c(n, gamma) is defined for 3 <= n <= 5, got n = {n}")
    if n == 4 and gamma == 2:
        return 0.5
    if not 0 <= gamma <= 6 - n:
        raise RangeError(f"c(n, gamma) needs 0 <= gamma <= {6 - n} for n = {n}, got {gamma}")
    return _c_formula(n, gamma)


def _c_formula(n, gamma):
    denominator = 4 - (n - 2) * gamma
    if np.any(denominator == 0):
        raise RangeError(f"4 - (n - 2) gamma vanishes for n = {n}, gamma = {gamma}")
    return (6 - n) / 4 - (4 - n) ** 2 * gamma / (4 * denominator)


def grouping_identity_residual(n, gamma, h, Y):
    """
    Difference of the two sides of the completing-the-square identity behind c(n, gamma). Vectorized over h, Y.
    """
    h = np.asarray(h, dtype=float)
    Y = np.asarray(Y, dtype=float)
    c = _c_formula(n, gamma)
    A = gamma - (n - 2) * gamma**2 / 4
    lhs = (6 - n) / 4 * h**2 - (4 - n) / 2 * gamma * h * Y + A * Y**2
    rhs = c * h**2 + A * ((4 - n) * h / (4 - (n - 2) * gamma) - Y) ** 2
    return lhs - rhs


def gamma_range_check(n, gamma):
    if n < 3:
        raise RangeError(f"gamma ranges are stated for n >= 3, got {n}")
    sharp = 0 <= gamma <= sharp_gamma_max(n)
    if n == 3:
        universal = 0 <= gamma <= 2
    else:
        universal = 0 <= gamma < 4 / (n - 1)
    return GammaRange(sharp, universal)


def barrier_constants(n, gamma, lam, u_max, u_min):
    """
    Constants of the Riccati barrier |h'| < C h^2 + D for a bounded weight; pi / sqrt(C D) is the diameter bound.
    """
    _check_sharp_range(n, gamma)
    if lam <= 0 or not u_max >= u_min > 0:
        raise RangeError("barrier constants need lambda > 0 and u_max >= u_min > 0")
    alpha = 2 * gamma / (n - 1)
    C = u_max ** (2 * alpha - 2 * gamma) / ((n - 1) * u_min ** (alpha - gamma))
    D = (n - 1) * lam / u_min ** (alpha - gamma)
    return BarrierConstants(C, D)


def barrier_profile(constants, d):
    """h(d) = sqrt(D / C) cot(sqrt(C D) d) on 0 < d < pi / sqrt(C D); solves h' = -(C h^2 + D)"""
    C, D = constants
    d = np.asarray(d, dtype=float)
    reach = math.pi / math.sqrt(C * D)
    if np.any(d <= 0) or np.any(d >= reach):
        raise RangeError(f"barrier distance must lie in (0, {reach:.6g})")
    return math.sqrt(D / C) / np.tan(math.sqrt(C * D) * d)

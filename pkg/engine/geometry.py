"""
Rotationally symmetric metrics dr^2 + w(r)^2 g_{S^{n-1}} and the radial quantities derived from them.
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum

import numpy as np
from cached_property import cached_property
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline
from scipy.signal import savgol_filter
from scipy.special import gamma as gamma_fn

from .exceptions import ConeSingularity, GridMismatch, RangeError, WarplabError

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096

# |w'| at a cap may differ from 1 by this much before the cap counts as a cone point
CONE_TOL = 1e-4

# number of reflected samples used to extend splines across a cap
_REFLECT = 8

# Savitzky-Golay half window and polynomial order for derivatives of sampled warps
SMOOTH_HALF = 16
SMOOTH_ORDER = 6

# near a pole, curvature of a sampled warp comes from an even fit over this fraction of the meridian
CAP_BAND = 0.05
CAP_DEGREE = 6
CAP_MIN_SAMPLES = 16

_GAUSS_NODES, _GAUSS_WEIGHTS = leggauss(3)

ClosedForm = namedtuple("ClosedForm", ["w", "dw", "ddw"])
DiameterEstimate = namedtuple("DiameterEstimate", ["value", "exact"])


class Topology(Enum):
    TWO_CAPS = "two_caps"
    PERIODIC = "periodic"
    CYLINDER = "cylinder"


class FieldKind(Enum):
    WEIGHT = "weight"
    POTENTIAL = "potential"
    EIGENFUNCTION = "eigenfunction"
    GENERIC = "generic"


def vol_round_sphere(n):
    """volume of the unit n-sphere"""
    if n < 0:
        raise RangeError(f"sphere dimension must be >= 0, got {n}")
    return 2 * math.pi ** ((n + 1) / 2) / gamma_fn((n + 1) / 2)


def vol_round_ball(n):
    """volume of the unit ball in R^n"""
    if n < 1:
        raise RangeError(f"ball dimension must be >= 1, got {n}")
    return math.pi ** (n / 2) / gamma_fn(n / 2 + 1)


def _reflected_spline(grid, values, topology, odd):
    """
    C^2 spline through (grid, values). Across a cap the samples are mirrored about the pole (odd for the warp,
    even for radial fields) so the spline sees the smooth extension instead of a one-sided boundary.
    """
    if topology == Topology.PERIODIC:
        closed = values.copy()
        closed[-1] = closed[0]
        return CubicSpline(grid, closed, bc_type="periodic")
    if topology == Topology.CYLINDER:
        return CubicSpline(grid, values)

    sign = -1.0 if odd else 1.0
    m = min(_REFLECT, len(grid) - 1)
    left_r = 2 * grid[0] - grid[1 : m + 1][::-1]
    left_v = sign * values[1 : m + 1][::-1]
    right_r = 2 * grid[-1] - grid[-m - 1 : -1][::-1]
    right_v = sign * values[-m - 1 : -1][::-1]
    return CubicSpline(np.concatenate([left_r, grid, right_r]), np.concatenate([left_v, values, right_v]))


def _uniform_step(grid):
    steps = np.diff(grid)
    h = float(steps.mean())
    return h if np.allclose(steps, h, rtol=1e-9, atol=0.0) else None


def _smoothed_derivatives(grid, values, topology, odd):
    """
    First and second derivatives on a uniform grid from local least-squares polynomials (Savitzky-Golay). Samples are
    mirrored across a cap and wrapped across a period, as for the splines. None when the grid is not uniform or too
    short for one window.
    """
    h = _uniform_step(grid)
    window = 2 * SMOOTH_HALF + 1
    if h is None or len(grid) <= window:
        return None

    def derive(samples, mode):
        return [savgol_filter(samples, window, SMOOTH_ORDER, deriv=k, delta=h, mode=mode) for k in (1, 2)]

    if topology == Topology.PERIODIC:
        d1, d2 = derive(values[:-1], "wrap")
        return np.append(d1, d1[0]), np.append(d2, d2[0])
    if topology == Topology.CYLINDER:
        d1, d2 = derive(values, "interp")
        return d1, d2

    m = SMOOTH_HALF
    sign = -1.0 if odd else 1.0
    extended = np.concatenate([sign * values[1 : m + 1][::-1], values, sign * values[-m - 1 : -1][::-1]])
    d1, d2 = derive(extended, "interp")
    return d1[m:-m], d2[m:-m]


@dataclass(frozen=True, eq=False)
class WarpedMetric:
    n: int
    grid: np.ndarray
    warp: np.ndarray
    topology: Topology = Topology.TWO_CAPS
    closed_form: ClosedForm = None
    dwarp: np.ndarray = None
    ddwarp: np.ndarray = None
    label: str = ""

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        warp = np.asarray(self.warp, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "warp", warp)
        object.__setattr__(self, "topology", Topology(self.topology))

        if self.n < 2:
            raise RangeError(f"dimension must be >= 2, got {self.n}")
        if grid.ndim != 1 or grid.shape != warp.shape:
            raise GridMismatch(f"grid {grid.shape} and warp {warp.shape} must be 1d and of equal length")
        if len(grid) < 5:
            raise GridMismatch("a metric needs at least 5 grid points")
        if not np.all(np.diff(grid) > 0):
            raise GridMismatch("grid must be strictly increasing")
        for name in ("dwarp", "ddwarp"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                if arr.shape != grid.shape:
                    raise GridMismatch(f"{name} must match the grid")
                object.__setattr__(self, name, arr)
        if not np.all(np.isfinite(warp)):
            raise WarplabError("warp samples must be finite")

        scale = np.max(np.abs(warp))
        if self.topology == Topology.TWO_CAPS:
            if abs(warp[0]) > 1e-12 * scale or abs(warp[-1]) > 1e-12 * scale:
                raise WarplabError("a two-cap metric needs w = 0 at both ends")
            interior = warp[1:-1]
        else:
            interior = warp
        if not np.all(interior > 0):
            raise WarplabError("warp must be positive away from the caps")
        if self.topology == Topology.PERIODIC and abs(warp[0] - warp[-1]) > 1e-10 * scale:
            raise WarplabError("a periodic warp must repeat at the end of its period")

    @property
    def length(self):
        return self.grid[-1] - self.grid[0]

    @property
    def points(self):
        return len(self.grid)

    @property
    def sampled(self):
        """whether curvature has to come from the warp samples alone"""
        return self.closed_form is None and (self.dwarp is None or self.ddwarp is None)

    @cached_property
    def spline(self):
        return _reflected_spline(self.grid, self.warp, self.topology, odd=True)

    @cached_property
    def grid_derivatives(self):
        """(w', w'') at the grid for sampled metrics, least-squares smoothed where the grid is uniform"""
        smoothed = _smoothed_derivatives(self.grid, self.warp, self.topology, odd=True)
        if smoothed is not None:
            return smoothed
        return self.spline(self.grid, 1), self.spline(self.grid, 2)

    def evaluate(self, r=None):
        """
        (w, w', w'') at r, or at the grid when r is None.
        """
        if self.closed_form is not None:
            at = self.grid if r is None else np.asarray(r, dtype=float)
            return self.closed_form.w(at), self.closed_form.dw(at), self.closed_form.ddw(at)
        if r is None and self.dwarp is not None and self.ddwarp is not None:
            return self.warp, self.dwarp, self.ddwarp
        if r is None:
            dw, ddw = self.grid_derivatives
            return self.warp, dw, ddw
        at = np.asarray(r, dtype=float)
        spline = self.spline
        return spline(at), spline(at, 1), spline(at, 2)

    def warp_at(self, r):
        r = np.asarray(r, dtype=float)
        if self.closed_form is not None:
            return self.closed_form.w(r)
        return self.spline(r)

    def same_grid(self, grid):
        grid = np.asarray(grid)
        return grid.shape == self.grid.shape and np.array_equal(grid, self.grid)

    def resampled(self, points):
        """same metric on a uniform grid with `points` samples"""
        grid = np.linspace(self.grid[0], self.grid[-1], points)
        warp = self.warp_at(grid)
        if self.topology == Topology.TWO_CAPS:
            warp[0] = warp[-1] = 0.0
        elif self.topology == Topology.PERIODIC:
            warp[-1] = warp[0]
        return WarpedMetric(self.n, grid, warp, self.topology, closed_form=self.closed_form, label=self.label)


@dataclass(frozen=True, eq=False)
class RadialField:
    grid: np.ndarray
    values: np.ndarray
    kind: FieldKind = FieldKind.GENERIC
    d1: np.ndarray = None
    d2: np.ndarray = None
    source: object = None  # optional callable r -> values, used when resampling

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if self.values.shape != self.grid.shape:
            raise GridMismatch(f"field of length {len(self.values)} on a grid of length {len(self.grid)}")
        for name in ("d1", "d2"):
            arr = getattr(self, name)
            if arr is not None:
                object.__setattr__(self, name, np.asarray(arr, dtype=float))
        if self.kind == FieldKind.WEIGHT and not np.all(self.values > 0):
            raise WarplabError("weight fields must be strictly positive")

    @classmethod
    def constant(cls, grid, value, kind=FieldKind.WEIGHT):
        grid = np.asarray(grid, dtype=float)
        zeros = np.zeros_like(grid)
        return cls(grid, np.full_like(grid, float(value)), kind, zeros, zeros, source=lambda r: np.full_like(r, value))

    @classmethod
    def from_function(cls, grid, fn, kind=FieldKind.GENERIC, dfn=None, ddfn=None):
        grid = np.asarray(grid, dtype=float)
        d1 = dfn(grid) if dfn is not None else None
        d2 = ddfn(grid) if ddfn is not None else None
        return cls(grid, fn(grid), kind, d1, d2, source=fn)

    def derivatives(self, topology=Topology.CYLINDER):
        if self.d1 is not None and self.d2 is not None:
            return self.d1, self.d2
        spline = _reflected_spline(self.grid, self.values, topology, odd=False)
        return spline(self.grid, 1), spline(self.grid, 2)

    def at(self, r, topology=Topology.CYLINDER):
        r = np.asarray(r, dtype=float)
        if self.source is not None:
            return np.asarray(self.source(r), dtype=float)
        return _reflected_spline(self.grid, self.values, topology, odd=False)(r)

    def scaled(self, s):
        d1 = None if self.d1 is None else s * self.d1
        d2 = None if self.d2 is None else s * self.d2
        source = None if self.source is None else (lambda r, fn=self.source: s * fn(r))
        return RadialField(self.grid, s * self.values, self.kind, d1, d2, source)


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    grid: np.ndarray
    ric_radial: np.ndarray
    ric_tangential: np.ndarray
    ric_min: np.ndarray
    sect_mixed: np.ndarray
    sect_tangential: np.ndarray
    biric_min: np.ndarray

    def field(self, name, source=None):
        return RadialField(self.grid, getattr(self, name), FieldKind.POTENTIAL, source=source)


def _cap_limit(grid, values, end):
    """value at a pole from the two nearest interior samples, assuming an even expansion f0 + c s^2"""
    if end == 0:
        s1, s2 = grid[1] - grid[0], grid[2] - grid[0]
        f1, f2 = values[1], values[2]
    else:
        s1, s2 = grid[-1] - grid[-2], grid[-1] - grid[-3]
        f1, f2 = values[-2], values[-3]
    return (s2**2 * f1 - s1**2 * f2) / (s2**2 - s1**2)


def _cap_band(grid, end):
    """indices of the samples next to a pole, pole first, and their distance to it"""
    s = grid - grid[0] if end == 0 else grid[-1] - grid
    order = np.arange(len(grid)) if end == 0 else np.arange(len(grid))[::-1]
    count = max(CAP_MIN_SAMPLES, int(np.sum(s <= CAP_BAND * (grid[-1] - grid[0]))))
    idx = order[: min(count, len(grid) // 2)]
    return idx, s[idx]


def _cap_expansion(s, w):
    """
    Curvatures near a smooth pole from a least-squares fit w = s (1 + c_1 s^2 + ... + c_d s^(2d)).

    With t = s^2, A1 = sum (2k + 1) c_k t^(k-1), A2 = sum 2k (2k + 1) c_k t^(k-1) and g = w / s:
    -w'' / w = -A2 / g and (1 - w'^2) / w^2 = -A1 (2 + t A1) / g^2, none of which divides by a small w.
    """
    t = s**2
    t_max = float(t[-1])
    inner = s > 0
    powers = np.arange(1, CAP_DEGREE + 1)
    basis = (t[inner, None] / t_max) ** powers[None, :]
    scaled, *_ = np.linalg.lstsq(basis, np.abs(w[inner]) / s[inner] - 1.0, rcond=None)
    c = scaled / t_max**powers
    lower = t[:, None] ** (powers[None, :] - 1)
    A1 = lower @ ((2 * powers + 1) * c)
    A2 = lower @ (2 * powers * (2 * powers + 1) * c)
    g = 1.0 + (lower * t[:, None]) @ c
    return -A2 / g, -A1 * (2 + t * A1) / g**2


def _curvatures(n, r, w, dw, ddw, topology, cap_fit=False):
    caps = topology == Topology.TWO_CAPS
    if caps:
        for end in (0, -1):
            if abs(abs(dw[end]) - 1.0) > CONE_TOL:
                raise ConeSingularity(f"|w'| = {abs(dw[end]):.6g} at the cap r = {r[end]:.6g}, expected 1")

    with np.errstate(divide="ignore", invalid="ignore"):
        sect_mixed = -ddw / w
        sect_tan = (1.0 - dw**2) / w**2

    if caps and cap_fit and len(r) >= 2 * CAP_MIN_SAMPLES:
        for end in (0, -1):
            idx, s = _cap_band(r, end)
            sect_mixed[idx], sect_tan[idx] = _cap_expansion(s, w[idx])
    elif caps:
        for arr in (sect_mixed, sect_tan):
            arr[0] = _cap_limit(r, arr, 0)
            arr[-1] = _cap_limit(r, arr, -1)

    ric_r = (n - 1) * sect_mixed
    ric_t = sect_mixed + (n - 2) * sect_tan
    pair_mixed = ric_r + ric_t - sect_mixed
    if n > 2:
        biric = np.minimum(pair_mixed, 2 * ric_t - sect_tan)
    else:
        biric = pair_mixed
    return CurvatureProfile(r, ric_r, ric_t, np.minimum(ric_r, ric_t), sect_mixed, sect_tan, biric)


def curvature_on(metric, r):
    """curvature of `metric` sampled on an arbitrary increasing grid spanning its interval"""
    r = np.asarray(r, dtype=float)
    w, dw, ddw = metric.evaluate(r)
    w = np.array(w, dtype=float)
    if metric.topology == Topology.TWO_CAPS:
        w[0] = w[-1] = 0.0
    return _curvatures(metric.n, r, w, np.array(dw, dtype=float), np.array(ddw, dtype=float), metric.topology)


def curvature_profile(metric):
    w, dw, ddw = metric.evaluate()
    profile = _curvatures(
        metric.n,
        metric.grid,
        np.array(w, dtype=float),
        np.array(dw, dtype=float),
        np.array(ddw, dtype=float),
        metric.topology,
        cap_fit=metric.sampled,
    )
    logger.debug("curvature of %s: ric_min in [%.6g, %.6g]", metric.label, profile.ric_min.min(), profile.ric_min.max())
    return profile


def ric_min_field(metric):
    """minimal Ricci eigenvalue as a potential that can be re-evaluated on other grids"""
    return curvature_profile(metric).field("ric_min", source=lambda r: curvature_on(metric, r).ric_min)


def check_ric_min_floor(profile, floor, mask=None, tol=1e-8):
    """
    Whether the minimal Ricci eigenvalue stays above `floor` on `mask`; returns (ok, worst, location).
    """
    ric = profile.ric_min if mask is None else profile.ric_min[mask]
    grid = profile.grid if mask is None else profile.grid[mask]
    gap = ric - floor
    idx = int(np.argmin(gap))
    return bool(gap[idx] >= -tol * max(1.0, abs(floor))), float(gap[idx]), float(grid[idx])


def laplacian_radial(metric, u):
    if not metric.same_grid(u.grid):
        raise GridMismatch("field and metric live on different grids")
    n = metric.n
    w, dw, _ = metric.evaluate()
    d1, d2 = u.derivatives(metric.topology)
    with np.errstate(divide="ignore", invalid="ignore"):
        lap = d2 + (n - 1) * (dw / w) * d1
    if metric.topology == Topology.TWO_CAPS:
        lap[0] = n * d2[0]
        lap[-1] = n * d2[-1]
    return RadialField(metric.grid, lap)


def _interval_integrals(metric, u, p):
    """integral of u^p w^(n-1) over every grid interval, three point Gauss-Legendre per interval"""
    a, b = metric.grid[:-1], metric.grid[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    integrand = np.abs(metric.warp_at(nodes)) ** (metric.n - 1)
    if u is not None and p != 0:
        integrand = integrand * u.at(nodes, metric.topology) ** p
    return half * (integrand @ _GAUSS_WEIGHTS)


def _check_weight(metric, u, p):
    if u is None or p == 0:
        return
    if not metric.same_grid(u.grid):
        raise GridMismatch("weight and metric live on different grids")
    if np.any(u.values <= 0):
        raise WarplabError("weighted volume needs a positive weight")


def weighted_volume(metric, u=None, p=0):
    _check_weight(metric, u, p)
    return vol_round_sphere(metric.n - 1) * float(np.sum(_interval_integrals(metric, u, p)))


def cumulative_weighted_volume(metric, u=None, p=0):
    """v(r_i) = vol(S^{n-1}) * int_{r_0}^{r_i} u^p w^{n-1}"""
    _check_weight(metric, u, p)
    return vol_round_sphere(metric.n - 1) * np.concatenate([[0.0], np.cumsum(_interval_integrals(metric, u, p))])


def diameter_estimate(metric):
    """
    Meridian length where the axis realizes the diameter, otherwise a lower bound.

    The pole-to-pole distance is always the meridian length, and it is the diameter while max w <= length / pi.
    The round sphere sits on that boundary, so its diameter pi is reported as exact rather than as a lower bound.
    """
    length = metric.length
    widest = float(np.max(metric.warp))
    if metric.topology == Topology.TWO_CAPS:
        if widest <= length / math.pi * (1 + 1e-12):
            return DiameterEstimate(length, True)
        return DiameterEstimate(max(length, math.pi * widest), False)
    if metric.topology == Topology.PERIODIC:
        return DiameterEstimate(max(length / 2, math.pi * widest), False)
    return DiameterEstimate(length, False)


def rescale(metric, c):
    """c^2 g: grid r -> c r, warp w -> c w(. / c)"""
    if c <= 0:
        raise RangeError(f"scale factor must be positive, got {c}")
    closed = None
    if metric.closed_form is not None:
        cf = metric.closed_form
        closed = ClosedForm(
            lambda x: c * cf.w(x / c),
            lambda x: cf.dw(x / c),
            lambda x: cf.ddw(x / c) / c,
        )
    return WarpedMetric(
        metric.n,
        c * metric.grid,
        c * metric.warp,
        metric.topology,
        closed_form=closed,
        dwarp=metric.dwarp,
        ddwarp=None if metric.ddwarp is None else metric.ddwarp / c,
        label=metric.label,
    )


def round_sphere(n, points=DEFAULT_GRID, radius=1.0, exact=True):
    grid = np.linspace(0.0, math.pi, points)
    warp = np.sin(grid)
    warp[0] = warp[-1] = 0.0
    closed = ClosedForm(np.sin, np.cos, lambda r: -np.sin(r)) if exact else None
    metric = WarpedMetric(n, grid, warp, Topology.TWO_CAPS, closed_form=closed, label="sphere")
    return metric if radius == 1.0 else rescale(metric, radius)

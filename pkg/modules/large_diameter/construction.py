"""
Closed warped spheres with lambda_1(-gamma Laplacian + Ric) >= n - 1 and arbitrarily large diameter, for
n >= 4 and 4 / (n - 1) < gamma <= (n - 1) / (n - 2).

The Riccati variable Q = h u^(alpha - gamma) runs off to minus infinity at the tips, so the profile is integrated
in the angle W = arctan(Q / (n - 1)), which crosses -pi / 2 with bounded speed.
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from engine.exceptions import ConvergenceError, NoSolution, RangeError, StageError, WarplabError, stage
from engine.geometry import (
    DEFAULT_GRID,
    ClosedForm,
    FieldKind,
    RadialField,
    Topology,
    WarpedMetric,
    check_ric_min_floor,
    curvature_on,
    curvature_profile,
    diameter_estimate,
    laplacian_radial,
    ric_min_field,
)
from engine.spectral import SturmLiouvilleProblem, principal_eigenvalue, verify_spectral_condition
from modules.report import Check, ConstructionReport, check_at_least, check_at_most

logger = logging.getLogger(__name__)

ID = "large-diameter"

# Q level used to cross-check the blow-up point
BLOWUP_Q = -1e6
# W must stay this far above -pi / 2 on [L, L + mu]
BLOWUP_MARGIN = 1e-3

DELTA_DOUBLINGS = 40
HALVINGS = 40
COLLAR_RETRIES = 8
DENSE_FACTOR = 8
TAIL_WINDOW = 0.2
SHOOTING_RTOL = 1e-13

DeltaSearch = namedtuple("DeltaSearch", ["delta", "delta0", "residual", "r", "Q"])
Fields = namedtuple("Fields", ["W", "u", "p", "dp", "f", "F", "dF"])


def _quintic(t):
    return t**3 * (10 - 15 * t + 6 * t**2)


def _dquintic(t):
    return 30 * t**2 * (1 - t) ** 2


def _septic(t):
    return t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)


def _dseptic(t):
    return 140 * t**3 * (1 - t) ** 3


CUTOFF_MODELS = {
    "quintic": (_quintic, _dquintic),
    "septic": (_septic, _dseptic),
}


@dataclass(frozen=True)
class LargeDiameterParams:
    n: int = field(default=5, metadata={"help": "dimension, at least 4"})
    gamma: float = field(default=1.25, metadata={"help": "spectral weight, 4/(n-1) < gamma <= (n-1)/(n-2)"})
    L: float = field(default=10.0, metadata={"help": "half length of the region where the cutoff equals 1"})
    eta0: str = field(default="quintic", metadata={"help": "cutoff model: " + ", ".join(CUTOFF_MODELS)})
    ode_tol: float = field(default=1e-10, metadata={"help": "relative tolerance of the profile integration"})
    delta_search_tol: float = field(default=1e-9, metadata={"help": "admissible |Q(2 delta) + a|"})
    points: int = field(default=DEFAULT_GRID, metadata={"help": "grid points of the smoothed metric"})
    collar: float = field(default=0.05, metadata={"help": "cap collar width as a fraction of r0 - L - mu"})

    def __post_init__(self):
        n, gamma = self.n, self.gamma
        if n < 4:
            raise RangeError(f"the large diameter construction needs n >= 4, got {n}")
        if not 4 / (n - 1) < gamma <= (n - 1) / (n - 2):
            raise RangeError(f"gamma must lie in ({4 / (n - 1):.6g}, {(n - 1) / (n - 2):.6g}], got {gamma}")
        if self.L <= 0:
            raise RangeError(f"L must be positive, got {self.L}")
        if self.eta0 not in CUTOFF_MODELS:
            raise RangeError(f"unknown cutoff model '{self.eta0}', use one of {', '.join(CUTOFF_MODELS)}")
        if self.ode_tol <= 0 or self.delta_search_tol <= 0:
            raise RangeError("tolerances must be positive")
        if self.points < 64:
            raise RangeError(f"at least 64 grid points are needed, got {self.points}")
        if not 0 < self.collar < 1:
            raise RangeError(f"collar fraction must lie in (0, 1), got {self.collar}")

    @property
    def alpha(self):
        return 2 * self.gamma / (self.n - 1)


def coupling_factor(n, gamma):
    """(gamma - (n - 2) gamma^2 / (n - 1)) / (gamma - alpha)^2"""
    alpha = 2 * gamma / (n - 1)
    return (gamma - (n - 2) * gamma**2 / (n - 1)) / (gamma - alpha) ** 2


def coupling_residual(n, gamma, a, b):
    return -(a**2) / (n - 1) - coupling_factor(n, gamma) * b**2 - (n - 1) + a * b


def solve_coupling_constants(n, gamma):
    """
    Positive (a, b) with -a^2/(n-1) - K b^2 - (n-1) + a b = 0. b sits 10% above the smallest admissible value and
    a is the smaller root, which is also the attracting equilibrium of the Q flow.
    """
    if n < 4:
        raise RangeError(f"coupling constants need n >= 4, got {n}")
    if gamma <= 4 / (n - 1):
        raise NoSolution(f"no positive (a, b) for gamma = {gamma:.6g} <= 4/(n-1) = {4 / (n - 1):.6g}")
    K = coupling_factor(n, gamma)
    margin = 1 - 4 * K / (n - 1)
    if margin <= 0:
        raise NoSolution(f"nonpositive discriminant at n = {n}, gamma = {gamma:.6g}")
    b = 1.1 * 2 / math.sqrt(margin)
    constant = K * b**2 + n - 1
    if constant <= 0:
        raise NoSolution(f"no positive root a at n = {n}, gamma = {gamma:.6g}")
    larger = (n - 1) / 2 * (b + math.sqrt(b**2 - 4 * constant / (n - 1)))
    a = (n - 1) * constant / larger
    logger.debug("coupling constants a = %.15g, b = %.15g (K = %.6g)", a, b, K)
    return a, b


@dataclass(frozen=True)
class Cutoff:
    """
    Even cutoff: 0 on [0, delta], rising on [delta, 2 delta], 1 on [2 delta, L], falling on [L, L + mu] and 0
    beyond. With mu = inf it never falls.
    """

    delta: float
    L: float
    mu: float = math.inf
    model: str = "quintic"

    @property
    def end(self):
        return self.L + self.mu

    def _ramps(self, r):
        s = np.abs(np.asarray(r, dtype=float))
        rise = np.clip((s - self.delta) / self.delta, 0.0, 1.0)
        if math.isinf(self.mu):
            return rise, None
        return rise, np.clip((self.end - s) / self.mu, 0.0, 1.0)

    def __call__(self, r):
        step, _ = CUTOFF_MODELS[self.model]
        rise, fall = self._ramps(r)
        return step(rise) if fall is None else step(rise) * step(fall)

    def derivative(self, r):
        """d eta / d|r|"""
        step, dstep = CUTOFF_MODELS[self.model]
        rise, fall = self._ramps(r)
        up = dstep(rise) / self.delta
        if fall is None:
            return up
        return up * step(fall) - step(rise) * dstep(fall) / self.mu


def _angle_slope(K, b, n, eta, W):
    sin, cos = np.sin(W), np.cos(W)
    return -1.0 - K * (eta * b * cos) ** 2 / (n - 1) - eta * b * sin * cos


@dataclass(frozen=True)
class ProfileFlow:
    """right hand side of the (W, log u, log f) system for s = |r| >= 0"""

    n: int
    gamma: float
    b: float
    cutoff: Cutoff

    @property
    def K(self):
        return coupling_factor(self.n, self.gamma)

    @property
    def slope(self):
        """u'/u = slope * eta"""
        alpha = 2 * self.gamma / (self.n - 1)
        return self.b / (self.gamma - alpha)

    def angle_rhs(self, s, y):
        eta = float(self.cutoff(s))
        return [_angle_slope(self.K, self.b, self.n, eta, y[0])]

    def rhs(self, s, y):
        eta = float(self.cutoff(s))
        p = eta * self.slope
        dW = _angle_slope(self.K, self.b, self.n, eta, y[0])
        return [dW, p, math.tan(y[0]) - self.gamma * p / (self.n - 1)]


def _integrate(rhs, span, y0, tol, **kwargs):
    sol = solve_ivp(rhs, span, y0, method="DOP853", rtol=tol, atol=tol * 1e-2, dense_output=True, **kwargs)
    if sol.status < 0:
        raise ConvergenceError(f"integration on [{span[0]:.6g}, {span[1]:.6g}] failed: {sol.message}")
    return sol


def _shoot(params, b, delta):
    """W(2 delta) for the flow started from W(delta) = -delta"""
    flow = ProfileFlow(params.n, params.gamma, b, Cutoff(delta, math.inf, model=params.eta0))
    sol = solve_ivp(
        flow.angle_rhs, (delta, 2 * delta), [-delta], method="DOP853", rtol=SHOOTING_RTOL, atol=1e-15
    )
    if sol.status < 0:
        raise ConvergenceError(f"shooting at delta = {delta:.6g} failed: {sol.message}")
    return float(sol.y[0, -1])


def find_delta(params, a, b):
    """
    delta with Q(2 delta) = -a. On [0, delta] the flow is Q' = -Q^2/(n-1) - (n-1), so Q(2 delta) tends to 0 as
    delta -> 0 and to -inf as delta approaches the blow-up value delta0; delta0 is bracketed by doubling first
    and the target is then searched on (0, delta0).
    """
    n = params.n
    target = math.atan(-a / (n - 1))

    def blowup(delta):
        return _shoot(params, b, delta) + math.pi / 2

    def mismatch(delta):
        return _shoot(params, b, delta) - target

    lo = 1e-3
    if blowup(lo) <= 0:
        raise StageError("delta", f"Q(2 delta) already infinite at delta = {lo}")
    hi = 2 * lo
    for _ in range(DELTA_DOUBLINGS):
        if blowup(hi) < 0:
            break
        lo, hi = hi, 2 * hi
    else:
        raise StageError("delta", "no blow-up of Q(2 delta) within the doubling budget")
    delta0 = brentq(blowup, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    logger.debug("Q(2 delta) blows up at delta0 = %.15g", delta0)

    small = 1e-6 * delta0
    if not mismatch(small) > 0 or not mismatch(delta0) < 0:
        raise StageError("delta", f"Q(2 delta) + a does not change sign on (0, {delta0:.6g})")
    delta = brentq(mismatch, small, delta0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

    residual = abs((n - 1) * math.tan(_shoot(params, b, delta)) + a)
    if residual > params.delta_search_tol:
        raise StageError("delta", f"|Q(2 delta) + a| = {residual:.3e} exceeds {params.delta_search_tol:.3e}")

    flow = ProfileFlow(n, params.gamma, b, Cutoff(delta, math.inf, model=params.eta0))
    ramp = _integrate(flow.angle_rhs, (delta, 2 * delta), [-delta], SHOOTING_RTOL)
    r = np.linspace(0.0, 2 * delta, 201)
    W = np.where(r <= delta, -r, ramp.sol(np.maximum(r, delta))[0])
    logger.info("delta = %.15g (delta0 = %.15g, residual %.3e)", delta, delta0, residual)
    return DeltaSearch(delta, delta0, residual, r, (n - 1) * np.tan(W))


@dataclass(frozen=True, eq=False)
class WarpProfile:
    """solution of the profile system on [0, r0), exact on [0, delta] and past L + mu"""

    flow: ProfileFlow
    segments: tuple  # (start, stop, OdeSolution) covering (delta, L + mu]
    angle_end: float
    logu_end: float
    logf_end: float

    @property
    def cutoff(self):
        return self.flow.cutoff

    @property
    def r0(self):
        return self.cutoff.end + math.pi / 2 + self.angle_end

    @property
    def c(self):
        """f = c sin(r0 - r) past L + mu"""
        return math.exp(self.logf_end) / math.sin(self.r0 - self.cutoff.end)

    @property
    def u_max(self):
        return math.exp(self.logu_end)

    def _state(self, s):
        delta = self.cutoff.delta
        W = -s.copy()
        logu = np.zeros_like(s)
        logf = np.log(np.cos(np.minimum(s, delta)))
        for start, stop, sol in self.segments:
            inside = (s > start) & (s <= stop)
            if np.any(inside):
                W[inside], logu[inside], logf[inside] = sol(s[inside])
        return W, logu, logf

    def fields(self, s):
        s = np.asarray(s, dtype=float)
        shape = s.shape
        s = s.ravel()
        end = self.cutoff.end
        W = np.empty_like(s)
        logu = np.empty_like(s)
        logf = np.empty_like(s)
        inner = s <= end
        W[inner], logu[inner], logf[inner] = self._state(s[inner])
        tail = ~inner
        W[tail] = self.angle_end - (s[tail] - end)
        logu[tail] = self.logu_end
        logf[tail] = math.log(self.c) + np.log(np.sin(self.r0 - s[tail]))

        flow = self.flow
        eta, deta = self.cutoff(s), self.cutoff.derivative(s)
        p, dp = flow.slope * eta, flow.slope * deta
        F = np.tan(W) - flow.gamma * p / (flow.n - 1)
        dF = _angle_slope(flow.K, flow.b, flow.n, eta, W) / np.cos(W) ** 2 - flow.gamma * dp / (flow.n - 1)
        parts = Fields(W, np.exp(logu), p, dp, np.exp(logf), F, dF)
        return Fields(*(part.reshape(shape) for part in parts))

    def bending(self, s):
        """f'^2 - f f''; Ric(d_r, d_r) <= Ric(e, e) iff epsilon^2 times this is at most 1"""
        fl = self.fields(s)
        return -(fl.f**2) * fl.dF


@dataclass(frozen=True)
class SphericalCap:
    """w = sin(kappa (x - pole)) / kappa in the distance x to the cone tip, C^1 matched to slope sin(x) at joint"""

    kappa: float
    pole: float
    joint: float

    @classmethod
    def matching(cls, slope, joint):
        if not 0 < slope <= 1:
            raise WarplabError(f"cap smoothing needs a cone slope in (0, 1], got {slope:.6g}")
        theta = math.acos(slope * math.cos(joint))
        kappa = math.sin(theta) / (slope * math.sin(joint))
        return cls(kappa, joint - theta / kappa, joint)

    def warp(self, x):
        t = self.kappa * (x - self.pole)
        return np.sin(t) / self.kappa, np.cos(t), -self.kappa * np.sin(t)


@dataclass(frozen=True, eq=False)
class SmoothedWarp:
    profile: WarpProfile
    epsilon: float
    cap: SphericalCap

    @property
    def radius(self):
        return self.profile.r0 - self.cap.pole

    def parts(self, r):
        r = np.asarray(r, dtype=float)
        shape = r.shape
        r = r.ravel()
        sign = np.sign(r)
        x = self.profile.r0 - np.abs(r)
        in_cap = x < self.cap.joint
        w, dw, ddw = np.empty_like(r), np.empty_like(r), np.empty_like(r)
        body = ~in_cap
        if np.any(body):
            fl = self.profile.fields(np.abs(r[body]))
            w[body] = self.epsilon * fl.f
            dw[body] = self.epsilon * sign[body] * fl.f * fl.F
            ddw[body] = self.epsilon * fl.f * (fl.dF + fl.F**2)
        if np.any(in_cap):
            cw, cdw, cddw = self.cap.warp(np.maximum(x[in_cap], self.cap.pole))
            w[in_cap] = cw
            dw[in_cap] = -sign[in_cap] * cdw
            ddw[in_cap] = cddw
        return w.reshape(shape), dw.reshape(shape), ddw.reshape(shape)

    def closed_form(self):
        return ClosedForm(
            lambda r: self.parts(r)[0],
            lambda r: self.parts(r)[1],
            lambda r: self.parts(r)[2],
        )


def _assemble(warp, points):
    R = warp.radius
    grid = np.linspace(-R, R, points)
    grid = 0.5 * (grid - grid[::-1])
    w, dw, ddw = warp.parts(grid)
    w[0] = w[-1] = 0.0
    metric = WarpedMetric(
        warp.profile.flow.n,
        grid,
        w,
        Topology.TWO_CAPS,
        closed_form=warp.closed_form(),
        dwarp=dw,
        ddwarp=ddw,
        label=ID,
    )

    profile = warp.profile
    fl = profile.fields(np.abs(grid))
    u = fl.u / profile.u_max
    weight = RadialField(
        grid,
        u,
        FieldKind.WEIGHT,
        np.sign(grid) * fl.p * u,
        (fl.dp + fl.p**2) * u,
        source=lambda r: profile.fields(np.abs(r)).u / profile.u_max,
    )
    return metric, weight


def _collar_admissible(metric, u, gamma, warp):
    """Ric_min >= n - 1 densely sampled near the tips and the spectral condition on the grid there"""
    r0, band = warp.profile.r0, 2 * warp.cap.joint
    dense = np.linspace(metric.grid[0], metric.grid[-1], DENSE_FACTOR * (metric.points - 1) + 1)
    near = r0 - np.abs(dense) < band
    ok, worst, where = check_ric_min_floor(curvature_on(metric, dense), metric.n - 1, mask=near)
    spectral = verify_spectral_condition(metric, u, gamma, 1.0, mask=r0 - np.abs(metric.grid) < band)
    logger.debug("collar: ric_min gap %.3e at r = %.6g, spectral residual %.3e", worst, where, spectral.worst_residual)
    return ok and spectral.holds, worst, spectral.worst_residual


def _locate_blowup(n, start, Q_start):
    """first point past `start` where Q' = -Q^2/(n-1) - (n-1) reaches BLOWUP_Q, moved onto the pole"""

    def rhs(s, q):
        return [-q[0] ** 2 / (n - 1) - (n - 1)]

    def crossing(s, q):
        return q[0] - BLOWUP_Q

    crossing.terminal = True
    sol = solve_ivp(rhs, (start, start + math.pi), [Q_start], method="DOP853", rtol=1e-12, atol=1e-12, events=crossing)
    if not sol.t_events[0].size:
        raise StageError("blowup", f"Q never reached {BLOWUP_Q:g} past r = {start:.6g}")
    # Q = -(n - 1) cot(r0 - r) exactly once the cutoff vanishes
    return float(sol.t_events[0][0]) + math.atan((n - 1) / -BLOWUP_Q)


def _tail_fit(flow, state, start, r0, c):
    """max |f - c sin(r0 - r)| over the last TAIL_WINDOW of [start, r0), f integrated numerically"""
    span = r0 - start
    stop = r0 - 1e-3 * span
    sol = _integrate(flow.rhs, (start, stop), state, 1e-12)
    s = np.linspace(r0 - TAIL_WINDOW * span, stop, 401)
    f = np.exp(sol.sol(s)[2])
    return float(np.max(np.abs(f - c * np.sin(r0 - s))))


def build_large_diameter_metric(params):
    n, gamma, L = params.n, params.gamma, params.L
    tol = params.ode_tol

    with stage("coupling"):
        a, b = solve_coupling_constants(n, gamma)
    with stage("delta"):
        search = find_delta(params, a, b)
    delta = search.delta
    if 2 * delta >= L:
        raise StageError("delta", f"2 delta = {2 * delta:.6g} does not fit below L = {L}")

    with stage("weight"):
        flow = ProfileFlow(n, gamma, b, Cutoff(delta, L, model=params.eta0))
        ramp = _integrate(flow.rhs, (delta, 2 * delta), [-delta, 0.0, math.log(math.cos(delta))], tol)
        plateau = _integrate(flow.rhs, (2 * delta, L), ramp.y[:, -1], tol)
        flat = np.linspace(2 * delta, L, 2001)
        plateau_deviation = float(np.max(np.abs((n - 1) * np.tan(plateau.sol(flat)[0]) + a)))
        logger.info("Q on [2 delta, L] stays within %.3e of -a", plateau_deviation)

    with stage("mu"):

        def near_blowup(s, y):
            return y[0] + math.pi / 2 - BLOWUP_MARGIN

        near_blowup.terminal = True
        mu = 1.0
        for _ in range(HALVINGS):
            flow = ProfileFlow(n, gamma, b, Cutoff(delta, L, mu, params.eta0))
            fall = _integrate(flow.rhs, (L, L + mu), plateau.y[:, -1], tol, events=near_blowup)
            if fall.status == 0:
                break
            logger.warning("Q blows up before L + mu for mu = %.6g, halving", mu)
            mu /= 2
        else:
            raise StageError("mu", "Q blows up before L + mu for every mu in the halving budget")

    with stage("blowup"):
        end_state = fall.y[:, -1]
        profile = WarpProfile(
            flow,
            ((delta, 2 * delta, ramp.sol), (2 * delta, L, plateau.sol), (L, L + mu, fall.sol)),
            float(end_state[0]),
            float(end_state[1]),
            float(end_state[2]),
        )
        r0 = profile.r0
        r0_event = _locate_blowup(n, L + mu, (n - 1) * math.tan(end_state[0]))
        logger.info("tips at r0 = %.12g (event estimate %.12g)", r0, r0_event)

    with stage("warp"):
        interior = np.linspace(0.0, L + mu, 20001)
        f_max = max(1.0, float(np.max(profile.fields(interior).f)))
        tail_fit = _tail_fit(flow, end_state, L + mu, r0, profile.c) / f_max

    with stage("epsilon"):
        bending = max(float(np.max(profile.bending(interior))), profile.c**2)
        epsilon = 1.0
        for _ in range(HALVINGS):
            if epsilon**2 * bending <= 1:
                break
            epsilon /= 2
        else:
            raise StageError("epsilon", "no epsilon in the halving budget makes Ric(d_r, d_r) minimal")
        logger.info("epsilon = %.6g (max f'^2 - f f'' = %.6g)", epsilon, bending)

    with stage("smoothing"):
        collar = params.collar
        for _ in range(COLLAR_RETRIES + 1):
            cap = SphericalCap.matching(epsilon * profile.c, collar * (r0 - L - mu))
            warp = SmoothedWarp(profile, epsilon, cap)
            metric, u = _assemble(warp, params.points)
            admissible, ric_gap, collar_residual = _collar_admissible(metric, u, gamma, warp)
            if admissible:
                break
            logger.warning("cap smoothing with collar %.3g lowers Ric below n - 1, halving", collar)
            collar /= 2
        else:
            raise StageError("smoothing", f"no admissible collar after {COLLAR_RETRIES} halvings")

    with stage("verify"):
        curvature = curvature_profile(metric)
        body = r0 - np.abs(metric.grid) > cap.joint
        body[[0, -1]] = False
        lap = laplacian_radial(metric, u).values
        residual = (u.values * curvature.ric_radial - gamma * lap - (n - 1) * u.values) / u.values
        residual_identity = float(np.max(np.abs(residual[body])))
        radial_excess = float(np.max((curvature.ric_radial - curvature.ric_tangential)[body]))
        lambda1 = principal_eigenvalue(SturmLiouvilleProblem(metric, gamma, ric_min_field(metric)))
        diameter = diameter_estimate(metric)

    fl = profile.fields(np.abs(metric.grid))
    sign = np.sign(metric.grid)
    Q = sign * (n - 1) * np.tan(fl.W)
    arrays = {
        "u": u.values,
        "f": fl.f,
        "Q": Q,
        "h": Q * fl.u ** (gamma - params.alpha),
    }
    parameters = {
        "n": n,
        "gamma": gamma,
        "L": L,
        "eta0": params.eta0,
        "ode_tol": tol,
        "delta_search_tol": params.delta_search_tol,
        "points": params.points,
        "collar": collar,
        "a": a,
        "b": b,
        "delta": delta,
        "delta0": search.delta0,
        "mu": mu,
        "r0": r0,
        "r0_event": r0_event,
        "c": profile.c,
        "epsilon": epsilon,
        "kappa": cap.kappa,
        "radius": warp.radius,
    }
    checks = [
        check_at_most("coupling_residual", abs(coupling_residual(n, gamma, a, b)), 1e-12),
        check_at_most("delta_residual", search.residual, params.delta_search_tol),
        check_at_most("plateau_deviation", plateau_deviation, 10 * tol * max(1.0, a)),
        check_at_most("blowup_agreement", abs(r0 - r0_event), 1e-6),
        check_at_most("tail_fit", tail_fit, 1e-4),
        check_at_most("radial_ricci_excess", radial_excess, 1e-8 * (n - 1)),
        check_at_least("collar_ricci_gap", ric_gap, -1e-8 * (n - 1)),
        check_at_least("collar_spectral_residual", collar_residual, -1e-6),
        check_at_most("identity_residual", residual_identity, 1e-6),
        check_at_least("lambda1", lambda1.value, n - 1 - 1e-3),
        Check("diameter", diameter.value, 2 * L, bool(diameter.value > 2 * L)),
    ]
    logger.info("large diameter metric: diameter %.6g, lambda1 %.9g", diameter.value, lambda1.value)
    return ConstructionReport(ID, n, gamma, metric, u, parameters, residual_identity, lambda1, diameter, checks, arrays)

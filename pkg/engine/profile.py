"""
Weighted isoperimetric profiles of centered balls, the round model profiles I_zeta and the ODE comparison that
turns a viscosity inequality for I into the sharp volume bound.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import betainc, betaincinv

from .bounds import volume_bound_rhs
from .exceptions import ProfileDomainError, RangeError
from .geometry import DEFAULT_GRID, Topology, cumulative_weighted_volume, vol_round_ball, vol_round_sphere

logger = logging.getLogger(__name__)

UPPER_BOUND = "upper_bound"
MODEL = "model"

VISCOSITY_TOL = 1e-4
ASYMPTOTIC_RTOL = 1e-3
TRIM = 0.05
FIT_RADIUS = 0.05
FIT_MIN_SAMPLES = 8


class Comparison(Enum):
    PASS = "pass"
    CONTRADICTION = "contradiction"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    v: np.ndarray
    I: np.ndarray
    n: int
    lam: float
    gamma: float = 0.0
    V_total: float = None
    flags: tuple = ()
    evaluator: object = None  # exact I(v), when the curve comes from a closed form

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        I = np.asarray(self.I, dtype=float)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "flags", tuple(self.flags))
        if v.ndim != 1 or v.shape != I.shape:
            raise ProfileDomainError("profile samples v and I must be 1d and of equal length")
        if not np.all(np.diff(v) > 0):
            raise ProfileDomainError("profile volumes must be strictly increasing")
        if np.any(I < 0):
            raise ProfileDomainError("profile values must be nonnegative")
        if len(I) > 2 and not np.all(I[1:-1] > 0):
            raise ProfileDomainError("profile must be positive away from its endpoints")
        if self.V_total is None:
            object.__setattr__(self, "V_total", float(v[-1]))

    @property
    def alpha(self):
        return 2 * self.gamma / (self.n - 1)

    def metadata(self):
        total = None if math.isinf(self.V_total) else self.V_total
        return {
            "n": self.n,
            "lambda": self.lam,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "V_total": total,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class ResidualSample:
    v: np.ndarray
    residual: np.ndarray

    @property
    def worst(self):
        return float(np.max(self.residual))

    @property
    def location(self):
        return float(self.v[int(np.argmax(self.residual))])


@dataclass(frozen=True)
class PsiCurve:
    v: np.ndarray
    psi: np.ndarray
    residual: ResidualSample


@dataclass(frozen=True)
class AsymptoticFit:
    coefficient: float
    bound: float
    ok: bool
    samples: int


@dataclass(frozen=True)
class ComparisonVerdict:
    status: Comparison
    volume_ok: bool
    V_measured: float
    V_bound: float
    viscosity_ok: bool
    worst_residual: float
    asymptotic: AsymptoticFit = None

    @property
    def passed(self):
        return self.status == Comparison.PASS

    def to_dict(self):
        return {
            "status": self.status.value,
            "volume_ok": self.volume_ok,
            "V_measured": self.V_measured,
            "V_bound": self.V_bound,
            "viscosity_ok": self.viscosity_ok,
            "worst_residual": self.worst_residual,
            "asymptotic_coefficient": None if self.asymptotic is None else self.asymptotic.coefficient,
            "asymptotic_bound": None if self.asymptotic is None else self.asymptotic.bound,
            "asymptotic_ok": None if self.asymptotic is None else self.asymptotic.ok,
        }


@dataclass(frozen=True)
class ModelProfile:
    """
    Profile of geodesic balls in the round model: I_zeta(zeta * int_0^r mu^(n-1)) = zeta * mu(r)^(n-1) with
    mu(r) = sin(sqrt(lam) r) / sqrt(lam).
    """

    zeta: float
    lam: float
    n: int

    def __post_init__(self):
        if self.zeta <= 0 or self.lam <= 0:
            raise RangeError(f"model profile needs zeta > 0 and lambda > 0, got {self.zeta}, {self.lam}")
        if self.n < 2:
            raise RangeError(f"model profile needs n >= 2, got {self.n}")

    @property
    def V_zeta(self):
        return self.zeta * self.lam ** (-self.n / 2) * vol_round_sphere(self.n) / vol_round_sphere(self.n - 1)

    def volume_at(self, x):
        """zeta * lam^(-n/2) * int_0^x sin^(n-1), x in [0, pi]"""
        x = np.asarray(x, dtype=float)
        half = 0.5 * self.V_zeta
        inner = half * betainc(self.n / 2, 0.5, np.sin(np.minimum(x, math.pi - x)) ** 2)
        return np.where(x <= math.pi / 2, inner, self.V_zeta - inner)

    def _sin_squared(self, v):
        v = np.asarray(v, dtype=float)
        V = self.V_zeta
        if np.any(v < -1e-12 * V) or np.any(v > V * (1 + 1e-12)):
            raise ProfileDomainError(f"volume outside [0, {V:.12g}]")
        v = np.clip(v, 0.0, V)
        half = 0.5 * V
        t = np.minimum(v, V - v) / half
        return v, betaincinv(self.n / 2, 0.5, np.clip(t, 0.0, 1.0))

    def radius(self, v):
        """sqrt(lam) * r of the ball enclosing volume v"""
        v, s2 = self._sin_squared(v)
        x = np.arcsin(np.sqrt(s2))
        return np.where(v <= 0.5 * self.V_zeta, x, math.pi - x)

    def __call__(self, v):
        _, s2 = self._sin_squared(v)
        return self.zeta * self.lam ** (-(self.n - 1) / 2) * s2 ** ((self.n - 1) / 2)

    def psi(self, v):
        return self(v) ** (self.n / (self.n - 1))

    @property
    def psi_slope(self):
        """right derivative of psi_zeta at 0"""
        return self.n * self.zeta ** (1 / (self.n - 1))

    def curve(self, points=DEFAULT_GRID):
        x = np.linspace(0.0, math.pi, points)
        v = self.volume_at(x)
        v[0], v[-1] = 0.0, self.V_zeta
        I = self.zeta * (np.sin(x) / math.sqrt(self.lam)) ** (self.n - 1)
        I[0] = I[-1] = 0.0
        return ProfileCurve(v, I, self.n, self.lam, 0.0, self.V_zeta, (MODEL,), evaluator=self)


def model_profile(zeta, lam, n):
    return ModelProfile(zeta, lam, n)


def radial_weighted_profile(metric, u, gamma, lam=1.0):
    """
    Centered-ball profile v(r) = vol(S^{n-1}) int_0^r u^alpha w^(n-1), I(r) = vol(S^{n-1}) u(r)^gamma w(r)^(n-1).
    Balls are one competitor class only, so the curve bounds the true profile from above.
    """
    if metric.topology != Topology.TWO_CAPS:
        raise ProfileDomainError("centered-ball profiles need a metric with two caps")
    if not np.all(u.values > 0):
        raise ProfileDomainError("profile weight must be positive")
    n = metric.n
    alpha = 2 * gamma / (n - 1)
    v = cumulative_weighted_volume(metric, u, alpha)
    I = vol_round_sphere(n - 1) * u.values**gamma * np.abs(metric.warp) ** (n - 1)
    I[0] = I[-1] = 0.0
    return ProfileCurve(v, I, n, lam, gamma, float(v[-1]), (UPPER_BOUND,))


def _stencils(values, step):
    """first and second derivatives by fourth order centered differences at values[2:-2]"""
    m2, m1, c, p1, p2 = values[:-4], values[1:-3], values[2:-2], values[3:-1], values[4:]
    first = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * step)
    second = (-p2 + 16 * p1 - 30 * c + 16 * m1 - m2) / (12 * step**2)
    return c, first, second


def _differentiate(curve, transform, trim):
    """
    (v, f, df/dv, d2f/dv2) for f = transform(I) on the trimmed interior of the curve.

    Closed-form curves are resampled on a uniform v grid. Sampled curves are differentiated along their sample
    index, which keeps the accuracy of the radius grid they were computed on where I ~ v^((n - 1) / n).
    """
    if len(curve.v) < 5:
        raise ProfileDomainError("at least 5 profile samples are needed")
    span = curve.v[-1] - curve.v[0]
    lo, hi = curve.v[0] + trim * span, curve.v[-1] - trim * span

    if curve.evaluator is not None:
        points = len(curve.v)
        h = (hi - lo) / (points - 1)
        if lo - 2 * h < curve.v[0] or hi + 2 * h > curve.v[-1]:
            raise ProfileDomainError("trim leaves no room for the difference stencil")
        v = lo + h * np.arange(-2, points + 2)
        f, df, ddf = _stencils(transform(curve.evaluator(v)), h)
        return v[2:-2], f, df, ddf

    v, v_t, v_tt = _stencils(curve.v, 1.0)
    f, f_t, f_tt = _stencils(transform(curve.I), 1.0)
    keep = (v >= lo) & (v <= hi)
    if not np.any(keep):
        raise ProfileDomainError("no profile samples left after trimming")
    v, v_t, v_tt, f, f_t, f_tt = (arr[keep] for arr in (v, v_t, v_tt, f, f_t, f_tt))
    return v, f, f_t / v_t, (f_tt * v_t - f_t * v_tt) / v_t**3


def viscosity_residual(curve, trim=TRIM):
    """I I'' + I'^2 / (n - 1) + (n - 1) lam; the viscosity inequality asks for residual <= 0"""
    v, I, dI, ddI = _differentiate(curve, lambda values: values, trim)
    residual = I * ddI + dI**2 / (curve.n - 1) + (curve.n - 1) * curve.lam
    return ResidualSample(v, residual)


def psi_transform(curve, trim=TRIM):
    """psi = I^(n / (n - 1)) with the concavity residual psi'' + lam n psi^((2 - n) / n)"""
    n = curve.n
    power = n / (n - 1)
    v, psi, _, ddpsi = _differentiate(curve, lambda values: np.abs(values) ** power, trim)
    residual = ddpsi + curve.lam * n * psi ** ((2 - n) / n)
    return PsiCurve(curve.v, curve.I**power, ResidualSample(v, residual))


def small_volume_asymptotic(curve, rtol=ASYMPTOTIC_RTOL):
    """
    Fit I(v) ~ C v^((n - 1) / n) near v = 0 and compare C with n vol(B^n)^(1/n).

    Small balls have I / v^((n - 1) / n) = C (1 + D v^(2/n) + ...), so the fit carries the first correction term.
    It uses the samples with (v / v_max)^(1/n) <= FIT_RADIUS, and never fewer than FIT_MIN_SAMPLES.
    """
    n = curve.n
    positive = (curve.v > 0) & (curve.I > 0)
    v, I = curve.v[positive], curve.I[positive]
    if len(v) < FIT_MIN_SAMPLES:
        raise ProfileDomainError(f"the asymptotic fit needs {FIT_MIN_SAMPLES} samples with v > 0, got {len(v)}")
    count = max(FIT_MIN_SAMPLES, int(np.sum((v / curve.v[-1]) ** (1 / n) <= FIT_RADIUS)))
    leading = v[:count] ** ((n - 1) / n)
    basis = np.column_stack([leading, leading * v[:count] ** (2 / n)])
    (coefficient, _), *_ = np.linalg.lstsq(basis, I[:count], rcond=None)
    coefficient = float(coefficient)
    bound = float(n * vol_round_ball(n) ** (1 / n))
    return AsymptoticFit(coefficient, bound, bool(coefficient <= bound * (1 + rtol)), count)


def comparison_verdict(curve, tol=VISCOSITY_TOL, rtol=1e-6, trim=TRIM):
    """
    Volume comparison for a profile curve. The comparison only speaks when both hypotheses hold: the viscosity
    inequality and the small-volume asymptotics. Then V <= lam^(-n/2) vol(S^n) is a PASS and a larger volume is a
    CONTRADICTION. A curve failing either hypothesis is NOT_APPLICABLE.
    """
    if curve.lam <= 0:
        raise RangeError(f"comparison needs lambda > 0, got {curve.lam}")
    V_bound = float(volume_bound_rhs(curve.n, curve.lam))
    residual = viscosity_residual(curve, trim)
    viscosity_ok = bool(residual.worst <= tol)
    try:
        asymptotic = small_volume_asymptotic(curve)
    except ProfileDomainError as exc:
        logger.warning("no asymptotic fit: %s", exc)
        asymptotic = None
    hypotheses = viscosity_ok and asymptotic is not None and asymptotic.ok
    volume_ok = bool(curve.V_total <= V_bound * (1 + rtol))

    if not hypotheses:
        status = Comparison.NOT_APPLICABLE
    elif volume_ok:
        status = Comparison.PASS
    else:
        status = Comparison.CONTRADICTION
    logger.info("comparison: V = %.12g, bound = %.12g, %s", curve.V_total, V_bound, status.value)
    return ComparisonVerdict(status, volume_ok, float(curve.V_total), V_bound, viscosity_ok, residual.worst, asymptotic)

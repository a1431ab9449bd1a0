"""
Principal eigenpairs of -gamma * Laplacian + V on rotationally symmetric manifolds.

The radial operator is discretized by vertex centred finite volumes on the metric grid: node i owns the dual
cell [r_{i-1/2}, r_{i+1/2}] (clipped to a half cell at the ends, which is the reflection condition y'(pole) = 0
at a smooth cap), the mass of a cell is the integral of w^(n-1) over it and neighbouring nodes are coupled by
gamma * w(r_{i+1/2})^(n-1) / (r_{i+1} - r_i).
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import eigsh, splu

from .exceptions import ConeSingularity, ConvergenceError, GridMismatch, RangeError, WarplabError
from .geometry import (
    CONE_TOL,
    FieldKind,
    RadialField,
    Topology,
    curvature_profile,
    laplacian_radial,
)

logger = logging.getLogger(__name__)

GridLevel = namedtuple("GridLevel", ["points", "h", "lambda1"])
SpectralCheck = namedtuple("SpectralCheck", ["holds", "worst_residual", "location", "residual"])
Discretization = namedtuple("Discretization", ["nodes", "mass", "conductance", "potential", "periodic", "dirichlet"])

INVERSE_ITERATION_MAX = 25

_GAUSS_NODES, _GAUSS_WEIGHTS = leggauss(3)


@dataclass(frozen=True, eq=False)
class SturmLiouvilleProblem:
    metric: object
    gamma: float
    potential: RadialField
    sector: int = 0

    def __post_init__(self):
        if self.gamma < 0:
            raise RangeError(f"gamma must be >= 0, got {self.gamma}")
        if self.sector < 0:
            raise RangeError(f"angular sector must be >= 0, got {self.sector}")
        if not self.metric.same_grid(self.potential.grid):
            raise GridMismatch("potential and metric live on different grids")
        values = self.potential.values
        inner = values[1:-1] if self.metric.topology == Topology.TWO_CAPS else values
        if not np.all(np.isfinite(inner)):
            raise WarplabError("potential must be finite on the interior")


@dataclass(frozen=True, eq=False)
class SpectralResult:
    lambda1: float
    eigenfunction: RadialField
    grid_levels: list = field(default_factory=list)
    extrapolated: float = None
    observed_order: float = None
    method: str = "sturm"

    @property
    def value(self):
        """best available estimate of the principal eigenvalue"""
        return self.lambda1 if self.extrapolated is None else self.extrapolated

    def to_dict(self):
        return {
            "method": self.method,
            "lambda1": self.lambda1,
            "extrapolated": self.extrapolated,
            "observed_order": self.observed_order,
            "grid_levels": [level._asdict() for level in self.grid_levels],
        }


def _check_caps(metric):
    if metric.topology != Topology.TWO_CAPS:
        return
    _, dw, _ = metric.evaluate(metric.grid[[0, -1]])
    for value, where in zip(np.abs(dw), metric.grid[[0, -1]]):
        if abs(value - 1.0) > CONE_TOL:
            raise ConeSingularity(f"unresolved cap at r = {where:.6g}: |w'| = {value:.6g}")


def _density_integral(metric, a, b):
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b)[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    density = np.abs(metric.warp_at(nodes)) ** (metric.n - 1)
    return half * (density @ _GAUSS_WEIGHTS)


def discretize(problem, grid=None):
    """finite volume data of `problem` on `grid` (the metric grid by default)"""
    metric = problem.metric
    n = metric.n
    grid = metric.grid if grid is None else np.asarray(grid, dtype=float)
    periodic = metric.topology == Topology.PERIODIC

    mids = 0.5 * (grid[:-1] + grid[1:])
    right = _density_integral(metric, grid[:-1], mids)  # [r_i, r_{i+1/2}]
    left = _density_integral(metric, mids, grid[1:])  # [r_{i+1/2}, r_{i+1}]
    mass = np.zeros_like(grid)
    mass[:-1] += right
    mass[1:] += left
    conductance = problem.gamma * np.abs(metric.warp_at(mids)) ** (n - 1) / np.diff(grid)

    if grid is metric.grid:
        potential = problem.potential.values.copy()
    else:
        potential = problem.potential.at(grid, metric.topology)

    if problem.sector:
        k = problem.sector
        with np.errstate(divide="ignore"):
            potential = potential + problem.gamma * k * (k + n - 2) / metric.warp_at(grid) ** 2

    dirichlet = problem.sector > 0 and metric.topology == Topology.TWO_CAPS
    if periodic:
        # node K duplicates node 0
        mass[0] += mass[-1]
        mass = mass[:-1]
        potential = potential[:-1]
    return Discretization(grid, mass, conductance, potential, periodic, dirichlet)


def _operator(disc):
    """sparse y-form operator (B y)_i = [sum_j c_ij (y_i - y_j)] / m_i + V_i y_i together with the active node slice"""
    c, m, V = disc.conductance, disc.mass, disc.potential
    size = len(m)
    if disc.periodic:
        left = np.roll(c, 1)  # edge (i-1, i); edge (K-1, 0) wraps around
        right = c
        rows = np.arange(size)
        diag = (left + right) / m + V
        B = sparse.diags(diag, format="lil")
        B[rows, (rows + 1) % size] = -right / m
        B[rows, (rows - 1) % size] = -left / m
        return B.tocsc(), slice(0, size)

    left = np.concatenate([[0.0], c])
    right = np.concatenate([c, [0.0]])
    diag = (left + right) / m + V
    upper = -c / m[:-1]
    lower = -c / m[1:]
    active = slice(1, size - 1) if disc.dirichlet else slice(0, size)
    B = sparse.diags([lower, diag, upper], [-1, 0, 1], format="csc")
    return B[active, active].tocsc(), active


def _symmetric_tridiagonal(disc, active):
    c, m, V = disc.conductance, disc.mass, disc.potential
    left = np.concatenate([[0.0], c])
    right = np.concatenate([c, [0.0]])
    d = ((left + right) / m + V)[active]
    e = (-c / np.sqrt(m[:-1] * m[1:]))[active][: len(d) - 1]
    return d, e


def sturm_count(d, e, x):
    """number of eigenvalues of the symmetric tridiagonal (d, e) below x"""
    count = 0
    q = d[0] - x
    tiny = np.finfo(float).tiny
    e2 = e * e
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        if q == 0:
            q = tiny
        q = d[i] - x - e2[i - 1] / q
        if q < 0:
            count += 1
    return count


def _certified_smallest(d, e):
    """smallest eigenvalue by Sturm bisection, certified by counting on both sides"""
    lam = float(eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, 0))[0])
    norm = float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e), initial=0.0))
    slack = max(1e-9 * abs(lam), 64 * np.finfo(float).eps * norm)
    below, above = sturm_count(d, e, lam - slack), sturm_count(d, e, lam + slack)
    if below != 0 or above < 1:
        raise ConvergenceError(f"Sturm count does not certify {lam:.12g} as the smallest eigenvalue")
    return lam


def _smallest_sparse(B, mass):
    """smallest eigenvalue of the symmetrized operator by shift-invert Lanczos"""
    root = np.sqrt(mass)
    S = sparse.diags(root) @ B @ sparse.diags(1.0 / root)
    S = (0.5 * (S + S.T)).tocsc()
    diag = S.diagonal()
    offsum = np.asarray(abs(S).sum(axis=1)).ravel() - np.abs(diag)
    shift = float(np.min(diag - offsum)) - 1.0
    values = eigsh(S, k=1, sigma=shift, which="LM", v0=np.ones(S.shape[0]), return_eigenvectors=False)
    return float(values[0])


def _inverse_iteration(B, lam):
    """eigenvector of B for the isolated eigenvalue lam, normalized to max 1 and positive sum"""
    size = B.shape[0]
    shift = lam - 1e-8 * (1.0 + abs(lam))
    lu = splu((B - shift * sparse.identity(size, format="csc")).tocsc())
    y = np.ones(size)
    previous = np.inf
    for iteration in range(INVERSE_ITERATION_MAX):
        nxt = lu.solve(y)
        nxt /= nxt[np.argmax(np.abs(nxt))]
        change = float(np.max(np.abs(nxt - y)))
        # rounding in the nearly singular solve limits how far successive iterates can agree
        if change <= 1e-10 or (change <= 1e-6 and change >= previous):
            logger.debug("inverse iteration stopped after %d steps (change %.3g)", iteration + 1, change)
            return nxt
        y, previous = nxt, change
    raise ConvergenceError(f"inverse iteration did not converge in {INVERSE_ITERATION_MAX} steps")


def _energy(disc, y):
    """discrete quadratic form and squared norm of y in the y-form variables"""
    if disc.periodic:
        jumps = np.roll(y, -1) - y
    else:
        jumps = np.diff(y)
    weighted = disc.mass * y * y
    potential = np.where(weighted > 0, disc.potential, 0.0)
    energy = float(np.sum(disc.conductance * jumps**2)) + float(np.sum(potential * weighted))
    return energy, float(np.sum(weighted))


def _solve_level(problem, grid=None, with_vector=False):
    disc = discretize(problem, grid)
    B, active = _operator(disc)
    if disc.periodic:
        lam = _smallest_sparse(B, disc.mass)
    else:
        lam = _certified_smallest(*_symmetric_tridiagonal(disc, active))
    if not with_vector:
        return lam, disc, None

    y = np.zeros_like(disc.mass)
    y[active] = _inverse_iteration(B, lam)
    energy, norm = _energy(disc, y)
    y /= math.sqrt(norm)
    inner = y[1:-1] if disc.dirichlet else y
    if not np.all(inner > 0):
        raise ConvergenceError("principal eigenfunction is not positive")
    if disc.periodic:
        y = np.append(y, y[0])
    # Rayleigh quotient of the converged vector refines the bisection value
    return energy / norm, disc, y


def _richardson(levels):
    (h1, l1), (h2, l2) = [(lvl.h, lvl.lambda1) for lvl in levels[-2:]]
    return (h1**2 * l2 - h2**2 * l1) / (h1**2 - h2**2)


def _observed_order(levels):
    if len(levels) < 3:
        return None
    (h0, l0), (h1, l1), (h2, l2) = [(lvl.h, lvl.lambda1) for lvl in levels[-3:]]
    lower, upper = l1 - l2, l0 - l1
    if lower == 0 or upper == 0 or (lower > 0) != (upper > 0):
        return None
    return math.log(upper / lower) / math.log(h1 / h2)


def principal_eigenvalue(problem, levels=3):
    """
    Smallest eigenvalue of -gamma * Laplacian + V restricted to the problem's angular sector, with its positive
    eigenfunction on the metric grid. Coarser uniform levels (halving the interval count) feed a Richardson
    extrapolation of the eigenvalue.
    """
    metric = problem.metric
    if problem.gamma == 0:
        # multiplication operator: exact, nothing is discretized
        idx = int(np.argmin(problem.potential.values))
        phi = np.zeros_like(metric.grid)
        phi[idx] = 1.0
        lam = float(problem.potential.values[idx])
        eigenfunction = RadialField(metric.grid, phi, FieldKind.EIGENFUNCTION)
        return SpectralResult(lam, eigenfunction, method="degenerate")

    _check_caps(metric)
    lam, disc, y = _solve_level(problem, with_vector=True)
    method = "shift-invert" if disc.periodic else "sturm"
    K = len(metric.grid) - 1
    grid_levels = [GridLevel(K + 1, metric.length / K, lam)]
    for level in range(1, levels):
        coarse = K >> level
        if coarse < 8:
            break
        grid = np.linspace(metric.grid[0], metric.grid[-1], coarse + 1)
        coarse_lam, _, _ = _solve_level(problem, grid)
        grid_levels.insert(0, GridLevel(coarse + 1, metric.length / coarse, coarse_lam))
        logger.debug("level %d points: lambda1 = %.15g", coarse + 1, coarse_lam)

    extrapolated = _richardson(grid_levels) if len(grid_levels) > 1 else None
    order = _observed_order(grid_levels)
    logger.info("lambda1 = %.12g (extrapolated %s, order %s)", lam, extrapolated, order)
    eigenfunction = RadialField(metric.grid, y, FieldKind.EIGENFUNCTION)
    return SpectralResult(lam, eigenfunction, grid_levels, extrapolated, order, method)


def rayleigh_quotient(problem, phi):
    if not problem.metric.same_grid(phi.grid):
        raise GridMismatch("test function and metric live on different grids")
    disc = discretize(problem)
    y = phi.values[:-1] if disc.periodic else phi.values.copy()
    if disc.dirichlet:
        y[0] = y[-1] = 0.0
    energy, denominator = _energy(disc, y)
    if denominator <= 0:
        raise WarplabError("Rayleigh quotient of a vanishing function")
    return energy / denominator


def spectral_residual(metric, u, gamma, lam):
    """R = u * Ric_min - gamma * Laplacian(u) - (n - 1) * lam * u on the metric grid"""
    if not metric.same_grid(u.grid):
        raise GridMismatch("weight and metric live on different grids")
    ric_min = curvature_profile(metric).ric_min
    lap = laplacian_radial(metric, u).values
    return RadialField(metric.grid, u.values * ric_min - gamma * lap - (metric.n - 1) * lam * u.values)


def verify_spectral_condition(metric, u, gamma, lam, tol=1e-6, mask=None):
    """pointwise check of gamma * Laplacian(u) <= u * Ric - (n - 1) * lam * u"""
    residual = spectral_residual(metric, u, gamma, lam)
    values = residual.values if mask is None else residual.values[mask]
    grid = metric.grid if mask is None else metric.grid[mask]
    idx = int(np.argmin(values))
    worst = float(values[idx])
    return SpectralCheck(worst >= -tol, worst, float(grid[idx]), residual)


def coercivity_constant(metric, u, alpha, beta, levels=3):
    """
    Smallest c with alpha * |v'|^2 + beta * |(v / u)'|^2 >= c * v^2 in the w^(n-1) dr weighted sense, found as a
    generalized eigenvalue of the finite volume forms, Richardson extrapolated over grid levels.
    """
    if alpha < 0 or beta < 0 or alpha + beta == 0:
        raise RangeError("coercivity weights must be nonnegative and not both zero")
    weight = u

    def level(grid):
        zero = RadialField(metric.grid, np.zeros_like(metric.grid), FieldKind.POTENTIAL, source=np.zeros_like)
        disc = discretize(SturmLiouvilleProblem(metric, 1.0, zero), grid)
        at = weight.values if grid is None else weight.at(grid, metric.topology)
        inv = 1.0 / (at[:-1] if disc.periodic else at)
        L, _ = _operator(disc)
        stiffness = sparse.diags(disc.mass) @ L
        form = alpha * stiffness + beta * sparse.diags(inv) @ stiffness @ sparse.diags(inv)
        B = (sparse.diags(1.0 / disc.mass) @ form).tocsc()
        return _smallest_sparse(B, disc.mass)

    K = len(metric.grid) - 1
    grid_levels = [GridLevel(K + 1, metric.length / K, level(None))]
    for lvl in range(1, levels):
        coarse = K >> lvl
        if coarse < 8:
            break
        grid = np.linspace(metric.grid[0], metric.grid[-1], coarse + 1)
        grid_levels.insert(0, GridLevel(coarse + 1, metric.length / coarse, level(grid)))
    extrapolated = _richardson(grid_levels) if len(grid_levels) > 1 else grid_levels[-1].lambda1
    return extrapolated, grid_levels


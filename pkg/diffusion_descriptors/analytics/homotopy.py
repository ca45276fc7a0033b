"""Gaussian diffusion of cost landscapes and optimisation by continuation."""

import logging
from typing import Callable, Optional

import numpy as np
from scipy import ndimage, optimize
from scipy.interpolate import RectBivariateSpline

from .matching import intensity_energy
from ..exceptions import DomainError, PreconditionError
from ..models.field import SimilarityTransform
from ..models.homotopy import CostGrid, CostGridSpec, DiffusionSchedule, ToyProblem, TrajectoryPoint

logger = logging.getLogger(__name__)

# Kernel support of the landscape smoothing, in standard deviations.
SMOOTHING_TRUNCATE = 6.0

CONVERGENCE_TOL = 1e-4
MAX_SWEEPS = 200


def default_schedule(sigma0: float = 1.0, stages: int = 8) -> DiffusionSchedule:
    """Geometric schedule sigma0 * 2^-k, k < stages, followed by 0."""
    return DiffusionSchedule.default(sigma0, stages)


def shift(theta: float) -> SimilarityTransform:
    """1D translation x -> x - theta, i.e. f(x - theta)."""
    return SimilarityTransform(b=(-theta, 0.0))


def template_energies(problem: ToyProblem, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """E1 and E2 at every shift in ``thetas``."""
    e1 = np.array([intensity_energy(problem.f, problem.p1, shift(t)) for t in thetas])
    e2 = np.array([intensity_energy(problem.f, problem.p2, shift(t)) for t in thetas])
    return e1, e2


def _combine(c1: np.ndarray, e1: np.ndarray, e2: np.ndarray, lam: float) -> np.ndarray:
    return c1 ** 2 * e1 + (1.0 - c1) ** 2 * e2 + lam * (c1 * (1.0 - c1)) ** 2


def toy_cost(problem: ToyProblem, c1: float, theta: float) -> float:
    """
    Penalised two-template cost.

    c1^2 E1(theta) + (1 - c1)^2 E2(theta) + lambda (c1 (1 - c1))^2, where
    E_k(theta) is the squared discrepancy of f(x - theta) against p_k.
    """
    e1 = intensity_energy(problem.f, problem.p1, shift(theta))
    e2 = intensity_energy(problem.f, problem.p2, shift(theta))
    return float(_combine(np.asarray(c1), e1, e2, problem.lam))


def smooth_cost(grid: CostGrid, sigma: float) -> CostGrid:
    """
    Convolve a landscape with an isotropic Gaussian of std sigma (axis units).

    Edges are replicated; the recorded diffusion level composes in quadrature.
    """
    if not sigma > 0:
        raise DomainError(f"smoothing sigma must be positive, got {sigma}")
    pixel_sigma = (sigma / grid.c1_step, sigma / grid.theta_step)
    values = ndimage.gaussian_filter(grid.values, sigma=pixel_sigma, mode="nearest", truncate=SMOOTHING_TRUNCATE)
    return grid.with_values(values, float(np.hypot(grid.sigma, sigma)))


def landscape(problem: ToyProblem, spec: Optional[CostGridSpec] = None, sigma: float = 0.0) -> CostGrid:
    """Sample the toy cost on the grid, then smooth when sigma > 0."""
    if sigma < 0:
        raise DomainError(f"diffusion level must be non-negative, got {sigma}")
    spec = spec or CostGridSpec()
    c1_axis, theta_axis = spec.c1_axis, spec.theta_axis
    e1, e2 = template_energies(problem, theta_axis)
    values = _combine(c1_axis[:, np.newaxis], e1[np.newaxis, :], e2[np.newaxis, :], problem.lam)
    grid = CostGrid(c1_axis, theta_axis, values, 0.0)
    logger.debug("Sampled %dx%d toy landscape", spec.n_c1, spec.n_theta)
    return smooth_cost(grid, sigma) if sigma > 0 else grid


def count_local_minima(grid: CostGrid) -> list[tuple[int, int]]:
    """Grid nodes strictly below all of their (up to 8) neighbours."""
    footprint = np.ones((3, 3), dtype=bool)
    footprint[1, 1] = False
    neighbours = ndimage.minimum_filter(grid.values, footprint=footprint, mode="constant", cval=np.inf)
    return [(int(i), int(j)) for i, j in np.argwhere(grid.values < neighbours)]


def _refine(func: Callable[[float], float], a: float, b: float, c: float) -> float:
    """Minimise func on the bracket spanned by a and c around b."""
    lo, hi = min(a, c), max(a, c)
    if hi - lo <= 0:
        return b
    fb = func(b)
    if lo < b < hi and fb < func(lo) and fb < func(hi):
        result = optimize.minimize_scalar(func, bracket=(lo, b, hi), method="golden")
    else:
        result = optimize.minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    x = float(np.clip(result.x, lo, hi))
    return x if func(x) <= fb else b


def _line_search(func: Callable[[float], float], t0: float, step: float, lo: float, hi: float) -> float:
    """Walk downhill in grid steps, then refine inside the final bracket."""
    f0 = func(t0)
    for direction in (1.0, -1.0):
        t1 = float(np.clip(t0 + direction * step, lo, hi))
        if t1 != t0 and func(t1) < f0:
            break
    else:
        return _refine(func, max(t0 - step, lo), t0, min(t0 + step, hi))

    prev, cur, f_cur = t0, t1, func(t1)
    while True:
        nxt = float(np.clip(cur + direction * step, lo, hi))
        if nxt == cur:
            break
        f_next = func(nxt)
        if f_next >= f_cur:
            break
        prev, cur, f_cur = cur, nxt, f_next
    return _refine(func, prev, cur, nxt)


def local_minimize(grid: CostGrid, start: tuple[float, float]) -> tuple[float, float]:
    """
    Coordinate descent on the bicubic interpolant of a landscape.

    Each sweep runs a golden-section line search along c1 and then theta;
    iteration stops once both coordinates move less than 1e-4.
    """
    spline = RectBivariateSpline(grid.c1_axis, grid.theta_axis, grid.values, kx=3, ky=3, s=0)
    c1_lo, c1_hi = float(grid.c1_axis[0]), float(grid.c1_axis[-1])
    th_lo, th_hi = float(grid.theta_axis[0]), float(grid.theta_axis[-1])
    c1 = float(np.clip(start[0], c1_lo, c1_hi))
    theta = float(np.clip(start[1], th_lo, th_hi))

    for sweep in range(MAX_SWEEPS):
        new_c1 = _line_search(lambda u: float(spline.ev(u, theta)), c1, grid.c1_step, c1_lo, c1_hi)
        new_theta = _line_search(lambda u: float(spline.ev(new_c1, u)), theta, grid.theta_step, th_lo, th_hi)
        moved = max(abs(new_c1 - c1), abs(new_theta - theta))
        c1, theta = new_c1, new_theta
        if moved < CONVERGENCE_TOL:
            logger.debug("Local descent converged after %d sweeps at (%.4f, %.4f)", sweep + 1, c1, theta)
            break
    else:
        logger.warning("Local descent stopped after %d sweeps without converging", MAX_SWEEPS)
    return c1, theta


def continuation_minimize(
    problem: ToyProblem,
    schedule: Optional[DiffusionSchedule] = None,
    spec: Optional[CostGridSpec] = None,
    start: Optional[tuple[float, float]] = None,
    require_unique: bool = True,
) -> list[TrajectoryPoint]:
    """
    Optimisation by diffusion and continuation.

    Stage 0 takes the grid minimiser of the sigma_0-smoothed landscape; every
    later stage runs local descent on its own smoothed landscape from the
    previous point, ending on the raw landscape. The single-stage schedule
    [0] is plain local descent from ``start`` (default (0, 0)).

    Args:
        problem: Toy problem
        schedule: Decreasing diffusion levels ending at 0
        spec: Landscape sampling grid
        start: Start point for plain descent
        require_unique: Enforce a single local minimum at sigma_0

    Returns:
        One TrajectoryPoint per stage, costs taken on the raw cost

    Raises:
        PreconditionError: if the sigma_0 landscape has several local minima
    """
    schedule = schedule or default_schedule()
    raw = landscape(problem, spec, 0.0)
    trajectory: list[TrajectoryPoint] = []

    if schedule.is_plain_descent:
        c1, theta = local_minimize(raw, start or (0.0, 0.0))
        return [TrajectoryPoint(0, 0.0, c1, theta, toy_cost(problem, c1, theta))]

    point = (0.0, 0.0)
    for stage, sigma in enumerate(schedule.sigmas):
        grid = smooth_cost(raw, sigma) if sigma > 0 else raw
        if stage == 0:
            minima = count_local_minima(grid)
            if require_unique and len(minima) != 1:
                raise PreconditionError(
                    f"sigma_0 = {sigma:g} landscape has {len(minima)} local minima; increase sigma_0",
                    count=len(minima),
                )
            i, j = grid.argmin()
            point = (float(grid.c1_axis[i]), float(grid.theta_axis[j]))
        else:
            point = local_minimize(grid, point)
        cost = toy_cost(problem, *point)
        trajectory.append(TrajectoryPoint(stage, float(sigma), point[0], point[1], cost))
        logger.debug("Stage %d (sigma %.4g): c1 %.4f theta %.4f cost %.6g", stage, sigma, point[0], point[1], cost)

    return trajectory

"""Sampling, gradients and warps of scalar fields."""

import logging
import math

import numpy as np

from ..exceptions import BorderError, DomainError
from ..models.field import (
    AffineTransform,
    GradientSample,
    GridSpec,
    ScalarField,
    TWO_PI,
    Transform,
    rotation_matrix,
)

logger = logging.getLogger(__name__)

# Tolerance, in pixel units, for points sitting exactly on the domain edge.
_EDGE_TOL = 1e-9


def _axis_weights(u: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Lower node index and fractional offset along one axis of length n."""
    if n == 1:
        return np.zeros(u.shape, dtype=int), np.zeros(u.shape)
    clipped = np.clip(u, 0.0, n - 1)
    i0 = np.minimum(np.floor(clipped).astype(int), n - 2)
    return i0, clipped - i0


def sample_points(field: ScalarField, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Bilinear interpolation at many world points.

    Args:
        field: Field to sample
        points: Array of shape (..., 2) in world coordinates

    Returns:
        Tuple (values, inside); values are 0 where ``inside`` is False
    """
    points = np.asarray(points, dtype=float)
    x0, y0 = field.origin
    u = (points[..., 0] - x0) / field.spacing
    v = (points[..., 1] - y0) / field.spacing

    inside = (u >= -_EDGE_TOL) & (u <= field.width - 1 + _EDGE_TOL)
    inside &= (v >= -_EDGE_TOL) & (v <= field.height - 1 + _EDGE_TOL)

    i0, fu = _axis_weights(u, field.width)
    j0, fv = _axis_weights(v, field.height)
    i1 = np.minimum(i0 + 1, field.width - 1)
    j1 = np.minimum(j0 + 1, field.height - 1)

    values = field.values
    top = (1.0 - fu) * values[j0, i0] + fu * values[j0, i1]
    bottom = (1.0 - fu) * values[j1, i0] + fu * values[j1, i1]
    sampled = (1.0 - fv) * top + fv * bottom
    return np.where(inside, sampled, 0.0), inside


def sample_bilinear(field: ScalarField, p: tuple[float, float]) -> tuple[float, bool]:
    """Intensity at one world point, with an inside-the-domain flag."""
    values, inside = sample_points(field, np.asarray(p, dtype=float))
    return float(values), bool(inside)


def angle_of(v: np.ndarray) -> np.ndarray:
    """Angle of 2-vectors (last axis) in [0, 2 pi)."""
    v = np.asarray(v, dtype=float)
    angle = np.mod(np.arctan2(v[..., 1], v[..., 0]), TWO_PI)
    return np.where(angle >= TWO_PI, 0.0, angle)


def _interior(field: ScalarField, p: np.ndarray) -> bool:
    x_min, x_max, y_min, y_max = field.domain
    h = field.spacing
    tol = _EDGE_TOL * h
    inside_x = x_min + h - tol <= p[0] <= x_max - h + tol
    if field.is_signal:
        return inside_x and abs(p[1] - y_min) <= tol
    return inside_x and y_min + h - tol <= p[1] <= y_max - h + tol


def gradient(field: ScalarField, p: tuple[float, float]) -> GradientSample:
    """
    Central-difference gradient of the bilinear interpolant.

    The step equals the pixel spacing. For 1-row signals gy is 0.

    Raises:
        BorderError: if p lies in the one-pixel border
    """
    p = np.asarray(p, dtype=float)
    if not _interior(field, p):
        raise BorderError(f"gradient requested at {tuple(p)} inside the one-pixel border")
    h = field.spacing
    steps = np.array([[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
    values, _ = sample_points(field, p + steps)
    gx = (values[0] - values[1]) / (2.0 * h)
    gy = 0.0 if field.is_signal else (values[2] - values[3]) / (2.0 * h)
    return GradientSample(float(gx), float(gy))


def gradient_field(field: ScalarField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Central differences at every node.

    Returns:
        Tuple (gx, gy, mask) of (height, width) arrays; mask marks the
        interior nodes where the differences are defined, gx and gy are 0
        elsewhere.
    """
    v = field.values
    h = field.spacing
    gx = np.zeros_like(v)
    gy = np.zeros_like(v)
    mask = np.zeros(v.shape, dtype=bool)

    if field.width >= 3:
        gx[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2.0 * h)
    if field.is_signal:
        mask[:, 1:-1] = True
    elif field.height >= 3:
        gy[1:-1, :] = (v[2:, :] - v[:-2, :]) / (2.0 * h)
        mask[1:-1, 1:-1] = True

    gx[~mask] = 0.0
    gy[~mask] = 0.0
    return gx, gy, mask


def warp(field: ScalarField, t: Transform, out_spec: GridSpec) -> ScalarField:
    """
    Resample ``field`` composed with ``t`` on a new grid.

    The node at world x receives field(t(x)); nodes mapped outside the field
    domain get 0 and are recorded in the coverage mask.

    Raises:
        DomainError: if t is a singular affine map
    """
    if isinstance(t, AffineTransform) and abs(t.det) < 1e-12:
        raise DomainError("cannot warp with a singular affine transform (det(A) = 0)")

    mapped = t.apply(out_spec.coordinates())
    values, inside = sample_points(field, mapped)
    coverage = float(np.mean(inside))
    logger.debug(
        "Warped %dx%d field onto %dx%d grid, coverage %.3f",
        field.width, field.height, out_spec.width, out_spec.height, coverage,
    )
    return ScalarField(
        width=out_spec.width,
        height=out_spec.height,
        values=values,
        spacing=out_spec.spacing,
        origin=out_spec.origin,
        coverage=inside,
    )


def scaled_rotation_identities(a: float, alpha: float, x: np.ndarray) -> tuple[float, float]:
    """
    Residuals of ||a R x|| = a ||x|| and angle(a R_alpha x) = alpha + angle(x).

    The angular residual is reduced to (-pi, pi].
    """
    x = np.asarray(x, dtype=float)
    rotated = a * (rotation_matrix(alpha) @ x)
    norm_residual = float(np.linalg.norm(rotated) - a * np.linalg.norm(x))
    diff = float(angle_of(rotated) - angle_of(x) - alpha)
    angle_residual = math.remainder(diff, TWO_PI)
    return norm_residual, angle_residual

"""Descriptor engine: orientation densities pooled by Gaussian diffusion."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from numpy.polynomial import legendre

from . import kernels
from .field_ops import gradient, gradient_field, sample_points
from ..exceptions import DomainError
from ..models.descriptor import Descriptor, DescriptorKind, DescriptorParams
from ..models.field import ScalarField, TWO_PI

logger = logging.getLogger(__name__)

# Smallest domain size used when the sampled scale interval reaches zero.
_MIN_SCALE = 1e-6


def heat_kernel_constant(sigma_d: float, sigma_a: float) -> float:
    """Normalisation 1 / (8 sqrt(2) pi^{3/2} sigma_d sigma_a^2) of the exact heat kernel."""
    return 1.0 / (8.0 * math.sqrt(2.0) * math.pi ** 1.5 * sigma_d * sigma_a ** 2)


def closed_inner_factor(
    x: np.ndarray,
    y: np.ndarray,
    sigma_d: float,
    sigma_s: float,
    eps_x: float = 1e-6,
) -> np.ndarray:
    """
    Spatial factor of scale pooling with the inner e^s linearised.

    Equals the integral over u of e^u k2(y - (1 + u) x; sigma_d) k1(u; sigma_s),
    written as k2(y - x) (tau / tau2) exp(mu^2 sigma_s^2 / (2 tau^2 tau2^2)) with
    tau = sigma_d / ||x||, tau2 = sqrt(sigma_s^2 + tau^2) and
    mu = (x.y + sigma_d^2) / ||x||^2 - 1. Points with ||x|| < eps_x use k2(y - x).
    x and y carry components on the last axis and broadcast.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx2 = np.sum(x ** 2, axis=-1)
    xy = np.sum(x * y, axis=-1)
    diff2 = np.sum((y - x) ** 2, axis=-1)

    log_base = -diff2 / (2.0 * sigma_d ** 2) - math.log(2.0 * math.pi * sigma_d ** 2)

    regular = nx2 >= eps_x ** 2
    safe_nx2 = np.where(regular, nx2, 1.0)
    tau_sq = sigma_d ** 2 / safe_nx2
    tau2_sq = sigma_s ** 2 + tau_sq
    mu = (xy + sigma_d ** 2) / safe_nx2 - 1.0
    log_scale = 0.5 * np.log(tau_sq / tau2_sq) + mu ** 2 * sigma_s ** 2 / (2.0 * tau_sq * tau2_sq)

    return np.exp(log_base + np.where(regular, log_scale, 0.0))


def closed_both_factor(x: np.ndarray, y: np.ndarray, sigma_d: float, sigma_s: float) -> np.ndarray:
    """
    Spatial factor of scale pooling with inner and outer e^s linearised.

    Equals the integral over u of (1 + u) k2(y - (1 + u) x; sigma_d) k1(u; sigma_s).
    Negative exactly when x.y < -sigma_d^2 / sigma_s^2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx2 = np.sum(x ** 2, axis=-1)
    xy = np.sum(x * y, axis=-1)
    diff2 = np.sum((y - x) ** 2, axis=-1)
    cross = x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]

    spread = sigma_d ** 2 + sigma_s ** 2 * nx2
    scale = (sigma_d ** 2 + sigma_s ** 2 * xy) / (2.0 * math.pi * sigma_d * spread ** 1.5)
    exponent = -(sigma_d ** 2 * diff2 + sigma_s ** 2 * cross ** 2) / (2.0 * sigma_d ** 2 * spread)
    return scale * np.exp(exponent)


def heat_integrand(
    beta: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    grad: np.ndarray,
    sigma_d: float,
    sigma_a: float,
    eps_grad: float = 1e-6,
) -> np.ndarray:
    """
    Pointwise integrand of the heat descriptor at (beta, x) from the pixel y.

    Args:
        beta: Orientation(s)
        x: Descriptor node(s), components on the last axis
        y: Pixel position(s)
        grad: Image gradient(s) at y
        sigma_d: Spatial diffusion std
        sigma_a: Affine diffusion std
        eps_grad: Magnitude floor; weaker gradients contribute 0

    Returns:
        Broadcast array of integrand values (all >= 0)
    """
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    grad = np.asarray(grad, dtype=float)

    magnitude = np.sqrt(np.sum(grad ** 2, axis=-1))
    valid = magnitude >= eps_grad
    g = np.where(valid, magnitude, 1.0)
    unit = grad / g[..., np.newaxis]
    v = np.stack([np.cos(beta), np.sin(beta)], axis=-1) / g[..., np.newaxis]

    xv = np.sum(x * v, axis=-1)
    t = np.sqrt(xv ** 2 / (2.0 * sigma_d ** 2) + 1.0 / (2.0 * sigma_a ** 2 * g ** 2))
    projection = np.sum(y * unit, axis=-1)
    argument = -(projection * xv / sigma_d ** 2 + np.sum(unit * v, axis=-1) / sigma_a ** 2) / (2.0 * t)

    d = x - y
    perp = (grad[..., 0] * d[..., 1] - grad[..., 1] * d[..., 0]) / g
    perp_sigma = np.sqrt(sigma_d ** 2 + sigma_a ** 2 * np.sum(x ** 2, axis=-1))

    log_value = (
        -(projection ** 2) / (2.0 * sigma_d ** 2)
        + kernels.log_w(argument)
        - 2.0 * np.log(g)
        - 3.0 * np.log(t)
        + kernels.log_gauss1(perp, perp_sigma)
    )
    return np.where(valid, np.exp(log_value), 0.0)


def beta_bin(beta: float, n_bins: int) -> int:
    """Orientation bin (centred on multiples of 2 pi / n_bins) holding beta."""
    return int(np.floor(beta / (TWO_PI / n_bins) + 0.5)) % n_bins


def raw_density(patch: ScalarField, beta: float, x: tuple[float, float],
                params: Optional[DescriptorParams] = None) -> float:
    """
    Hard-binned orientation density of ``patch`` at (beta, x).

    The gradient at x lands in the bin holding its orientation with weight
    ||grad|| / bin_width; every other bin, and gradients below eps_grad, give 0.
    """
    params = params or DescriptorParams()
    sample = gradient(patch, x)
    if sample.magnitude < params.eps_grad:
        return 0.0
    n = params.n_beta_bins
    if beta_bin(sample.orientation, n) != beta_bin(beta, n):
        return 0.0
    return sample.magnitude / params.beta_step


@dataclass
class GradientSamples:
    """Interior pixels of a field with their gradients."""

    positions: np.ndarray
    gradients: np.ndarray
    magnitude: np.ndarray
    orientation: np.ndarray
    cell_measure: float

    @classmethod
    def from_field(cls, field: ScalarField) -> "GradientSamples":
        """Collect central-difference gradients at the interior nodes."""
        gx, gy, mask = gradient_field(field)
        positions = field.grid.coordinates()[mask]
        gradients = np.stack([gx[mask], gy[mask]], axis=-1)
        magnitude = np.hypot(gradients[:, 0], gradients[:, 1])
        orientation = np.mod(np.arctan2(gradients[:, 1], gradients[:, 0]), TWO_PI)
        return cls(positions, gradients, magnitude, orientation, field.grid.cell_measure)

    def __len__(self) -> int:
        return len(self.magnitude)


def rotation_coupled_density(
    field: ScalarField,
    params: DescriptorParams,
    beta: float,
    x: tuple[float, float],
) -> float:
    """
    Orientation density smoothed jointly over rotation and translation.

    Integrating the orientation comb against a rotation kernel leaves, per
    pixel y and wrap n, the angle a = angle(grad f(y)) - beta + 2 pi n:
    sum_y ||grad f|| sum_n k_r(a) k_d(y - R_a x). Descriptors smooth only
    the comb; this is the reference they approximate.
    """
    samples = GradientSamples.from_field(field)
    x = np.asarray(x, dtype=float)
    total = 0.0
    for n in range(-params.wraps, params.wraps + 1):
        angle = samples.orientation - beta + TWO_PI * n
        c, s = np.cos(angle), np.sin(angle)
        rotated = np.stack([c * x[0] - s * x[1], s * x[0] + c * x[1]], axis=-1)
        spatial = kernels.gauss(samples.positions - rotated, params.sigma_d, dim=2)
        total += float(np.sum(samples.magnitude * kernels.gauss(angle, params.sigma_r) * spatial))
    return total * samples.cell_measure


class DescriptorEngine:
    """
    Computes descriptors h(beta, x) of a field on the parameter grid.

    Every variant is a Riemann sum over the interior pixels y of an
    orientation weight times a spatial pooling factor; they differ in the
    spatial factor (and, for heat, in coupling beta with x).
    """

    def __init__(self, params: Optional[DescriptorParams] = None):
        """
        Initialize the engine.

        Args:
            params: Descriptor parameters (defaults when omitted)
        """
        self.params = params or DescriptorParams()

    def compute(self, field: ScalarField, kind: Union[DescriptorKind, str]) -> Descriptor:
        """Compute the descriptor of the given kind."""
        kind = DescriptorKind(kind)
        handlers: dict[DescriptorKind, Callable[[ScalarField], Descriptor]] = {
            DescriptorKind.SIFT: self.sift,
            DescriptorKind.DSP_SAMPLED: self.dsp_sampled,
            DescriptorKind.DSP_CLOSED_INNER: self.dsp_closed_inner,
            DescriptorKind.DSP_CLOSED_BOTH: self.dsp_closed_both,
            DescriptorKind.HEAT: self.heat,
            DescriptorKind.DF: self.df,
            DescriptorKind.RAW_DENSITY: self.raw_density_descriptor,
        }
        descriptor = handlers[kind](field)
        logger.debug(
            "Computed %s descriptor %s on a %dx%d field",
            kind.value, descriptor.values.shape, field.width, field.height,
        )
        return descriptor

    def _nodes(self) -> np.ndarray:
        return self.params.descriptor_grid.coordinates().reshape(-1, 2)

    def _orientation_weights(self, samples: GradientSamples) -> np.ndarray:
        """Wrapped-Gaussian orientation weight times magnitude and cell measure, shape (n_beta, n)."""
        p = self.params
        phase = p.beta_centers[:, np.newaxis] - samples.orientation[np.newaxis, :]
        smoothing = kernels.gauss_periodic(phase, p.sigma_r, p.wraps)
        return smoothing * samples.magnitude[np.newaxis, :] * samples.cell_measure

    @staticmethod
    def _spatial_gauss(nodes: np.ndarray, positions: np.ndarray, sigma: float) -> np.ndarray:
        diff2 = np.sum((nodes[:, np.newaxis, :] - positions[np.newaxis, :, :]) ** 2, axis=-1)
        return kernels.gauss_from_sq(diff2, sigma, dim=2)

    def _build(self, kind: DescriptorKind, flat: np.ndarray, axis: Optional[np.ndarray] = None) -> Descriptor:
        grid = self.params.descriptor_grid
        axis = self.params.beta_centers if axis is None else axis
        values = flat.reshape(len(axis), grid.height, grid.width)
        return Descriptor(kind=kind, values=values, beta_centers=axis, grid=grid, params=self.params)

    def _pool(self, kind: DescriptorKind, field: ScalarField,
              spatial: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Descriptor:
        samples = GradientSamples.from_field(field)
        nodes = self._nodes()
        if len(samples) == 0:
            return self._build(kind, np.zeros((self.params.n_beta_bins, len(nodes))))
        orientation = self._orientation_weights(samples)
        return self._build(kind, orientation @ spatial(nodes, samples.positions).T)

    def sift(self, field: ScalarField) -> Descriptor:
        """Continuous SIFT: comb smoothed in orientation, pooled by a Gaussian of width sigma_d."""
        sigma = self.params.sigma_d
        return self._pool(DescriptorKind.SIFT, field,
                          lambda nodes, pos: self._spatial_gauss(nodes, pos, sigma))

    def scale_quadrature(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Gauss-Legendre domain sizes and weights for sampled scale pooling.

        Nodes cover [sigma_d0 - 3 sigma_s, sigma_d0 + 3 sigma_s] clipped to
        positive sizes; weights include the Gaussian scale prior and sum to 1.

        Raises:
            DomainError: for fewer than 3 samples or an empty interval
        """
        p = self.params
        if p.n_scale_samples < 3:
            raise DomainError(f"sampled scale pooling needs at least 3 samples, got {p.n_scale_samples}")
        centre = p.nominal_sigma_d
        hi = centre + 3.0 * p.sigma_s
        lo = max(centre - 3.0 * p.sigma_s, _MIN_SCALE)
        if hi <= lo:
            raise DomainError(f"domain size interval [{lo}, {hi}] is empty")
        if centre - 3.0 * p.sigma_s < _MIN_SCALE:
            logger.warning("Scale interval clipped at %.3g; pooling over [%.3g, %.3g]", _MIN_SCALE, lo, hi)

        nodes, weights = legendre.leggauss(p.n_scale_samples)
        half = (hi - lo) / 2.0
        scales = half * nodes + (hi + lo) / 2.0
        weights = weights * half * kernels.gauss(scales - centre, p.sigma_s)
        return scales, weights / np.sum(weights)

    def dsp_sampled(self, field: ScalarField) -> Descriptor:
        """Domain-size pooling by quadrature over sigma_d."""
        scales, weights = self.scale_quadrature()

        def spatial(nodes: np.ndarray, positions: np.ndarray) -> np.ndarray:
            pooled = np.zeros((len(nodes), len(positions)))
            for scale, weight in zip(scales, weights):
                pooled += weight * self._spatial_gauss(nodes, positions, scale)
            return pooled

        return self._pool(DescriptorKind.DSP_SAMPLED, field, spatial)

    def dsp_closed_inner(self, field: ScalarField) -> Descriptor:
        """Closed-form scale pooling, inner exponential linearised."""
        p = self.params
        return self._pool(
            DescriptorKind.DSP_CLOSED_INNER, field,
            lambda nodes, pos: closed_inner_factor(
                nodes[:, np.newaxis, :], pos[np.newaxis, :, :], p.sigma_d, p.sigma_s, p.eps_x
            ),
        )

    def dsp_closed_both(self, field: ScalarField) -> Descriptor:
        """Closed-form scale pooling, inner and outer exponentials linearised."""
        p = self.params
        return self._pool(
            DescriptorKind.DSP_CLOSED_BOTH, field,
            lambda nodes, pos: closed_both_factor(
                nodes[:, np.newaxis, :], pos[np.newaxis, :, :], p.sigma_d, p.sigma_s
            ),
        )

    def heat(self, field: ScalarField) -> Descriptor:
        """
        Heat descriptor: exact diffusion over affine warps.

        Pixels with ||grad f|| < eps_grad are left out. With
        ``heat_full_constant`` the values carry the full kernel normalisation.
        """
        p = self.params
        samples = GradientSamples.from_field(field)
        nodes = self._nodes()
        values = np.zeros((p.n_beta_bins, len(nodes)))
        keep = samples.magnitude >= p.eps_grad
        if np.any(keep):
            positions = samples.positions[keep][np.newaxis, :, :]
            grads = samples.gradients[keep][np.newaxis, :, :]
            for b, beta in enumerate(p.beta_centers):
                integrand = heat_integrand(
                    beta, nodes[:, np.newaxis, :], positions, grads, p.sigma_d, p.sigma_a, p.eps_grad
                )
                values[b] = integrand.sum(axis=1) * samples.cell_measure
        if p.heat_full_constant:
            values *= heat_kernel_constant(p.sigma_d, p.sigma_a) * math.exp(-1.0 / (2.0 * p.sigma_a ** 2))
        return self._build(DescriptorKind.HEAT, values)

    def df(self, field: ScalarField) -> Descriptor:
        """Distribution field: smoothed intensity histogram pooled over space."""
        p = self.params
        levels = p.levels
        positions = field.grid.coordinates().reshape(-1, 2)
        intensities = field.values.ravel()
        level_weights = kernels.gauss(levels[:, np.newaxis] - intensities[np.newaxis, :], p.sigma_l)
        level_weights = level_weights * field.grid.cell_measure
        spatial = self._spatial_gauss(self._nodes(), positions, p.sigma_d)
        return self._build(DescriptorKind.DF, level_weights @ spatial.T, axis=levels)

    def raw_density_descriptor(self, patch: ScalarField) -> Descriptor:
        """
        Hard-binned orientation density at every descriptor node.

        Nodes outside the patch interior hold 0.
        """
        p = self.params
        nodes = self._nodes()
        h = patch.spacing
        x_min, x_max, y_min, y_max = patch.domain
        tol = 1e-9 * h
        interior = (nodes[:, 0] >= x_min + h - tol) & (nodes[:, 0] <= x_max - h + tol)
        interior &= (nodes[:, 1] >= y_min + h - tol) & (nodes[:, 1] <= y_max - h + tol)

        right, _ = sample_points(patch, nodes + [h, 0.0])
        left, _ = sample_points(patch, nodes - [h, 0.0])
        up, _ = sample_points(patch, nodes + [0.0, h])
        down, _ = sample_points(patch, nodes - [0.0, h])
        gx = (right - left) / (2.0 * h)
        gy = (up - down) / (2.0 * h)
        magnitude = np.hypot(gx, gy)
        orientation = np.mod(np.arctan2(gy, gx), TWO_PI)

        active = interior & (magnitude >= p.eps_grad)
        bins = np.floor(orientation / p.beta_step + 0.5).astype(int) % p.n_beta_bins
        values = np.zeros((p.n_beta_bins, len(nodes)))
        idx = np.flatnonzero(active)
        values[bins[idx], idx] = magnitude[idx] / p.beta_step
        return self._build(DescriptorKind.RAW_DENSITY, values)

"""Gaussian kernels, the erfcx-based heat factor w, and closed-form radial integrals."""

import logging
import math
from typing import Union

import numpy as np
from scipy import special

from ..exceptions import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)
TWO_PI = 2.0 * math.pi

SUPPORTED_DIMS = (1, 2, 4)

# Above this argument w switches from the erfcx form to its asymptotic series.
W_ASYMPTOTIC_FROM = 50.0

# Below this argument log w is evaluated with erfc instead of erfcx.
_LOG_W_NEGATIVE_FROM = -5.0

# Prefactor of the closed-form radial integral.
_RADIAL_CONSTANT = 8.0 * math.sqrt(2.0) * math.pi ** 1.5


def _as_output(value: np.ndarray) -> ArrayLike:
    """Return 0-d results as plain floats."""
    if np.ndim(value) == 0:
        return float(value)
    return value


def _check_sigma(sigma: ArrayLike, name: str = "sigma") -> None:
    if not np.all(np.asarray(sigma) > 0):
        raise DomainError(f"{name} must be positive, got {sigma}")


def gauss_from_sq(r2: ArrayLike, sigma: ArrayLike, dim: int = 1) -> ArrayLike:
    """
    Isotropic Gaussian density from a squared norm.

    Args:
        r2: Squared norm ||x||^2
        sigma: Standard deviation (> 0)
        dim: Dimension of x, one of 1, 2, 4

    Returns:
        (2 pi sigma^2)^(-dim/2) exp(-r2 / (2 sigma^2))
    """
    if dim not in SUPPORTED_DIMS:
        raise DomainError(f"kernel dimension must be one of {SUPPORTED_DIMS}, got {dim}")
    _check_sigma(sigma)
    sigma = np.asarray(sigma, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    norm = (2.0 * np.pi * sigma ** 2) ** (-dim / 2.0)
    return _as_output(norm * np.exp(-r2 / (2.0 * sigma ** 2)))


def gauss(x: ArrayLike, sigma: ArrayLike, dim: int = 1) -> ArrayLike:
    """
    Unit-mass isotropic Gaussian.

    For ``dim == 1`` every entry of x is a scalar argument; otherwise the
    last axis of x holds the vector components.
    """
    x = np.asarray(x, dtype=float)
    if dim == 1:
        r2 = x ** 2
    else:
        if x.shape[-1:] != (dim,):
            raise DomainError(f"expected vectors of length {dim}, got shape {x.shape}")
        r2 = np.sum(x ** 2, axis=-1)
    return gauss_from_sq(r2, sigma, dim)


def log_gauss1(x: ArrayLike, sigma: ArrayLike) -> ArrayLike:
    """Logarithm of the 1D Gaussian."""
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    return _as_output(-(x ** 2) / (2.0 * sigma ** 2) - np.log(SQRT_2PI * sigma))


def gauss_periodic(phi: ArrayLike, sigma: float, wraps: int = 4) -> ArrayLike:
    """
    Wrapped Gaussian on the circle.

    Sums ``gauss(phi + 2 pi k, sigma)`` for k in [-wraps, wraps]; the
    truncation error is below 2 gauss(2 pi wraps - pi, sigma).
    """
    _check_sigma(sigma)
    if wraps < 1:
        raise DomainError(f"wraps must be at least 1, got {wraps}")
    phi = np.asarray(phi, dtype=float)
    shifts = TWO_PI * np.arange(-wraps, wraps + 1)
    total = np.zeros_like(phi)
    for shift in shifts:
        total = total + np.exp(-((phi + shift) ** 2) / (2.0 * sigma ** 2))
    return _as_output(total / (SQRT_2PI * sigma))


def erfcx(x: ArrayLike) -> ArrayLike:
    """
    Scaled complementary error function e^{x^2} erfc(x).

    Overflows to inf only below x ~ -26.6.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)):
        raise DomainError("erfcx is undefined for NaN input")
    return _as_output(special.erfcx(x))


def _w_asymptotic(x: np.ndarray) -> np.ndarray:
    inv2 = 1.0 / x ** 2
    series = 1.0 + inv2 * (-3.0 + inv2 * (11.25 + inv2 * (-52.5 + inv2 * 295.3125)))
    return series / x ** 3


def w(x: ArrayLike) -> ArrayLike:
    """
    Heat kernel factor sqrt(pi) (1 + 2x^2) erfcx(x) - 2x.

    Positive everywhere and decays like x^-3; large arguments use the
    asymptotic series to avoid cancellation.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)):
        raise DomainError("w is undefined for NaN input")
    far = x > W_ASYMPTOTIC_FROM
    near_x = np.where(far, 0.0, x)
    result = SQRT_PI * (1.0 + 2.0 * near_x ** 2) * special.erfcx(near_x) - 2.0 * near_x
    if np.any(far):
        result = np.where(far, _w_asymptotic(np.where(far, x, 1.0)), result)
    return _as_output(result)


def log_w(x: ArrayLike) -> ArrayLike:
    """Logarithm of w, finite for arguments where w itself overflows."""
    x = np.asarray(x, dtype=float)
    negative = x < _LOG_W_NEGATIVE_FROM
    safe = np.where(negative, 0.0, x)
    result = np.log(w(safe))
    if np.any(negative):
        xn = np.where(negative, x, _LOG_W_NEGATIVE_FROM)
        tail = SQRT_PI * (1.0 + 2.0 * xn ** 2) * special.erfc(xn) - 2.0 * xn * np.exp(-(xn ** 2))
        result = np.where(negative, xn ** 2 + np.log(tail), result)
    return _as_output(result)


def gauss_halfline_moment2(a1: ArrayLike, a2: ArrayLike) -> ArrayLike:
    """
    Second moment of an unnormalised Gaussian over the positive half-line.

    Args:
        a1: Centre of the Gaussian
        a2: Width of the Gaussian (> 0)

    Returns:
        Integral over r in [0, inf) of r^2 exp(-(r - a1)^2 / (2 a2^2))
    """
    _check_sigma(a2, "a2")
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    z = a1 / (math.sqrt(2.0) * a2)
    # 1 + erf(z) = erfc(-z) = e^{-z^2} erfcx(-z)
    value = np.exp(-(z ** 2)) * (
        a1 * a2 ** 2 + math.sqrt(math.pi / 2.0) * a2 * (a1 ** 2 + a2 ** 2) * special.erfcx(-z)
    )
    return _as_output(value)


def radial_profile_integral(
    c1: ArrayLike,
    c2: ArrayLike,
    sigma1: ArrayLike,
    c3: np.ndarray,
    c4: np.ndarray,
    sigma2: ArrayLike,
) -> ArrayLike:
    """
    Closed form of the integral over r >= 0 of r^2 k1(r c1 + c2) k2(r c3 + c4).

    k1 is the 1D Gaussian of width sigma1 and k2 the 2D Gaussian of width
    sigma2. c3 and c4 carry their two components on the last axis. All
    arguments broadcast.

    Raises:
        DomainError: if c1 and c3 both vanish (no radial direction)
    """
    _check_sigma(sigma1, "sigma1")
    _check_sigma(sigma2, "sigma2")
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    c3 = np.asarray(c3, dtype=float)
    c4 = np.asarray(c4, dtype=float)
    sigma1 = np.asarray(sigma1, dtype=float)
    sigma2 = np.asarray(sigma2, dtype=float)

    t1 = np.sqrt(c1 ** 2 / (2.0 * sigma1 ** 2) + np.sum(c3 ** 2, axis=-1) / (2.0 * sigma2 ** 2))
    if np.any(t1 == 0):
        raise DomainError("radial integral is degenerate: c1 and c3 are both zero")
    t2 = (c1 * c2 / sigma1 ** 2 + np.sum(c3 * c4, axis=-1) / sigma2 ** 2) / (2.0 * t1)
    offset = c2 ** 2 / (2.0 * sigma1 ** 2) + np.sum(c4 ** 2, axis=-1) / (2.0 * sigma2 ** 2)

    # t2^2 <= offset, so the exponent stays bounded even where w overflows.
    log_value = -offset + log_w(t2) - np.log(_RADIAL_CONSTANT * sigma1 * sigma2 ** 2 * t1 ** 3)
    return _as_output(np.exp(log_value))

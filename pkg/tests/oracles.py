"""Independent reference computations used only by the tests."""

import math
import warnings

import numpy as np
from scipy import integrate


def quad(func, lo, hi, points=None):
    """scipy quad at tight tolerance, breakpoints filtered to the open interval."""
    inner = [p for p in (points or []) if lo < p < hi] or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(func, lo, hi, points=inner, epsabs=0.0, epsrel=1e-12, limit=400)
    return value


def normal1(u, sigma):
    return math.exp(-u * u / (2.0 * sigma * sigma)) / (math.sqrt(2.0 * math.pi) * sigma)


def normal2(ux, uy, sigma):
    return math.exp(-(ux * ux + uy * uy) / (2.0 * sigma * sigma)) / (2.0 * math.pi * sigma * sigma)


def halfline_moment2(a1, a2):
    """Integral of r^2 exp(-(r - a1)^2 / (2 a2^2)) over [0, inf)."""
    hi = max(a1, 0.0) + 14.0 * a2
    return quad(lambda r: r * r * math.exp(-((r - a1) ** 2) / (2.0 * a2 * a2)), 0.0, hi, [a1])


def radial(c1, c2, sigma1, c3, c4, sigma2, r_max=None):
    """Integral of r^2 k1(r c1 + c2) k2(r c3 + c4) over r >= 0 on an explicit window."""
    c3 = np.asarray(c3, dtype=float)
    c4 = np.asarray(c4, dtype=float)

    def integrand(r):
        return r * r * normal1(r * c1 + c2, sigma1) * normal2(r * c3[0] + c4[0], r * c3[1] + c4[1], sigma2)

    if r_max is None:
        a = c1 * c1 / sigma1 ** 2 + float(c3 @ c3) / sigma2 ** 2
        b = c1 * c2 / sigma1 ** 2 + float(c3 @ c4) / sigma2 ** 2
        centre = max(-b / a, 0.0)
        r_max = centre + 14.0 / math.sqrt(a)
        return quad(integrand, 0.0, r_max, [centre])
    return quad(integrand, 0.0, r_max)


def scale_convolution(x, y, sigma_d, sigma_s, outer):
    """
    Integral over u of outer(u) k2(y - (1 + u) x; sigma_d) k1(u; sigma_s).

    ``outer`` is exp for the inner-linearised factor and 1 + u for the
    fully linearised one.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def integrand(u):
        r = y - (1.0 + u) * x
        return outer(u) * normal2(r[0], r[1], sigma_d) * normal1(u, sigma_s)

    return quad(integrand, -14.0 * sigma_s, 14.0 * sigma_s, [0.0])


def comb_sum(phi, sigma, terms):
    """Wrapped Gaussian by direct summation over 2 terms + 1 shifts."""
    k = np.arange(-terms, terms + 1)
    return float(np.sum(np.exp(-((phi + 2.0 * math.pi * k) ** 2) / (2.0 * sigma ** 2)))) / (
        math.sqrt(2.0 * math.pi) * sigma
    )


def sift_value(field_values, spacing, origin, beta, x, sigma_r, sigma_d, wraps=6):
    """
    Continuous SIFT at one (beta, x) by an explicit pixel loop.

    Central differences at interior pixels, comb smoothed over 2 wraps + 1
    shifts, Gaussian spatial pooling and an h^2 Riemann weight.
    """
    v = np.asarray(field_values, dtype=float)
    height, width = v.shape
    total = 0.0
    for j in range(1, height - 1):
        for i in range(1, width - 1):
            gx = (v[j, i + 1] - v[j, i - 1]) / (2.0 * spacing)
            gy = (v[j + 1, i] - v[j - 1, i]) / (2.0 * spacing)
            magnitude = math.hypot(gx, gy)
            if magnitude == 0.0:
                continue
            angle = math.atan2(gy, gx) % (2.0 * math.pi)
            px = origin[0] + i * spacing
            py = origin[1] + j * spacing
            comb = sum(normal1(beta - angle + 2.0 * math.pi * n, sigma_r) for n in range(-wraps, wraps + 1))
            total += magnitude * comb * normal2(x[0] - px, x[1] - py, sigma_d)
    return total * spacing * spacing


def signal_energy(f_values, f_origin, template_values, template_origin, spacing, theta):
    """Riemann sum of (f(x - theta) - p(x))^2 over the template nodes, linear interpolation of f."""
    f_values = np.asarray(f_values, dtype=float)
    total = 0.0
    for i, p in enumerate(template_values):
        xq = template_origin + i * spacing - theta
        u = (xq - f_origin) / spacing
        if u < -1e-9 or u > len(f_values) - 1 + 1e-9:
            fv = 0.0
        else:
            i0 = min(int(math.floor(max(u, 0.0))), len(f_values) - 2)
            t = u - i0
            fv = (1.0 - t) * f_values[i0] + t * f_values[i0 + 1]
        total += (fv - p) ** 2
    return total * spacing

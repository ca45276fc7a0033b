"""Tests for Gaussian kernels, the heat factor w and the radial integrals."""

import math

import numpy as np
import pytest

from diffusion_descriptors.analytics import kernels
from diffusion_descriptors.exceptions import DomainError
from tests import oracles


class TestGauss:
    """Tests for the isotropic Gaussian."""

    def test_peak_values(self):
        """Peaks of the 1D and 2D unit Gaussians."""
        assert kernels.gauss(0.0, 1.0) == pytest.approx(0.398942, abs=1e-6)
        assert kernels.gauss(np.zeros(2), 1.0, dim=2) == pytest.approx(0.159155, abs=1e-6)

    def test_value_at_one(self):
        """Off-peak value agrees with the closed expression."""
        assert kernels.gauss(1.0, 1.0) == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi), rel=1e-14)

    def test_nonpositive_sigma(self):
        """Zero or negative widths are rejected."""
        with pytest.raises(DomainError):
            kernels.gauss(0.0, 0.0)
        with pytest.raises(DomainError):
            kernels.gauss(np.zeros(2), -1.0, dim=2)

    def test_unsupported_dimension(self):
        """Only dimensions 1, 2 and 4 are supported."""
        with pytest.raises(DomainError):
            kernels.gauss_from_sq(0.0, 1.0, dim=3)

    @pytest.mark.parametrize("sigma", [0.3, 1.0, 2.5])
    def test_unit_mass(self, sigma):
        """The 1D Gaussian integrates to one."""
        mass = oracles.quad(lambda u: kernels.gauss(u, sigma), -20 * sigma, 20 * sigma, [0.0])
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_semigroup(self):
        """Convolving widths a and b gives width sqrt(a^2 + b^2)."""
        a, b, x = 0.7, 1.3, 0.9
        conv = oracles.quad(lambda u: kernels.gauss(x - u, a) * kernels.gauss(u, b), -15.0, 15.0, [0.0, x])
        assert conv == pytest.approx(kernels.gauss(x, math.hypot(a, b)), abs=1e-5)

    def test_vector_last_axis(self):
        """Vector arguments carry components on the last axis."""
        x = np.array([[1.0, 0.0], [0.0, 2.0]])
        expected = np.exp(-np.array([1.0, 4.0]) / 2.0) / (2 * math.pi)
        np.testing.assert_allclose(kernels.gauss(x, 1.0, dim=2), expected, rtol=1e-14)

    def test_log_gauss(self):
        """log_gauss1 is the logarithm of gauss."""
        assert kernels.log_gauss1(1.7, 0.4) == pytest.approx(math.log(kernels.gauss(1.7, 0.4)), rel=1e-12)


class TestGaussPeriodic:
    """Tests for the wrapped Gaussian."""

    def test_uniform_limit(self):
        """A very wide wrapped Gaussian is flat at 1 / (2 pi)."""
        assert kernels.gauss_periodic(0.0, 100.0, wraps=100) == pytest.approx(1 / (2 * math.pi), abs=1e-4)

    def test_periodicity(self):
        """Shifting by 2 pi leaves the value unchanged."""
        sigma = 2 * math.pi / 8
        for phi in (0.0, 0.4, 2.0, -1.1):
            assert kernels.gauss_periodic(phi, sigma) == pytest.approx(
                kernels.gauss_periodic(phi + 2 * math.pi, sigma), abs=1e-14
            )

    def test_matches_long_comb(self):
        """Three wraps already agree with a 10001-term comb."""
        sigma = 2 * math.pi / 8
        value = kernels.gauss_periodic(math.pi / 4, sigma, wraps=3)
        assert value == pytest.approx(oracles.comb_sum(math.pi / 4, sigma, 5000), abs=1e-10)

    @pytest.mark.parametrize("sigma", [0.2, 1.0, 3.0])
    def test_unit_mass(self, sigma):
        """Mass over one period is one."""
        wraps = max(5, math.ceil(6.5 * sigma / (2 * math.pi)) + 1)
        mass = oracles.quad(lambda p: kernels.gauss_periodic(p, sigma, wraps), 0.0, 2 * math.pi)
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_invalid_wraps(self):
        """At least one wrap is required."""
        with pytest.raises(DomainError):
            kernels.gauss_periodic(0.0, 1.0, wraps=0)


class TestErfcx:
    """Tests for the scaled complementary error function."""

    def test_known_values(self):
        """erfcx(0) = 1 and erfcx(1) = e erfc(1)."""
        assert kernels.erfcx(0.0) == 1.0
        assert kernels.erfcx(1.0) == pytest.approx(math.e * math.erfc(1.0), rel=1e-13)
        assert kernels.erfcx(1.0) == pytest.approx(0.427584, abs=1e-6)

    def test_asymptotic(self):
        """erfcx(x) ~ 1 / (x sqrt(pi)) for large x."""
        assert kernels.erfcx(50.0) == pytest.approx(1 / (50 * math.sqrt(math.pi)), rel=1e-3)

    def test_nan(self):
        """NaN input is a domain error."""
        with pytest.raises(DomainError):
            kernels.erfcx(float("nan"))


class TestW:
    """Tests for the heat kernel factor w."""

    def test_origin(self):
        """w(0) is sqrt(pi) to double precision."""
        assert kernels.w(0.0) == math.sqrt(math.pi)

    def test_known_values(self):
        """w at 1 and -2 against erfc-based expressions."""
        assert kernels.w(1.0) == pytest.approx(math.sqrt(math.pi) * math.e * 3 * math.erfc(1.0) - 2, rel=1e-10)
        expected = math.sqrt(math.pi) * math.exp(4.0) * 9 * math.erfc(-2.0) + 4
        assert kernels.w(-2.0) == pytest.approx(expected, rel=1e-8)

    def test_positive(self):
        """w stays positive on [-10, 10]."""
        x = np.arange(-10.0, 10.0 + 1e-9, 1e-3)
        assert np.all(kernels.w(x) > 0)

    def test_cubic_decay(self):
        """w(x) x^3 tends to 1."""
        x = np.linspace(50.0, 500.0, 200)
        np.testing.assert_allclose(kernels.w(x) * x ** 3, 1.0, rtol=0.02)

    def test_asymptotic_switch_is_continuous(self):
        """Both branches agree around the switch point."""
        edge = kernels.W_ASYMPTOTIC_FROM
        assert kernels.w(edge - 1e-9) == pytest.approx(kernels.w(edge + 1e-9), rel=1e-5)

    def test_log_w(self):
        """log_w matches log(w) and stays finite where w overflows."""
        x = np.linspace(-4.0, 3.0, 15)
        np.testing.assert_allclose(kernels.log_w(x), np.log(kernels.w(x)), rtol=1e-12)
        far = -30.0
        expected = far ** 2 + math.log(2 * math.sqrt(math.pi) * (1 + 2 * far ** 2))
        assert kernels.log_w(far) == pytest.approx(expected, rel=1e-10)

    def test_nan(self):
        """NaN input is a domain error."""
        with pytest.raises(DomainError):
            kernels.w(np.array([0.0, float("nan")]))


class TestHalflineMoment:
    """Tests for the Gaussian second moment on the half-line."""

    def test_symmetric(self):
        """Centred unit Gaussian gives sqrt(pi / 2)."""
        assert kernels.gauss_halfline_moment2(0.0, 1.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)

    def test_against_quadrature(self):
        """Positive centre matches quadrature."""
        assert kernels.gauss_halfline_moment2(2.0, 0.5) == pytest.approx(oracles.halfline_moment2(2.0, 0.5), rel=1e-8)

    def test_far_negative_centre(self):
        """A centre far below zero leaves almost no mass."""
        value = kernels.gauss_halfline_moment2(-5.0, 0.3)
        assert value == pytest.approx(oracles.halfline_moment2(-5.0, 0.3), abs=1e-10)
        assert value >= 0

    def test_nonpositive_width(self):
        """a2 must be positive."""
        with pytest.raises(DomainError):
            kernels.gauss_halfline_moment2(1.0, 0.0)


class TestRadialProfileIntegral:
    """Tests for the closed-form radial integral."""

    def test_unit_case(self):
        """Axis-aligned unit case against quadrature on [0, 40]."""
        closed = kernels.radial_profile_integral(1.0, 0.0, 1.0, np.array([1.0, 0.0]), np.zeros(2), 1.0)
        oracle = oracles.radial(1.0, 0.0, 1.0, [1.0, 0.0], [0.0, 0.0], 1.0, r_max=40.0)
        assert closed == pytest.approx(oracle, rel=1e-6)

    def test_random_draws(self):
        """100 seeded draws agree with quadrature."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            sigma1, sigma2 = rng.uniform(0.2, 3.0, size=2)
            c1, c2 = rng.uniform(-2.0, 2.0, size=2)
            c3, c4 = rng.uniform(-2.0, 2.0, size=(2, 2))
            closed = kernels.radial_profile_integral(c1, c2, sigma1, c3, c4, sigma2)
            assert closed == pytest.approx(oracles.radial(c1, c2, sigma1, c3, c4, sigma2), rel=1e-5)

    def test_broadcasts(self):
        """Array arguments evaluate elementwise."""
        c1 = np.array([0.5, 1.5])
        values = kernels.radial_profile_integral(c1, 0.2, 1.0, np.array([0.3, -0.4]), np.array([0.1, 0.1]), 0.8)
        assert values.shape == (2,)
        for i in range(2):
            single = kernels.radial_profile_integral(c1[i], 0.2, 1.0, np.array([0.3, -0.4]), np.array([0.1, 0.1]), 0.8)
            assert values[i] == pytest.approx(single, rel=1e-14)

    def test_degenerate_direction(self):
        """No radial dependence at all is rejected."""
        with pytest.raises(DomainError):
            kernels.radial_profile_integral(0.0, 1.0, 1.0, np.zeros(2), np.array([2.0, 0.0]), 1.0)

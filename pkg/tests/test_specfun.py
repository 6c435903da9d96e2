"""Tests for special functions and combinatorial coefficients."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from app.core.errors import DomainError
from app.utils.specfun import (
    EULER_GAMMA,
    aux_g,
    aux_g_sum,
    bessel_k_scaled,
    coeff_A,
    digamma,
    expint_scaled,
    ln_gamma,
    log_bessel_k_scaled,
    log_moment_core,
    log_moment_integral,
    moment_integral,
    varsigma,
)


class TestGammaFamily:
    def test_ln_gamma_factorial(self):
        assert ln_gamma(5) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_digamma_at_one(self):
        assert digamma(1) == pytest.approx(-EULER_GAMMA, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_non_positive_arguments_rejected(self, x):
        with pytest.raises(DomainError):
            ln_gamma(x)
        with pytest.raises(DomainError):
            digamma(x)


class TestBesselK:
    @pytest.mark.parametrize("order", range(0, 11))
    def test_matches_scipy_kve(self, order):
        x = np.array([0.1, 1.0, 5.0, 30.0])
        expected = special.kve(order, x)
        np.testing.assert_allclose(np.exp(log_bessel_k_scaled(order, x)), expected, rtol=1e-10)

    def test_negative_order_uses_absolute_value(self):
        x = np.array([0.3, 2.0])
        np.testing.assert_array_equal(log_bessel_k_scaled(-3, x), log_bessel_k_scaled(3, x))

    def test_scalar_wrapper(self):
        assert bessel_k_scaled(2, 1.5) == pytest.approx(special.kve(2, 1.5), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_bessel_k_scaled(1, np.array([0.0, 1.0]))
        with pytest.raises(DomainError):
            bessel_k_scaled(-1, 1.0)


class TestExponentialIntegral:
    @pytest.mark.parametrize("order", range(1, 7))
    @pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 3.0, 10.0, 50.0])
    def test_matches_scipy(self, order, x):
        expected = math.exp(x) * special.expn(order, x)
        assert expint_scaled(order, x) == pytest.approx(expected, rel=1e-11)

    def test_aux_g_known_value(self):
        # e * E_1(1)
        assert aux_g(0, 1.0) == pytest.approx(0.596347362323194, rel=1e-12)

    def test_aux_g_recurrence(self):
        # g_1(x) = 1 - x g_0(x)
        for x in (0.2, 2.0, 7.5):
            assert aux_g(1, x) == pytest.approx(1.0 - x * aux_g(0, x), rel=1e-12)

    def test_aux_g_sum(self):
        assert aux_g_sum(3, 2.0) == pytest.approx(sum(aux_g(l, 2.0) for l in range(3)), rel=1e-14)
        assert aux_g_sum(0, 2.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            expint_scaled(0, 1.0)
        with pytest.raises(DomainError):
            expint_scaled(1, 0.0)


class TestCoeffA:
    def test_leading_coefficient(self):
        assert coeff_A(0, 0, 0, 3, 3) == 1.0
        assert coeff_A(0, 0, 0, 5, 3) == 0.5

    def test_odd_power_is_negative(self):
        assert coeff_A(1, 1, 1, 2, 2) == pytest.approx(-2.0)

    @pytest.mark.parametrize("q,p", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 4), (4, 6)])
    def test_beta_density_normalizes(self, q, p):
        total = 0.0
        for i in range(q):
            for j in range(i + 1):
                for l in range(2 * j + 1):
                    total += coeff_A(i, j, l, p, q) * math.gamma(p - q + l + 1)
        assert total == pytest.approx(q, rel=1e-12)

    def test_invalid_indices(self):
        with pytest.raises(DomainError):
            coeff_A(1, 2, 0, 3, 2)
        with pytest.raises(DomainError):
            coeff_A(1, 1, 3, 3, 2)
        with pytest.raises(DomainError):
            coeff_A(0, 0, 0, 2, 3)


class TestMomentIntegrals:
    @pytest.mark.parametrize("d,e,a", [(2, 3, 0.5), (0, 0, 1.0), (0, -1, 0.7), (3, -1, 2.0), (4, 5, 0.1)])
    def test_moment_integral_matches_quadrature(self, d, e, a):
        value, _ = integrate.quad(
            lambda t: t**d * (1.0 + a * t) ** e * math.exp(-t), 0.0, np.inf, epsrel=1e-12
        )
        assert moment_integral(d, e, a).to_float() == pytest.approx(value, rel=1e-9)

    def test_moment_integral_domain(self):
        with pytest.raises(DomainError):
            moment_integral(-1, 0, 1.0)
        with pytest.raises(DomainError):
            moment_integral(0, -2, 1.0)
        with pytest.raises(DomainError):
            moment_integral(0, 1, 0.0)

    @pytest.mark.parametrize("d,a", [(0, 0.5), (2, 0.5), (3, 3.0)])
    def test_log_moment_integral_matches_quadrature(self, d, a):
        def f(t):
            return t**d * math.exp(-t) * math.log(t / (1.0 + a * t))

        head, _ = integrate.quad(f, 0.0, 1.0, epsrel=1e-12, limit=200)
        tail, _ = integrate.quad(f, 1.0, np.inf, epsrel=1e-12, limit=200)
        assert log_moment_integral(d, a) == pytest.approx(head + tail, rel=1e-8)

    def test_log_moment_core_is_shifted_integral(self):
        assert log_moment_core(3, 0.4).to_float() == pytest.approx(log_moment_integral(2, 0.4), rel=1e-14)

    def test_varsigma_matches_direct_integral(self):
        t, p, q, a = 2, 3, 2, 0.5
        power = p - q + t - 2

        def f(u):
            w = 1.0 - a * u
            return u**power * w ** (-(p + q)) * math.exp(-u / w) * math.log(u)

        value, _ = integrate.quad(f, 0.0, 1.0 / a, epsrel=1e-12, limit=200)
        assert varsigma(t, p, q, a) == pytest.approx(value, rel=1e-8)

    def test_varsigma_domain(self):
        with pytest.raises(DomainError):
            varsigma(5, 3, 2, 0.5)
        with pytest.raises(DomainError):
            varsigma(2, 1, 2, 0.5)

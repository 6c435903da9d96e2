"""Tests for exact capacities, bounds, high-SNR characterization and analogies."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from app.analysis.capacity import (
    alpha_sweep,
    analogy_check,
    capacity_sweep,
    exact_capacity,
    fixed_alpha_limit,
    high_snr_affine,
    high_snr_char,
    high_snr_offset_nd1,
    high_snr_offset_nr1,
    lost_digits,
    lower_bound,
    lower_bound_highsnr,
    lower_bound_ns_large,
    lower_bound_nr1,
    lower_bound_nr1_limits,
    offset_shift,
    offset_shift_limit,
    sweep_rho,
    upper_bound,
    upper_bound_highsnr,
    upper_bound_ns_large,
    upper_bound_nr1,
    upper_bound_nr1_limit,
)
from app.core.errors import DomainError
from app.schemas.capacity import HighSnrChar, Method, QuadratureSpec, Regime, Transform
from app.schemas.montecarlo import RngStream
from app.schemas.system import SystemConfig
from app.simulation.mcoracle import mc_capacity, mc_single_hop_capacity
from app.utils.specfun import EULER_GAMMA


def siso_capacity_by_quadrature(a: float, c: float) -> float:
    """0.5 E log2(1 + c lambda) against the closed-form single-antenna density."""

    def f(lam):
        x = 2.0 * math.sqrt(lam)
        pdf = math.exp(-a * lam) * (2.0 * a * math.sqrt(lam) * special.kv(1, x) + 2.0 * special.kv(0, x))
        return math.log1p(c * lam) * pdf

    head, _ = integrate.quad(f, 0.0, 1.0, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(f, 1.0, np.inf, epsrel=1e-12, limit=200)
    return 0.5 * (head + tail) / math.log(2.0)


class TestExactCapacity:
    def test_zero_snr(self, config_234):
        point = exact_capacity(config_234.with_rho(0.0))
        assert point.value == 0.0
        assert point.method == Method.EXACT

    def test_siso_matches_direct_quadrature(self, siso_config):
        c = siso_config.rho * siso_config.a / siso_config.n_s
        expected = siso_capacity_by_quadrature(siso_config.a, c)
        assert exact_capacity(siso_config).value == pytest.approx(expected, rel=1e-7)

    def test_transforms_agree(self, config_234):
        plain = exact_capacity(config_234, QuadratureSpec(transform=Transform.NONE))
        substituted = exact_capacity(config_234, QuadratureSpec(transform=Transform.SQRT_SUBSTITUTION))
        assert plain.value == pytest.approx(substituted.value, rel=1e-6)

    def test_reports_quadrature_error(self, config_234):
        point = exact_capacity(config_234)
        assert point.quad_error is not None
        assert point.quad_error < 1e-6

    def test_increases_with_snr(self):
        cfg = SystemConfig(n_s=2, n_r=3, n_d=2, alpha=2.0)
        values = [exact_capacity(cfg.with_rho(rho)).value for rho in (0.5, 2.0, 8.0, 32.0)]
        assert values == sorted(values)

    @pytest.mark.parametrize("fixture", ["config_234", "config_423"])
    def test_matches_monte_carlo(self, fixture, request, rng):
        cfg = request.getfixturevalue(fixture)
        assert mc_capacity(cfg, 20_000, rng).within(exact_capacity(cfg).value, n_sigma=4.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("n_s,n_r,n_d", [(2, 3, 2), (3, 2, 4)])
    def test_coupled_gain_grid_matches_monte_carlo(self, n_s, n_r, n_d):
        rng = RngStream(seed=17)
        for idx, rho_db in enumerate(range(0, 35, 5)):
            cfg = SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, 2.0, 10.0 ** (rho_db / 10.0))
            estimate = mc_capacity(cfg, 100_000, rng.child(idx))
            assert estimate.within(exact_capacity(cfg).value, n_sigma=4.0)


class TestLostDigits:
    def test_no_loss_for_small_gain(self, siso_config, config_234):
        assert lost_digits(siso_config) == 0.0
        assert lost_digits(config_234) == 0.0

    def test_grows_with_gain(self):
        cfg = SystemConfig(n_s=2, n_r=3, n_d=4, alpha=3e4, rho=0.0)
        assert lost_digits(cfg) == pytest.approx(6 * 4.0)


class TestFixedAlphaLimit:
    def test_siso_closed_form(self, siso_config):
        def f(y):
            return math.log1p(2.0 * y) * special.kv(0, 2.0 * math.sqrt(y))

        head, _ = integrate.quad(f, 0.0, 1.0, epsrel=1e-12, limit=200)
        tail, _ = integrate.quad(f, 1.0, np.inf, epsrel=1e-12, limit=200)
        expected = (head + tail) / math.log(2.0)
        assert fixed_alpha_limit(siso_config).value == pytest.approx(expected, rel=1e-7)

    def test_echoes_rho(self, config_234):
        point = fixed_alpha_limit(config_234)
        assert point.rho == config_234.rho
        assert point.method == Method.FIXED_ALPHA_LIMIT

    def test_monotone_in_alpha(self, config_234):
        values = [fixed_alpha_limit(config_234.with_alpha(alpha)).value for alpha in (1.0, 2.0, 4.0)]
        assert values[0] < values[1] < values[2]

    def test_exact_capacity_saturates(self):
        cfg = SystemConfig(n_s=3, n_r=4, n_d=2, alpha=2.0, rho=1e6)
        assert exact_capacity(cfg).value == pytest.approx(fixed_alpha_limit(cfg).value, abs=1e-3)


class TestBoundSandwich:
    @pytest.mark.parametrize("n_s,n_r,n_d", [(2, 3, 2), (3, 2, 4)])
    @pytest.mark.parametrize("rho", [1.0, 10.0, 100.0])
    def test_coupled_gain(self, n_s, n_r, n_d, rho):
        cfg = SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, 2.0, rho)
        exact = exact_capacity(cfg)
        assert lower_bound(cfg).value <= exact.value + exact.quad_error
        assert exact.value <= upper_bound(cfg).value + exact.quad_error

    @pytest.mark.parametrize("rho", [1.0, 10.0, 100.0])
    def test_fixed_gain(self, rho):
        cfg = SystemConfig(n_s=3, n_r=4, n_d=2, alpha=2.0, rho=rho)
        exact = exact_capacity(cfg)
        assert lower_bound(cfg).value <= exact.value + exact.quad_error
        assert exact.value <= upper_bound(cfg).value + exact.quad_error

    def test_zero_snr(self, config_234):
        cfg = config_234.with_rho(0.0)
        assert upper_bound(cfg).value == 0.0
        assert lower_bound(cfg).value == 0.0

    def test_upper_bound_tight_at_low_snr(self):
        cfg = SystemConfig.from_alpha_over_rho(2, 3, 2, 2.0, 10.0 ** 0.5)
        exact = exact_capacity(cfg)
        gap = upper_bound(cfg).value - exact.value
        assert -exact.quad_error <= gap <= 0.3


class TestSingleRelayAntenna:
    def test_closed_forms_match_general_bounds(self):
        cfg = SystemConfig(n_s=2, n_r=1, n_d=4, alpha=2.0, rho=10.0)
        assert upper_bound_nr1(2, 4, 2.0, 10.0).value == pytest.approx(upper_bound(cfg).value, rel=1e-10)
        assert lower_bound_nr1(2, 4, 2.0, 10.0).value == pytest.approx(lower_bound(cfg).value, rel=1e-10)

    def test_upper_bound_large_gain_limit(self):
        assert upper_bound_nr1(1, 2, 1e6, 3.0).value == pytest.approx(1.0, abs=1e-5)
        assert upper_bound_nr1_limit(3.0).value == 1.0

    def test_upper_bound_below_awgn(self):
        for alpha in (0.5, 5.0, 50.0):
            assert upper_bound_nr1(2, 3, alpha, 10.0).value < upper_bound_nr1_limit(10.0).value

    def test_lower_bound_large_gain(self):
        expected = 0.5 * math.log2(1.0 + 3.0 * math.exp(-EULER_GAMMA))
        assert lower_bound_nr1(1, 1, 1e9, 3.0).value == pytest.approx(expected, abs=1e-6)

    def test_alpha_limit_independent_of_destination(self):
        limits = lower_bound_nr1_limits(2, 3, 2.0, 10.0)
        assert lower_bound_nr1(2, 3, 1e9, 10.0).value == pytest.approx(
            limits[Regime.ALPHA_LARGE].value, abs=1e-5
        )

    def test_source_limit(self):
        limits = lower_bound_nr1_limits(2, 3, 2.0, 10.0)
        assert lower_bound_nr1(100_000, 3, 2.0, 10.0).value == pytest.approx(
            limits[Regime.NS_LARGE].value, abs=1e-4
        )

    def test_destination_limit(self):
        limits = lower_bound_nr1_limits(2, 3, 2.0, 10.0)
        assert lower_bound_nr1(2, 5000, 2.0, 10.0).value == pytest.approx(
            limits[Regime.ND_LARGE].value, abs=0.01
        )
        assert limits[Regime.ND_LARGE].value == limits[Regime.ALPHA_LARGE].value

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            upper_bound_nr1(0, 2, 1.0, 1.0)
        with pytest.raises(DomainError):
            lower_bound_nr1(1, 2, 0.0, 1.0)
        with pytest.raises(DomainError):
            lower_bound_nr1_limits(1, 2, 1.0, -1.0)


class TestLimitingBounds:
    def test_siso_high_snr(self):
        cfg = SystemConfig(n_s=1, n_r=1, n_d=1, alpha=2.0, rho=1.0)
        assert upper_bound_highsnr(cfg).value == pytest.approx(0.5 * math.log2(3.0), rel=1e-12)
        expected = 0.5 * math.log2(1.0 + 2.0 * math.exp(-2.0 * EULER_GAMMA))
        assert lower_bound_highsnr(cfg).value == pytest.approx(expected, rel=1e-10)

    def test_bounds_converge_at_high_snr(self, config_234):
        cfg = config_234.with_rho(1e6)
        assert upper_bound(cfg).value == pytest.approx(upper_bound_highsnr(cfg).value, abs=1e-3)
        assert lower_bound(cfg).value == pytest.approx(lower_bound_highsnr(cfg).value, abs=1e-3)

    def test_source_limit_bounds(self, config_234):
        assert upper_bound_ns_large(config_234).value > upper_bound(config_234).value
        assert lower_bound_ns_large(config_234).value <= upper_bound_ns_large(config_234).value
        assert lower_bound_ns_large(config_234.with_rho(0.0)).value == 0.0


class TestHighSnr:
    def test_siso_offset(self):
        char = high_snr_char(1, 1, 1, 1.0)
        assert char.slope == 0.5
        assert char.offset_db == pytest.approx(7.5775, abs=0.01)

    def test_offset_234(self):
        char = high_snr_char(2, 3, 4, 2.0)
        assert char.slope == 1.0
        assert char.offset_3db == pytest.approx(0.87033, abs=2e-3)

    @pytest.mark.parametrize("n_s,n_d,beta", [(2, 3, 2.0), (1, 4, 0.5)])
    def test_single_relay_antenna_offset(self, n_s, n_d, beta):
        assert high_snr_offset_nr1(n_s, n_d, beta) == pytest.approx(
            high_snr_char(n_s, 1, n_d, beta).offset_3db, rel=1e-10
        )

    @pytest.mark.parametrize("n_s,n_r,beta", [(3, 2, 2.0), (1, 3, 1.0)])
    def test_single_destination_antenna_offset(self, n_s, n_r, beta):
        assert high_snr_offset_nd1(n_s, n_r, beta) == pytest.approx(
            high_snr_char(n_s, n_r, 1, beta).offset_3db, rel=1e-10
        )

    @pytest.mark.parametrize("n_s,n_r,n_d", [(2, 3, 4), (3, 2, 4), (3, 4, 2), (1, 2, 3)])
    def test_slope_matches_capacity_growth(self, n_s, n_r, n_d):
        low = exact_capacity(SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, 2.0, 1e5)).value
        high = exact_capacity(SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, 2.0, 1e6)).value
        assert (high - low) / (10.0 / 3.0) == pytest.approx(high_snr_char(n_s, n_r, n_d, 2.0).slope, abs=0.02)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            high_snr_char(0, 1, 1, 1.0)
        with pytest.raises(DomainError):
            high_snr_char(1, 1, 1, 0.0)


class TestAffine:
    def test_unit_slope(self):
        char = HighSnrChar(slope=1.0, offset_3db=0.0, beta=1.0)
        assert high_snr_affine(char, 2.0).value == pytest.approx(1.0)
        assert high_snr_affine(char, 2.0).method == Method.HIGH_SNR_AFFINE

    def test_floored_at_zero(self):
        char = HighSnrChar(slope=1.0, offset_3db=0.0, beta=1.0)
        assert high_snr_affine(char, 0.5).value == 0.0

    def test_rejects_non_positive_snr(self):
        char = HighSnrChar(slope=1.0, offset_3db=0.0, beta=1.0)
        with pytest.raises(DomainError):
            high_snr_affine(char, 0.0)

    @pytest.mark.parametrize("n_s,n_r,n_d", [(2, 3, 4), (2, 3, 2), (3, 2, 4)])
    def test_approaches_exact_capacity(self, n_s, n_r, n_d):
        rho = 1e4
        cfg = SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, 2.0, rho)
        affine = high_snr_affine(high_snr_char(n_s, n_r, n_d, 2.0), rho)
        assert affine.value == pytest.approx(exact_capacity(cfg).value, abs=0.05)


class TestOffsetShift:
    def test_known_values(self):
        assert offset_shift(1, 1, 1.0) == pytest.approx(-2.5810, abs=1e-3)
        assert offset_shift(1, 2, 1.0) == pytest.approx(-3.4546, abs=1e-3)
        assert offset_shift_limit(1.0) == pytest.approx(-5.0793, abs=1e-3)

    def test_decreases_toward_limit(self):
        shifts = [offset_shift(1, k, 1.0) for k in range(1, 6)]
        assert shifts == sorted(shifts, reverse=True)
        assert all(value > offset_shift_limit(1.0) for value in shifts)

    def test_limit_from_larger_array(self):
        assert offset_shift(2, 2000, 1.0) == pytest.approx(offset_shift_limit(1.0, n_d=2), abs=0.01)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            offset_shift(0, 1, 1.0)
        with pytest.raises(DomainError):
            offset_shift(1, 0, 1.0)
        with pytest.raises(DomainError):
            offset_shift_limit(-1.0)


class TestSweeps:
    def test_capacity_sweep_keeps_order(self, config_234):
        rhos = [10.0, 1.0, 100.0]
        points = capacity_sweep([config_234.with_rho(rho) for rho in rhos])
        assert [point.rho for point in points] == rhos
        assert all(point.affine is None for point in points)

    def test_capacity_sweep_rejects_empty_grid(self):
        with pytest.raises(DomainError):
            capacity_sweep([])

    def test_coupled_sweep_has_affine_column(self):
        points = sweep_rho(2, 3, 4, [10.0, 100.0], beta=2.0)
        assert all(point.affine is not None for point in points)
        assert [point.alpha for point in points] == pytest.approx([20.0, 200.0])

    def test_fixed_sweep_has_no_affine_column(self):
        points = sweep_rho(2, 3, 4, [0.0, 10.0], alpha=2.0)
        assert points[0].exact == 0.0
        assert all(point.affine is None for point in points)

    def test_sweep_rho_requires_one_gain(self):
        with pytest.raises(DomainError):
            sweep_rho(2, 3, 4, [1.0])
        with pytest.raises(DomainError):
            sweep_rho(2, 3, 4, [1.0], alpha=1.0, beta=1.0)
        with pytest.raises(DomainError):
            sweep_rho(2, 3, 4, [0.0], beta=1.0)

    def test_alpha_sweep(self):
        points = alpha_sweep(2, 3, 4, 10.0, [0.5, 5.0, 50.0])
        assert [point.alpha for point in points] == [0.5, 5.0, 50.0]
        assert points[0].exact < points[1].exact < points[2].exact


class TestAnalogies:
    def test_preconditions(self, config_234):
        with pytest.raises(DomainError):
            analogy_check(config_234, Regime.NR_LARGE)
        with pytest.raises(DomainError):
            analogy_check(config_234, Regime.ALPHA_LARGE)

    @pytest.mark.slow
    def test_alpha_large(self):
        cfg = SystemConfig(n_s=2, n_r=3, n_d=4, alpha=1e6, rho=10.0)
        result = analogy_check(cfg, Regime.ALPHA_LARGE, 50_000, RngStream(seed=3))
        sigma = math.hypot(result.af.stderr or 0.0, result.single_hop.stderr)
        assert result.gap <= 0.01 + 4.0 * sigma

    @pytest.mark.slow
    def test_nd_large(self):
        cfg = SystemConfig(n_s=2, n_r=3, n_d=64, alpha=100.0, rho=10.0)
        result = analogy_check(cfg, Regime.ND_LARGE, 20_000, RngStream(seed=4))
        assert result.gap <= 0.05

    @pytest.mark.slow
    def test_ns_large(self):
        cfg = SystemConfig(n_s=64, n_r=2, n_d=3, alpha=2.0, rho=10.0)
        result = analogy_check(cfg, Regime.NS_LARGE, 20_000, RngStream(seed=5))
        sigma = math.hypot(result.af.stderr or 0.0, result.single_hop.stderr)
        assert result.gap <= 0.06 + 4.0 * sigma


class TestLargeRelayGain:
    def test_bounds_enclose_exact_capacity(self, rng):
        cfg = SystemConfig(n_s=2, n_r=3, n_d=4, alpha=1e4, rho=10.0)
        exact = exact_capacity(cfg)
        assert lower_bound(cfg).value <= exact.value + exact.quad_error
        assert exact.value <= upper_bound(cfg).value + exact.quad_error
        assert mc_capacity(cfg, 20_000, rng).within(exact.value, n_sigma=4.0)

    def test_square_arrays_stay_ordered(self):
        cfg = SystemConfig(n_s=4, n_r=4, n_d=4, alpha=1e3, rho=10.0)
        exact = exact_capacity(cfg)
        assert lower_bound(cfg).value <= exact.value + exact.quad_error
        assert exact.value <= upper_bound(cfg).value + exact.quad_error
        for alpha in (1e4, 1e5, 1e6):
            cfg = cfg.with_alpha(alpha)
            lower, upper = lower_bound(cfg).value, upper_bound(cfg).value
            assert 0.0 < lower <= upper

    def test_bounds_nondecreasing_in_alpha(self):
        lowers, uppers = [], []
        for alpha in (1e3, 1e4, 1e5, 1e6):
            cfg = SystemConfig(n_s=2, n_r=3, n_d=4, alpha=alpha, rho=10.0)
            lowers.append(lower_bound(cfg).value)
            uppers.append(upper_bound(cfg).value)
        assert all(b >= a - 1e-9 for a, b in zip(lowers, lowers[1:]))
        assert all(b >= a - 1e-9 for a, b in zip(uppers, uppers[1:]))

    @pytest.mark.slow
    def test_exact_capacity_saturates_in_alpha(self):
        alphas = [1.0, 10.0, 100.0, 1e3, 1e4, 2e4, 4e4, 8e4]
        points = alpha_sweep(2, 3, 4, 10.0, alphas)
        exact = [point.exact for point in points]
        assert all(b >= a - 1e-7 for a, b in zip(exact, exact[1:]))
        for point in points:
            assert point.lower <= point.exact + 1e-6
            assert point.exact <= point.upper + 1e-6

        # doublings from 1e4 on; the approach to the limit goes like 1/alpha
        steps = np.diff(exact[4:])
        assert np.all(steps >= -1e-7)
        assert steps[-1] <= 0.6 * steps[0]

        limit = mc_single_hop_capacity(2, 3, 10.0, 50_000, RngStream(seed=9))
        half_sigma = 0.5 * limit.stderr
        assert exact[-1] <= 0.5 * limit.mean + 4.0 * half_sigma
        assert 0.5 * limit.mean - exact[-1] <= 0.02 + 4.0 * half_sigma

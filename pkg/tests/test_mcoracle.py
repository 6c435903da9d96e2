"""Tests for the Monte Carlo channel simulator."""

import math

import numpy as np
import pytest
from scipy import integrate

from app.analysis.eigenstats import unordered_beta_pdf
from app.core.config import settings
from app.core.errors import DomainError
from app.schemas.montecarlo import McEstimate, RngStream
from app.simulation.mcoracle import (
    capacity_draws,
    complex_gaussian,
    ks_statistic,
    mc_beta_spectra,
    mc_capacity,
    mc_cascade_eigenvalues,
    mc_expected_det,
    mc_expected_logdet,
    mc_single_hop_capacity,
    sample_channels,
)


class TestChannelDraws:
    def test_unit_variance(self):
        z = complex_gaussian(np.random.default_rng(0), (200_000,))
        assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.01)
        assert np.var(z.real) == pytest.approx(0.5, abs=0.01)
        assert abs(np.mean(z)) < 0.01

    def test_shapes(self, config_234, rng):
        h1, h2 = sample_channels(config_234, rng)
        assert h1.shape == (3, 2)
        assert h2.shape == (4, 3)
        h1, h2 = sample_channels(config_234, rng, n_trials=5)
        assert h1.shape == (5, 3, 2)
        assert h2.shape == (5, 4, 3)

    def test_capacity_forms_agree(self, config_234, config_423, rng):
        for cfg in (config_234, config_423):
            h1, h2 = sample_channels(cfg, rng, n_trials=50)
            np.testing.assert_allclose(
                capacity_draws(cfg, h1, h2, form="source"),
                capacity_draws(cfg, h1, h2, form="destination"),
                rtol=1e-10, atol=1e-12,
            )

    def test_unknown_form(self, config_234, rng):
        h1, h2 = sample_channels(config_234, rng, n_trials=2)
        with pytest.raises(DomainError):
            capacity_draws(config_234, h1, h2, form="relay")


class TestReproducibility:
    def test_same_stream_same_result(self, config_234, rng):
        first = mc_capacity(config_234, 500, rng)
        second = mc_capacity(config_234, 500, rng)
        assert first == second

    def test_streams_differ(self, config_234, rng):
        assert mc_capacity(config_234, 500, rng.child(1)).mean != mc_capacity(config_234, 500, rng.child(2)).mean

    def test_independent_of_worker_count(self, config_234, rng, monkeypatch):
        monkeypatch.setattr(settings, "MC_SHARD_SIZE", 100)
        serial = mc_cascade_eigenvalues(config_234, 1_000, rng)
        monkeypatch.setattr(settings, "MAX_WORKERS", 2)
        parallel = mc_cascade_eigenvalues(config_234, 1_000, rng)
        np.testing.assert_array_equal(serial, parallel)

    def test_generator_accepts_shard_index(self):
        stream = RngStream(seed=1, stream_id=2)
        assert stream.generator(0).random() == RngStream(seed=1, stream_id=2).generator(0).random()
        assert stream.generator(0).random() != stream.generator(1).random()


class TestEstimators:
    def test_zero_snr(self, config_234, rng):
        estimate = mc_capacity(config_234.with_rho(0.0), 200, rng)
        assert estimate.mean == 0.0
        assert estimate.stderr == 0.0

    def test_eigenvalues_are_pooled_and_non_negative(self, config_423, rng):
        samples = mc_cascade_eigenvalues(config_423, 300, rng)
        assert samples.shape == (300 * config_423.s,)
        assert np.all(samples >= 0.0)

    def test_single_hop_siso(self, rng):
        def f(x):
            return math.log2(1.0 + 10.0 * x) * math.exp(-x)

        expected, _ = integrate.quad(f, 0.0, np.inf, epsrel=1e-12)
        assert mc_single_hop_capacity(1, 1, 10.0, 20_000, rng).within(expected, n_sigma=4.0)

    def test_single_hop_zero_snr(self, rng):
        assert mc_single_hop_capacity(2, 3, 0.0, 200, rng).mean == 0.0

    def test_expected_det_at_zero_snr(self, config_234, rng):
        estimate = mc_expected_det(config_234.with_rho(0.0), 200, rng)
        assert estimate.mean == 1.0

    def test_logdet_keeps_full_rank_draws(self, config_234, rng):
        assert mc_expected_logdet(config_234, 500, rng).n_skipped == 0

    def test_beta_spectra_match_density(self, config_234, rng):
        spectra = mc_beta_spectra(config_234, 20_000, rng)
        assert spectra.shape == (20_000, config_234.q)
        assert np.all(spectra < 1.0 / config_234.a)
        mean_beta, _ = integrate.quad(
            lambda b: b * unordered_beta_pdf(b, config_234), 0.0, 1.0 / config_234.a,
            epsrel=1e-10, limit=200,
        )
        estimate = McEstimate.from_samples(spectra.sum(axis=1))
        assert estimate.within(config_234.q * mean_beta, n_sigma=4.0)

    def test_rejects_too_few_trials(self, config_234, rng):
        with pytest.raises(DomainError):
            mc_capacity(config_234, 50, rng)
        with pytest.raises(DomainError):
            mc_single_hop_capacity(1, 1, 1.0, 99, rng)

    def test_single_hop_rejects_bad_arguments(self, rng):
        with pytest.raises(DomainError):
            mc_single_hop_capacity(0, 1, 1.0, 200, rng)
        with pytest.raises(DomainError):
            mc_single_hop_capacity(1, 1, -1.0, 200, rng)


class TestMcEstimate:
    def test_from_samples(self):
        estimate = McEstimate.from_samples([1.0, 2.0, 3.0, 4.0])
        assert estimate.mean == 2.5
        assert estimate.stderr == pytest.approx(math.sqrt((5.0 / 3.0) / 4.0))
        assert estimate.n_trials == 4

    def test_within(self):
        estimate = McEstimate(mean=1.0, stderr=0.1, n_trials=100)
        assert estimate.within(1.25)
        assert not estimate.within(1.35)
        assert estimate.within(1.35, n_sigma=4.0)


class TestKolmogorovSmirnov:
    def test_evenly_spread_samples(self):
        samples = (np.arange(10) + 0.5) / 10
        assert ks_statistic(samples, lambda x: x) == pytest.approx(0.05)

    def test_uniform_samples(self):
        samples = np.random.default_rng(0).random(10_000)
        assert ks_statistic(samples, lambda x: x) < 0.02

    def test_point_mass(self):
        assert ks_statistic([0.5, 0.5], lambda x: x) == pytest.approx(0.5)

    def test_requires_two_samples(self):
        with pytest.raises(DomainError):
            ks_statistic([0.3], lambda x: x)

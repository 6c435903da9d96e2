"""Tests for log-scaled determinants, cofactors and Hermitian eigenvalues."""

import math

import numpy as np
import pytest

from app.core.errors import DomainError
from app.schemas.numeric import LogScaledReal
from app.utils.matrixcore import (
    cofactor_scaled,
    det_scaled,
    det_scaled_log,
    hermitian_eigenvalues,
    min_gap,
    vandermonde_product,
)


class TestDeterminant:
    def test_matches_numpy(self):
        m = np.random.default_rng(0).normal(size=(5, 5))
        assert det_scaled(m).to_float() == pytest.approx(np.linalg.det(m), rel=1e-12)

    def test_extreme_scales(self):
        log_abs = np.array([[700.0, -np.inf], [-np.inf, 800.0]])
        signs = np.array([[1.0, 0.0], [0.0, -1.0]])
        det = det_scaled_log(log_abs, signs)
        assert det.sign == -1
        assert det.log_magnitude == pytest.approx(1500.0, rel=1e-14)

    def test_singular_matrix(self):
        det = det_scaled(np.array([[1.0, 2.0], [2.0, 4.0]]))
        assert abs(det.to_float()) < 1e-12

    def test_zero_row(self):
        assert det_scaled(np.array([[0.0, 0.0], [1.0, 2.0]])).is_zero()

    def test_empty_matrix_is_one(self):
        det = det_scaled_log(np.empty((0, 0)), np.empty((0, 0)))
        assert det == LogScaledReal.one()

    def test_rejects_non_square(self):
        with pytest.raises(DomainError):
            det_scaled(np.ones((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            det_scaled_log(np.array([[np.nan]]), np.array([[1.0]]))


class TestCofactor:
    def test_matches_signed_minor(self):
        m = np.random.default_rng(1).normal(size=(4, 4))
        for l in range(1, 5):
            for k in range(1, 5):
                minor = np.delete(np.delete(m, l - 1, axis=0), k - 1, axis=1)
                expected = (-1) ** (l + k) * np.linalg.det(minor)
                assert cofactor_scaled(m, l, k).to_float() == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_laplace_expansion(self):
        m = np.random.default_rng(2).normal(size=(3, 3))
        expansion = sum(m[0, k - 1] * cofactor_scaled(m, 1, k).to_float() for k in range(1, 4))
        assert expansion == pytest.approx(np.linalg.det(m), rel=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(DomainError):
            cofactor_scaled(np.eye(3), 0, 1)
        with pytest.raises(DomainError):
            cofactor_scaled(np.eye(3), 1, 4)


class TestHermitianEigenvalues:
    def test_matches_eigvalsh_on_stack(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(6, 4, 4)) + 1j * rng.normal(size=(6, 4, 4))
        h = x @ np.conj(np.swapaxes(x, -1, -2))
        np.testing.assert_allclose(hermitian_eigenvalues(h), np.linalg.eigvalsh(h), rtol=1e-12, atol=1e-12)

    def test_ascending(self):
        eig = hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(eig, [1.0, 2.0, 3.0])

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            hermitian_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DomainError):
            hermitian_eigenvalues(np.ones((2, 3)))


class TestVandermonde:
    def test_product(self):
        assert vandermonde_product([1.0, 2.0, 4.0]).to_float() == pytest.approx(6.0, rel=1e-14)

    def test_sign(self):
        v = vandermonde_product([3.0, 1.0])
        assert v.sign == -1
        assert v.to_float() == pytest.approx(-2.0)

    def test_single_value_is_one(self):
        assert vandermonde_product([0.7]).to_float() == 1.0

    def test_coincident_values(self):
        assert vandermonde_product([1.0, 1.0]).is_zero()

    def test_min_gap(self):
        assert min_gap([0.1, 0.5, 0.55]) == pytest.approx(0.05)
        assert min_gap([1.0]) == math.inf

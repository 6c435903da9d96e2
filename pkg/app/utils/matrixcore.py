"""Small dense linear algebra on log-scaled entries.

Structured determinants in the spectral formulas carry entries spanning
hundreds of orders of magnitude, so the determinant routines accept entries
as (log|m|, sign) pairs, equilibrate rows and columns by their largest
log-magnitude, run an LU-based ``numpy.linalg.slogdet`` and add the scaling
back as a log correction.
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from app.core.errors import ConvergenceError, DomainError
from app.schemas.numeric import LogScaledReal

logger = logging.getLogger(__name__)

# Determinants whose equilibrated magnitude falls below this are treated as zero.
_SINGULAR_LOG_THRESHOLD = math.log(1e-300)
_HERMITIAN_TOLERANCE = 1e-10


def _as_log_entries(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=float)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(m))
    return log_abs, np.sign(m)


def _check_square(log_abs: np.ndarray, signs: np.ndarray) -> None:
    if log_abs.ndim != 2 or log_abs.shape[0] != log_abs.shape[1]:
        raise DomainError(f"Determinant requires a square matrix, got shape {log_abs.shape}")
    if log_abs.shape != signs.shape:
        raise DomainError("Log-magnitude and sign arrays must share a shape")
    if np.any(np.isnan(log_abs)) or np.any(log_abs == np.inf):
        raise DomainError("Matrix entries must be finite")


def det_scaled_log(log_abs: np.ndarray, signs: np.ndarray) -> LogScaledReal:
    """Determinant of the matrix with entries signs * exp(log_abs)."""
    log_abs = np.asarray(log_abs, dtype=float)
    signs = np.asarray(signs, dtype=float)
    _check_square(log_abs, signs)
    n = log_abs.shape[0]
    if n == 0:
        return LogScaledReal.one()

    work = np.where(signs == 0, -np.inf, log_abs)
    row_scale = work.max(axis=1)
    if np.any(row_scale == -np.inf):
        return LogScaledReal.zero()
    work = work - row_scale[:, None]
    col_scale = work.max(axis=0)
    if np.any(col_scale == -np.inf):
        return LogScaledReal.zero()
    work = work - col_scale[None, :]

    scaled = signs * np.exp(work)
    sign, logdet = np.linalg.slogdet(scaled)
    if sign == 0 or not np.isfinite(logdet) or logdet < _SINGULAR_LOG_THRESHOLD:
        logger.debug(f"Numerically singular {n}x{n} matrix (log|det| = {logdet})")
        return LogScaledReal.zero()
    total = float(logdet + row_scale.sum() + col_scale.sum())
    return LogScaledReal.from_log(total, int(np.sign(sign)))


def det_scaled(m: np.ndarray) -> LogScaledReal:
    """Determinant of a real square matrix as sign and log-magnitude."""
    return det_scaled_log(*_as_log_entries(m))


def cofactor_scaled_log(
    log_abs: np.ndarray, signs: np.ndarray, l: int, k: int
) -> LogScaledReal:
    """(l, k) cofactor (1-based) of a log-scaled matrix via its explicit minor."""
    log_abs = np.asarray(log_abs, dtype=float)
    signs = np.asarray(signs, dtype=float)
    _check_square(log_abs, signs)
    n = log_abs.shape[0]
    if not (1 <= l <= n and 1 <= k <= n):
        raise DomainError(f"Cofactor index ({l}, {k}) outside a {n}x{n} matrix")
    minor_log = np.delete(np.delete(log_abs, l - 1, axis=0), k - 1, axis=1)
    minor_sign = np.delete(np.delete(signs, l - 1, axis=0), k - 1, axis=1)
    minor = det_scaled_log(minor_log, minor_sign)
    return -minor if (l + k) % 2 else minor


def cofactor_scaled(m: np.ndarray, l: int, k: int) -> LogScaledReal:
    """(l, k) cofactor (1-based) of a real square matrix."""
    return cofactor_scaled_log(*_as_log_entries(m), l, k)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or a stack of them.

    The input is symmetrized before the LAPACK call; departures from
    Hermitian symmetry beyond a relative 1e-10 are rejected.
    """
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DomainError(f"Eigenvalues require square matrices, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("Matrix entries must be finite")
    adjoint = np.conj(np.swapaxes(m, -1, -2))
    scale = np.max(np.abs(m)) if m.size else 0.0
    if scale > 0 and np.max(np.abs(m - adjoint)) > _HERMITIAN_TOLERANCE * scale:
        raise DomainError("Matrix is not Hermitian within tolerance")
    try:
        return np.linalg.eigvalsh(0.5 * (m + adjoint))
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigen-solver failed: {str(e)}") from e


def vandermonde_product(betas: Sequence[float]) -> LogScaledReal:
    """Product of (beta_j - beta_i) over all i < j."""
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size < 1:
        raise DomainError("vandermonde_product requires a non-empty list")
    i, j = np.triu_indices(betas.size, k=1)
    diffs = betas[j] - betas[i]
    if np.any(diffs == 0):
        return LogScaledReal.zero()
    sign = int(np.prod(np.sign(diffs)))
    return LogScaledReal.from_log(float(np.sum(np.log(np.abs(diffs)))), sign)


def min_gap(betas: Sequence[float]) -> float:
    """Smallest consecutive difference of a sorted spectrum (inf for one value)."""
    betas = np.asarray(betas, dtype=float)
    if betas.size < 2:
        return math.inf
    return float(np.min(np.diff(betas)))

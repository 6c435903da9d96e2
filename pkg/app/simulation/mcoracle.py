"""Monte Carlo simulator of the AF MIMO dual-hop channel.

Every estimator splits its trials into fixed-size shards. Shard ``k`` of a
stream draws from ``RngStream.generator(k)``, shards run through joblib with at
most ``settings.MAX_WORKERS`` workers, and per-trial values are concatenated
in shard order, so results do not depend on the worker count.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from app.core.config import settings
from app.core.errors import ConvergenceError, DomainError
from app.schemas.montecarlo import McEstimate, RngStream
from app.schemas.system import SystemConfig
from app.utils.matrixcore import hermitian_eigenvalues

logger = logging.getLogger(__name__)

_MIN_TRIALS = 100


def complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """ZMCSCG entries with unit variance (real and imaginary parts N(0, 1/2))."""
    pairs = rng.normal(loc=0.0, scale=math.sqrt(0.5), size=(*shape, 2))
    return pairs.view(np.complex128)[..., 0]


def _adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _check_trials(n_trials: int) -> None:
    if n_trials < _MIN_TRIALS:
        raise DomainError(f"At least {_MIN_TRIALS} trials are required, got {n_trials}")


def _shard_sizes(n_trials: int) -> list:
    size = settings.MC_SHARD_SIZE
    full, rest = divmod(n_trials, size)
    return [size] * full + ([rest] if rest else [])


def run_sharded(
    kernel: Callable[..., np.ndarray], n_trials: int, rng: RngStream, **kwargs
) -> np.ndarray:
    """Run ``kernel(n, generator, **kwargs)`` over shards and concatenate in order."""
    sizes = _shard_sizes(n_trials)
    n_jobs = min(settings.MAX_WORKERS, len(sizes))
    logger.debug(f"Running {n_trials} trials in {len(sizes)} shards on {n_jobs} workers")
    parts = Parallel(n_jobs=n_jobs)(
        delayed(kernel)(size, rng.generator(idx), **kwargs)
        for idx, size in enumerate(sizes)
    )
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Channel draws
# ---------------------------------------------------------------------------


def sample_channels(
    cfg: SystemConfig, rng, n_trials: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw the two hops H1 (n_r x n_s) and H2 (n_d x n_r).

    Args:
        cfg: System configuration.
        rng: An :class:`RngStream` or a numpy Generator.
        n_trials: When given, a leading batch axis of this length is added.

    Returns:
        Tuple (H1, H2) of complex arrays.
    """
    generator = rng.generator() if isinstance(rng, RngStream) else rng
    batch = () if n_trials is None else (n_trials,)
    h1 = complex_gaussian(generator, (*batch, cfg.n_r, cfg.n_s))
    h2 = complex_gaussian(generator, (*batch, cfg.n_d, cfg.n_r))
    return h1, h2


def _noise_factor(h2: np.ndarray, a: float) -> np.ndarray:
    """Lower Cholesky factor of R_n = I + a H2 H2^H."""
    n_d = h2.shape[-2]
    r_n = np.eye(n_d) + a * (h2 @ _adjoint(h2))
    try:
        return np.linalg.cholesky(r_n)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Cholesky factorization of R_n failed: {str(e)}") from e


def cascade_matrices(cfg: SystemConfig, h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    """H1^H H2^H R_n^{-1} H2 H1 through the Cholesky factor of R_n."""
    chol = _noise_factor(h2, cfg.a)
    whitened = np.linalg.solve(chol, h2 @ h1)
    return _adjoint(whitened) @ whitened


def capacity_draws(
    cfg: SystemConfig, h1: np.ndarray, h2: np.ndarray, form: str = "source"
) -> np.ndarray:
    """Per-draw 0.5 log2 det of the instantaneous mutual information.

    Args:
        cfg: System configuration.
        h1: First-hop matrices (batch, n_r, n_s).
        h2: Second-hop matrices (batch, n_d, n_r).
        form: "source" for the n_s x n_s cascade form, "destination" for
            det(I + R_s R_n^{-1}) at the destination.

    Returns:
        Capacity of each draw in bits/s/Hz.
    """
    c = cfg.rho * cfg.a / cfg.n_s
    if form == "source":
        m = cascade_matrices(cfg, h1, h2)
        mat = np.eye(cfg.n_s) + c * m
    elif form == "destination":
        g = h2 @ h1
        r_s = c * (g @ _adjoint(g))
        r_n = np.eye(cfg.n_d) + cfg.a * (h2 @ _adjoint(h2))
        mat = np.eye(cfg.n_d) + r_s @ np.linalg.inv(r_n)
    else:
        raise DomainError(f"Unknown capacity form '{form}'")
    sign, logdet = np.linalg.slogdet(mat)
    if np.any(sign.real <= 0):
        raise ConvergenceError("Non-positive determinant in capacity draw")
    return 0.5 * logdet / math.log(2.0)


# ---------------------------------------------------------------------------
# Shard kernels
# ---------------------------------------------------------------------------


def _capacity_kernel(n: int, gen: np.random.Generator, cfg: SystemConfig) -> np.ndarray:
    h1, h2 = sample_channels(cfg, gen, n)
    return capacity_draws(cfg, h1, h2)


def _top_eigenvalues(cfg: SystemConfig, h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    eig = hermitian_eigenvalues(cascade_matrices(cfg, h1, h2))
    return eig[..., -cfg.s:]


def _eigen_kernel(n: int, gen: np.random.Generator, cfg: SystemConfig) -> np.ndarray:
    h1, h2 = sample_channels(cfg, gen, n)
    return np.maximum(_top_eigenvalues(cfg, h1, h2), 0.0).reshape(-1)


def _det_kernel(n: int, gen: np.random.Generator, cfg: SystemConfig) -> np.ndarray:
    h1, h2 = sample_channels(cfg, gen, n)
    c = cfg.rho * cfg.a / cfg.n_s
    if c == 0:
        return np.ones(n)
    sign, logdet = np.linalg.slogdet(np.eye(cfg.n_s) + c * cascade_matrices(cfg, h1, h2))
    return sign.real * np.exp(logdet)


def _logdet_kernel(n: int, gen: np.random.Generator, cfg: SystemConfig) -> np.ndarray:
    """ln det(Phi) per draw, NaN for numerically rank-deficient draws."""
    h1, h2 = sample_channels(cfg, gen, n)
    top = _top_eigenvalues(cfg, h1, h2)
    singular = top[:, 0] <= settings.EIGEN_RANK_TOLERANCE * top[:, -1]
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.sum(np.log(top), axis=-1)
    values[singular] = np.nan
    return values


def _beta_kernel(n: int, gen: np.random.Generator, cfg: SystemConfig) -> np.ndarray:
    h2 = complex_gaussian(gen, (n, cfg.n_d, cfg.n_r))
    gram = h2 @ _adjoint(h2) if cfg.n_d <= cfg.n_r else _adjoint(h2) @ h2
    lam2 = np.maximum(hermitian_eigenvalues(gram), 0.0)
    return (lam2 / (1.0 + cfg.a * lam2)).reshape(-1)


def _single_hop_kernel(
    n: int, gen: np.random.Generator, n_t: int, n_rx: int, snr: float
) -> np.ndarray:
    h = complex_gaussian(gen, (n, n_rx, n_t))
    sign, logdet = np.linalg.slogdet(np.eye(n_rx) + (snr / n_t) * (h @ _adjoint(h)))
    return logdet / math.log(2.0)


def _conditional_kernel(
    n: int, gen: np.random.Generator, betas: np.ndarray, n_s: int, c: float
) -> np.ndarray:
    """Columns: det(I + c L H H^H) and ln det(Phi) for H with q rows, n_s columns."""
    q = betas.size
    h = complex_gaussian(gen, (n, q, n_s))
    sqrt_l = np.sqrt(betas)[:, None]
    scaled = sqrt_l * h
    gram_q = scaled @ _adjoint(scaled)
    sign, logdet = np.linalg.slogdet(np.eye(q) + c * gram_q)
    dets = sign.real * np.exp(logdet)
    if q >= n_s:
        _, ln_phi = np.linalg.slogdet(_adjoint(scaled) @ scaled)
    else:
        _, ln_phi = np.linalg.slogdet(gram_q)
    return np.stack([dets, ln_phi], axis=-1)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def mc_capacity(cfg: SystemConfig, n_trials: int, rng: RngStream) -> McEstimate:
    """Monte Carlo ergodic capacity 0.5 E log2 det(I + R_s R_n^{-1})."""
    _check_trials(n_trials)
    if cfg.rho == 0:
        return McEstimate(mean=0.0, stderr=0.0, n_trials=n_trials)
    values = run_sharded(_capacity_kernel, n_trials, rng, cfg=cfg)
    return McEstimate.from_samples(values)


def mc_cascade_eigenvalues(cfg: SystemConfig, n_trials: int, rng: RngStream) -> np.ndarray:
    """Pooled s largest eigenvalues of the cascade matrix (n_trials * s values)."""
    _check_trials(n_trials)
    return run_sharded(_eigen_kernel, n_trials, rng, cfg=cfg)


def mc_expected_det(cfg: SystemConfig, n_trials: int, rng: RngStream) -> McEstimate:
    """Monte Carlo E det(I + (rho a / n_s) H1^H L H1)."""
    _check_trials(n_trials)
    values = run_sharded(_det_kernel, n_trials, rng, cfg=cfg)
    return McEstimate.from_samples(values)


def mc_expected_logdet(cfg: SystemConfig, n_trials: int, rng: RngStream) -> McEstimate:
    """Monte Carlo E ln det(Phi) over the s nonzero cascade eigenvalues."""
    _check_trials(n_trials)
    values = run_sharded(_logdet_kernel, n_trials, rng, cfg=cfg)
    keep = np.isfinite(values)
    skipped = int(values.size - keep.sum())
    if skipped:
        logger.warning(f"Skipped {skipped} rank-deficient draws for {cfg.label}")
    return McEstimate.from_samples(values[keep], n_skipped=skipped)


def mc_single_hop_capacity(
    n_t: int, n_r: int, snr: float, n_trials: int, rng: RngStream
) -> McEstimate:
    """Monte Carlo E log2 det(I + (snr / n_t) H H^H) for an n_r x n_t Rayleigh channel."""
    _check_trials(n_trials)
    if n_t < 1 or n_r < 1:
        raise DomainError(f"Antenna counts must be positive, got n_t={n_t}, n_r={n_r}")
    if snr < 0:
        raise DomainError(f"SNR must be >= 0, got {snr}")
    if snr == 0:
        return McEstimate(mean=0.0, stderr=0.0, n_trials=n_trials)
    values = run_sharded(_single_hop_kernel, n_trials, rng, n_t=n_t, n_rx=n_r, snr=snr)
    return McEstimate.from_samples(values)


def mc_beta_samples(cfg: SystemConfig, n_trials: int, rng: RngStream) -> np.ndarray:
    """Pooled betas lambda^2 / (1 + a lambda^2) of the second hop (n_trials * q values)."""
    _check_trials(n_trials)
    return run_sharded(_beta_kernel, n_trials, rng, cfg=cfg)


def mc_beta_spectra(cfg: SystemConfig, n_trials: int, rng: RngStream) -> np.ndarray:
    """Ascending beta spectra, one row of q values per trial."""
    return mc_beta_samples(cfg, n_trials, rng).reshape(n_trials, cfg.q)


def mc_conditional_moments(
    betas: Sequence[float], n_s: int, c: float, n_trials: int, rng: RngStream
) -> Tuple[McEstimate, McEstimate]:
    """Monte Carlo E det(I + c L H H^H) and E ln det(Phi) for fixed betas."""
    _check_trials(n_trials)
    betas = np.asarray(betas, dtype=float)
    values = run_sharded(_conditional_kernel, n_trials, rng, betas=betas, n_s=n_s, c=c)
    return McEstimate.from_samples(values[:, 0]), McEstimate.from_samples(values[:, 1])


def ks_statistic(samples: Sequence[float], cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 2:
        raise DomainError("ks_statistic requires at least two samples")
    f = np.clip(np.asarray(cdf(x), dtype=float), 0.0, 1.0)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max(), 0.0))

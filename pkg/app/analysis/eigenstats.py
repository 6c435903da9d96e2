"""Eigenvalue densities and determinant statistics of the cascaded relay matrix.

The cascaded channel of an AF dual-hop link is H1^H L H1 in distribution,
where L = diag(lambda_i^2 / (1 + a lambda_i^2)) collects the squared singular
values of the second hop ("betas"). This module provides:

- the unordered density of its s nonzero eigenvalues, conditionally on the
  betas and unconditionally, as a :class:`BesselTermSeries`;
- the unordered density of a single beta;
- E det(I + c H1^H L H1) and E ln det of the pseudo-Wishart matrix, both
  conditionally on the betas and unconditionally.

All matrices are assembled with log-scaled entries and reduced through
:mod:`app.utils.matrixcore`. When the normalized gain a is large enough that
the moment matrices lose more than ``MAX_LOST_DIGITS`` digits to cancellation,
the same quantities are rebuilt with :mod:`app.utils.extended`.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp
from scipy import integrate, special
from scipy.special import logsumexp, xlogy

from app.core.config import settings
from app.core.errors import (
    DegenerateSpectrumError,
    DomainError,
    PdfAssemblyError,
    QuadratureError,
)
from app.schemas.numeric import LogScaledReal
from app.schemas.spectrum import BesselTerm, BesselTermSeries
from app.schemas.system import SystemConfig, normalization_log_k
from app.utils import extended
from app.utils.matrixcore import (
    cofactor_scaled_log,
    det_scaled_log,
    min_gap,
    vandermonde_product,
)
from app.utils.specfun import (
    coeff_A,
    digamma,
    log_bessel_k_scaled,
    log_moment_core,
    moment_integral,
    varsigma_scaled,
)

logger = logging.getLogger(__name__)

_LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Matrix builders
# ---------------------------------------------------------------------------


def _moment_log(d: int, e: int, a: float) -> float:
    """log of the binomial moment integral; a = 0 reduces to Gamma(d+1)."""
    if a == 0:
        return float(special.gammaln(d + 1))
    return moment_integral(d, e, a).log_magnitude


def gram_matrix_log(q: int, p: int, a: float) -> Tuple[np.ndarray, np.ndarray]:
    """Moment matrix G with G[m,n] = M(p-q+m+n-2, 2q-m-n, a), 1-based m, n."""
    log_abs = np.empty((q, q))
    for m in range(1, q + 1):
        for n in range(1, q + 1):
            log_abs[m - 1, n - 1] = _moment_log(p - q + m + n - 2, 2 * q - m - n, a)
    return log_abs, np.ones((q, q))


def _xi_matrix_log(
    q: int, p: int, a: float, weights: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """Matrix with entries M(tau-2, e, a) + w_n M(tau-1, e-1, a), tau = p-q+m+n."""
    log_abs, signs = gram_matrix_log(q, p, a)
    for n in range(1, q + 1):
        w = weights[n - 1]
        if w <= 0:
            continue
        for m in range(1, q + 1):
            tau = p - q + m + n
            second = math.log(w) + _moment_log(tau - 1, 2 * q - m - n - 1, a)
            log_abs[m - 1, n - 1] = np.logaddexp(log_abs[m - 1, n - 1], second)
    return log_abs, signs


def _logdet_matrix_log(
    k: int, q: int, p: int, a: float
) -> Tuple[np.ndarray, np.ndarray]:
    """W_k: the moment matrix with column k replaced by log-moment entries."""
    log_abs, signs = gram_matrix_log(q, p, a)
    for m in range(1, q + 1):
        if a == 0:
            tau = p - q + m + k
            entry = LogScaledReal.from_float(digamma(tau - 1)).scale(
                float(special.gammaln(tau - 1))
            )
        else:
            entry = varsigma_scaled(m + k, p, q, a)
        log_abs[m - 1, k - 1] = entry.log_magnitude
        signs[m - 1, k - 1] = entry.sign
    return log_abs, signs


def _require_dims(n_s: int, q: int, p: int) -> None:
    if n_s < 1 or q < 1 or p < q:
        raise DomainError(f"Invalid dimensions n_s={n_s}, q={q}, p={p}")


def _check_spectrum(betas: Sequence[float]) -> np.ndarray:
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size < 1:
        raise DomainError("A non-empty list of betas is required")
    if np.any(betas <= 0) or not np.all(np.isfinite(betas)):
        raise DomainError("Betas must be positive and finite")
    gap = min_gap(betas)
    if gap < settings.GAP_TOLERANCE:
        raise DegenerateSpectrumError(gap, settings.GAP_TOLERANCE)
    return betas


# ---------------------------------------------------------------------------
# Extended precision
# ---------------------------------------------------------------------------


def lost_digits_for_gain(q: int, a: float) -> float:
    """Approximate decimal digits the q x q moment matrices lose at gain a."""
    return q * (q - 1) * math.log10(max(a, 1.0))


def needs_extended_precision(q: int, a: float) -> bool:
    return lost_digits_for_gain(q, a) > settings.MAX_LOST_DIGITS


def _matrix_dps(q: int, a: float) -> int:
    return settings.EXTENDED_GUARD_DIGITS + math.ceil(lost_digits_for_gain(q, a))


def _gram_rows_mp(q: int, p: int, a: float) -> List[List[Any]]:
    return [
        [extended.moment(p - q + m + n - 2, 2 * q - m - n, a) for n in range(1, q + 1)]
        for m in range(1, q + 1)
    ]


def _xi_rows_mp(q: int, p: int, a: float, weights: Sequence[float]) -> List[List[Any]]:
    rows = _gram_rows_mp(q, p, a)
    for n in range(1, q + 1):
        w = weights[n - 1]
        if w <= 0:
            continue
        for m in range(1, q + 1):
            tau = p - q + m + n
            rows[m - 1][n - 1] += mp.mpf(w) * extended.moment(tau - 1, 2 * q - m - n - 1, a)
    return rows


def _logdet_rows_mp(k: int, q: int, p: int, a: float, cores: Sequence[Any]) -> List[List[Any]]:
    rows = _gram_rows_mp(q, p, a)
    for m in range(1, q + 1):
        rows[m - 1][k - 1] = extended.varsigma(m + k, p, q, a, cores)
    return rows


# ---------------------------------------------------------------------------
# Eigenvalue densities
# ---------------------------------------------------------------------------


def _merge_terms(raw: Dict[Tuple[int, int], List[LogScaledReal]]) -> List[BesselTerm]:
    terms = []
    for (half_power, order), coeffs in sorted(raw.items()):
        coeff = LogScaledReal.sum_of(coeffs)
        if coeff.is_zero():
            continue
        terms.append(BesselTerm(coeff=coeff, half_power=half_power, bessel_order=order))
    return terms


def unordered_pdf(cfg: SystemConfig) -> BesselTermSeries:
    """Density of a randomly selected nonzero eigenvalue of H1^H L H1.

    Args:
        cfg: System configuration (rho enters only through a).

    Returns:
        Series with decay_rate = a whose terms are
        (2K/s) C(q+n_s-l, i) a^(q+n_s-l-i) / Gamma(n_s-q+k) * G_{l,k}
        * lambda^((2n_s+2k+p-q-i-3)/2) * K_{p+q-i-1}(2 sqrt(lambda)).
    """
    n_s, q, p, s, a = cfg.n_s, cfg.q, cfg.p, cfg.s, cfg.a
    if needs_extended_precision(q, a):
        return _unordered_pdf_extended(cfg)
    log_g, sign_g = gram_matrix_log(q, p, a)
    log_a = math.log(a)
    base = _LOG2 + cfg.log_k - math.log(s)

    raw: Dict[Tuple[int, int], List[LogScaledReal]] = {}
    for k in range(q - s + 1, q + 1):
        gamma_k = float(special.gammaln(n_s - q + k))
        for l in range(1, q + 1):
            cof = cofactor_scaled_log(log_g, sign_g, l, k)
            if cof.is_zero():
                continue
            top = q + n_s - l
            for i in range(top + 1):
                log_coeff = (
                    base
                    + math.log(math.comb(top, i))
                    + (top - i) * log_a
                    - gamma_k
                )
                key = (2 * n_s + 2 * k + p - q - i - 3, abs(p + q - i - 1))
                raw.setdefault(key, []).append(cof.scale(log_coeff))

    series = BesselTermSeries(decay_rate=a, terms=_merge_terms(raw))
    logger.debug(f"unordered_pdf{cfg.label}: {len(series)} terms, a={a:.6g}")
    return series


def _term_scale_log10(half_power: int, order: int, coeff: Any, a: float) -> float:
    """log10 of a term's size near lambda = 1/a, where the density has its mass.

    Small-argument form K_nu(x) ~ Gamma(nu) / 2 (x/2)^-nu at x = 2/sqrt(a).
    """
    gamma_part = float(special.gammaln(max(order, 1))) / math.log(10.0)
    return extended.log10_abs(coeff) + gamma_part + 0.5 * (order - half_power) * math.log10(a)


def _series_coefficients_mp(cfg: SystemConfig) -> List[Tuple[Tuple[int, int], Any]]:
    """Nonzero ((half_power, order), coeff) pairs at the current mpmath precision."""
    n_s, q, p, s, a = cfg.n_s, cfg.q, cfg.p, cfg.s, cfg.a
    rows = _gram_rows_mp(q, p, a)
    a_mp = mp.mpf(a)
    base = 2 * extended.normalization(q, p) / s
    raw: Dict[Tuple[int, int], Any] = {}
    for k in range(q - s + 1, q + 1):
        gamma_k = mp.gamma(n_s - q + k)
        for l in range(1, q + 1):
            cof = extended.cofactor(rows, l, k)
            if cof == 0:
                continue
            top = q + n_s - l
            for i in range(top + 1):
                key = (2 * n_s + 2 * k + p - q - i - 3, abs(p + q - i - 1))
                coeff = base * mp.binomial(top, i) * a_mp ** (top - i) / gamma_k * cof
                raw[key] = raw.get(key, mp.mpf(0)) + coeff
    return [(key, c) for key, c in sorted(raw.items(), key=lambda kv: kv[0]) if c != 0]


def _unordered_pdf_extended(cfg: SystemConfig) -> BesselTermSeries:
    """:func:`unordered_pdf` with cofactors and coefficients computed in mpmath.

    The series is summed at enough digits to absorb the cancellation between
    its largest terms and the density, which is of order a. Coefficients are
    rebuilt at that precision when it exceeds the first estimate.
    """
    q, a = cfg.q, cfg.a
    log_a = math.log10(a)
    build_dps = settings.EXTENDED_GUARD_DIGITS + math.ceil(
        (q * (q - 1) + 2 * (q + cfg.n_s)) * log_a
    )
    with mp.workdps(build_dps):
        items = _series_coefficients_mp(cfg)
        scale = max(_term_scale_log10(hp, order, c, a) for (hp, order), c in items)
    working_dps = max(
        build_dps, settings.EXTENDED_GUARD_DIGITS + math.ceil(max(scale - log_a, 0.0))
    )
    with mp.workdps(working_dps):
        if working_dps > build_dps:
            items = _series_coefficients_mp(cfg)
        terms = [
            BesselTerm(coeff=extended.to_log_scaled(c), half_power=hp, bessel_order=order)
            for (hp, order), c in items
        ]
        precise = [mp.nstr(c, working_dps + 5) for _, c in items]

    logger.info(
        f"unordered_pdf{cfg.label}: a={a:.4g} loses about "
        f"{lost_digits_for_gain(q, a):.0f} digits; summing {len(terms)} terms at {working_dps} digits"
    )
    return BesselTermSeries(
        decay_rate=a, terms=terms, working_dps=working_dps, precise_coeffs=precise
    )


def rayleigh_product_pdf(n_s: int, q: int, p: int) -> BesselTermSeries:
    """Unordered eigenvalue density in the a -> 0 (Rayleigh product) limit."""
    _require_dims(n_s, q, p)
    s = min(n_s, q)
    log_g = np.empty((q, q))
    for m in range(1, q + 1):
        for n in range(1, q + 1):
            log_g[m - 1, n - 1] = special.gammaln(p - q + m + n - 1)
    sign_g = np.ones((q, q))
    base = _LOG2 + normalization_log_k(q, p) - math.log(s)

    raw: Dict[Tuple[int, int], List[LogScaledReal]] = {}
    for k in range(q - s + 1, q + 1):
        gamma_k = float(special.gammaln(n_s - q + k))
        for l in range(1, q + 1):
            cof = cofactor_scaled_log(log_g, sign_g, l, k)
            key = (n_s + 2 * k + p - 2 * q + l - 3, abs(p - n_s + l - 1))
            raw.setdefault(key, []).append(cof.scale(base - gamma_k))
    return BesselTermSeries(decay_rate=0.0, terms=_merge_terms(raw))


def _pdf_values(series: BesselTermSeries, lam: np.ndarray) -> np.ndarray:
    log_c, signs, half_powers, orders = series.arrays
    x = 2.0 * np.sqrt(lam)
    log_lam = np.log(lam)
    log_terms = np.empty((log_c.size, lam.size))
    bessel_cache = {}
    for idx, order in enumerate(orders):
        if order not in bessel_cache:
            bessel_cache[order] = log_bessel_k_scaled(order, x) - x
        log_terms[idx] = (
            log_c[idx]
            + 0.5 * half_powers[idx] * log_lam
            - series.decay_rate * lam
            + bessel_cache[order]
        )
    total, sign = logsumexp(log_terms, axis=0, b=signs[:, None], return_sign=True)
    return sign * np.exp(total)


def _pdf_values_extended(series: BesselTermSeries, lam: np.ndarray) -> np.ndarray:
    """Sum the series term by term in mpmath at the series' working precision."""
    max_order = max(term.bessel_order for term in series.terms)
    out = np.empty(lam.size)
    with mp.workdps(series.working_dps):
        coeffs = series.precise
        decay = mp.mpf(series.decay_rate)
        for idx, value in enumerate(lam):
            lam_mp = mp.mpf(float(value))
            root = mp.sqrt(lam_mp)
            ladder = extended.bessel_k_ladder(max_order, 2 * root)
            total = mp.fsum(
                c * root**term.half_power * ladder[term.bessel_order]
                for c, term in zip(coeffs, series.terms)
            )
            out[idx] = float(total * mp.exp(-decay * lam_mp))
    return out


def pdf_eval(series: BesselTermSeries, lam):
    """Evaluate a density series at lambda > 0 (scalar or array)."""
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(~(lam > 0)):
        raise DomainError("pdf_eval requires lambda > 0")
    if len(series) == 0:
        out = np.zeros_like(lam)
        return float(out[0]) if scalar else out

    if series.is_extended:
        values = _pdf_values_extended(series, lam)
    else:
        values = _pdf_values(series, lam)

    worst = float(values.min())
    if worst < -settings.PDF_NEGATIVE_TOLERANCE:
        raise PdfAssemblyError(f"Density series evaluated to {worst:.3e}")
    if worst < -settings.PDF_CLAMP_TOLERANCE:
        logger.debug(f"Clamping negative density round-off {worst:.3e}")
    values = np.maximum(values, 0.0)
    return float(values[0]) if scalar else values


def _pdf_in_u(series: BesselTermSeries):
    """Integrand in u = sqrt(lambda): 2u f(u^2)."""

    def integrand(u: float) -> float:
        if u <= 0:
            return 0.0
        return 2.0 * u * pdf_eval(series, u * u)

    return integrand


def series_cdf(series: BesselTermSeries, lam) -> np.ndarray:
    """CDF of a density series at the given points, by piecewise quadrature."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(lam < 0):
        raise DomainError("series_cdf requires lambda >= 0")
    order = np.argsort(lam)
    u_points = np.sqrt(lam[order])
    integrand = _pdf_in_u(series)
    cumulative = np.empty(u_points.size)
    running = 0.0
    previous = 0.0
    for idx, u in enumerate(u_points):
        if u > previous:
            piece, err = integrate.quad(
                integrand, previous, u, epsabs=1e-13, epsrel=1e-10, limit=200
            )
            running += piece
            previous = u
        cumulative[idx] = running
    out = np.empty_like(cumulative)
    out[order] = np.clip(cumulative, 0.0, 1.0)
    return out


def series_cdf_function(
    series: BesselTermSeries, lam_max: float, n_grid: int = 2000
):
    """Vectorized CDF callable interpolated on a grid in sqrt(lambda)."""
    u_grid = np.linspace(0.0, math.sqrt(lam_max), n_grid)
    cdf_grid = series_cdf(series, u_grid**2)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return np.interp(np.sqrt(np.maximum(x, 0.0)), u_grid, cdf_grid, right=cdf_grid[-1])

    return cdf


def series_mass(series: BesselTermSeries) -> float:
    """Total mass of a density series over (0, inf)."""
    value, err = integrate.quad(
        _pdf_in_u(series), 0.0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=400
    )
    if err > 1e-7:
        raise QuadratureError("Density mass integral did not converge", err, 1e-7)
    return value


def unordered_beta_pdf(beta, cfg: SystemConfig):
    """Density of a randomly selected beta = lambda^2 / (1 + a lambda^2).

    Args:
        beta: Point(s) in [0, inf); the density vanishes for beta >= 1/a.
        cfg: System configuration.

    Returns:
        Density value(s), scalar when beta is scalar.
    """
    scalar = np.ndim(beta) == 0
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if np.any(beta < 0):
        raise DomainError("unordered_beta_pdf requires beta >= 0")
    q, p, a = cfg.q, cfg.p, cfg.a
    weights = _beta_weights(q, p)

    out = np.zeros_like(beta)
    inside = beta < 1.0 / a
    b = beta[inside]
    one_minus = 1.0 - a * b
    x = b / one_minus
    for l, w in weights.items():
        c = p - q + l
        out[inside] += w * np.exp(xlogy(c, x) - x - 2.0 * np.log(one_minus))
    out /= q
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


def _beta_weights(q: int, p: int) -> Dict[int, float]:
    """Sum of coeff_A(i, j, l, p, q) over i, j for each power index l."""
    weights: Dict[int, float] = {}
    for i in range(q):
        for j in range(i + 1):
            for l in range(2 * j + 1):
                weights[l] = weights.get(l, 0.0) + coeff_A(i, j, l, p, q)
    return weights


def conditional_unordered_pdf(betas: Sequence[float], n_s: int, lam: float) -> float:
    """Unordered nonzero-eigenvalue density of H1^H L H1 for fixed betas."""
    betas = _check_spectrum(betas)
    if not lam > 0:
        raise DomainError(f"conditional_unordered_pdf requires lambda > 0, got {lam}")
    q = betas.size
    s = min(n_s, q)
    log_b = np.log(betas)

    total = []
    for k in range(q - s + 1, q + 1):
        log_d = np.empty((q, q))
        for n in range(1, q + 1):
            log_d[:, n - 1] = (n - 1) * log_b
        log_d[:, k - 1] = -lam / betas + (q - n_s - 1) * log_b
        sign_d = np.ones((q, q))
        # Laplace expansion along column k
        column = [
            cofactor_scaled_log(log_d, sign_d, l, k).scale(log_d[l - 1, k - 1])
            for l in range(1, q + 1)
        ]
        det_k = LogScaledReal.sum_of(column)
        prefactor = (n_s - q + k - 1) * math.log(lam) - float(special.gammaln(n_s - q + k))
        total.append(det_k.scale(prefactor))

    value = LogScaledReal.sum_of(total) / vandermonde_product(betas)
    return max(value.to_float() / s, 0.0)


# ---------------------------------------------------------------------------
# Expected determinants
# ---------------------------------------------------------------------------


def _det_weights(n_s: int, q: int, c: float) -> List[float]:
    """Column weights c (n_s - q + n) for n > q - n_s, zero otherwise."""
    return [c * (n_s - q + n) if n > q - n_s else 0.0 for n in range(1, q + 1)]


def _xi_determinant(q: int, p: int, a: float, weights: Sequence[float]) -> float:
    """K det of the moment matrix with weighted shifted columns."""
    if needs_extended_precision(q, a):
        with mp.workdps(_matrix_dps(q, a)):
            value = extended.normalization(q, p) * extended.det(_xi_rows_mp(q, p, a, weights))
            return float(value)
    log_abs, signs = _xi_matrix_log(q, p, a, weights)
    return det_scaled_log(log_abs, signs).scale(normalization_log_k(q, p)).to_float()


def expected_det(cfg: SystemConfig) -> float:
    """E det(I + (rho a / n_s) H1^H L H1), unconditionally on L."""
    if cfg.rho == 0:
        return 1.0
    c = cfg.rho * cfg.a / cfg.n_s
    return _xi_determinant(cfg.q, cfg.p, cfg.a, _det_weights(cfg.n_s, cfg.q, c))


def expected_det_source_limit(cfg: SystemConfig) -> float:
    """Limit of :func:`expected_det` as n_s grows without bound."""
    if cfg.rho == 0:
        return 1.0
    return _xi_determinant(cfg.q, cfg.p, cfg.a, [cfg.rho * cfg.a] * cfg.q)


def expected_det_high_snr(cfg: SystemConfig) -> float:
    """Limit of :func:`expected_det` as rho grows with alpha held fixed."""
    c = cfg.alpha / (cfg.n_s * cfg.n_r)
    log_abs, signs = _xi_matrix_log(cfg.q, cfg.p, 0.0, _det_weights(cfg.n_s, cfg.q, c))
    return det_scaled_log(log_abs, signs).scale(cfg.log_k).to_float()


def conditional_expected_det(betas: Sequence[float], n_s: int, c: float) -> float:
    """E det(I + c H1^H L H1) for fixed betas, with c = rho a / n_s."""
    if c < 0:
        raise DomainError(f"conditional_expected_det requires c >= 0, got {c}")
    betas = _check_spectrum(betas)
    q = betas.size
    log_b = np.log(betas)
    log_delta = np.empty((q, q))
    for n in range(1, q + 1):
        log_delta[:, n - 1] = (n - 1) * log_b
        if n > q - n_s and c > 0:
            log_delta[:, n - 1] += np.log1p(c * betas * (n_s - q + n))
    det = det_scaled_log(log_delta, np.ones((q, q)))
    return (det / vandermonde_product(betas)).to_float()


# ---------------------------------------------------------------------------
# Expected log-determinants
# ---------------------------------------------------------------------------


def _digamma_sum(n_s: int, s: int) -> float:
    return math.fsum(digamma(n_s - s + k) for k in range(1, s + 1))


def expected_logdet_for_gain(n_s: int, n_r: int, n_d: int, a: float) -> float:
    """E ln det of the pseudo-Wishart matrix for a given normalized gain a >= 0.

    a = 0 gives the Rayleigh-product value used by the fixed-alpha high-SNR
    analysis.
    """
    if a < 0:
        raise DomainError(f"Normalized gain must be >= 0, got {a}")
    q = min(n_d, n_r)
    s = min(n_s, q)
    return _digamma_sum(n_s, s) + logdet_determinant_sum(n_r, n_d, a, s)


def logdet_determinant_sum(n_r: int, n_d: int, a: float, s: int) -> float:
    """K * sum of det(W_k) over the last s columns k = q-s+1 .. q."""
    q, p = min(n_d, n_r), max(n_d, n_r)
    if not 1 <= s <= q:
        raise DomainError(f"Column count s={s} outside 1..{q}")
    if needs_extended_precision(q, a):
        with mp.workdps(_matrix_dps(q, a)):
            cores = extended.log_moment_cores(p + q - 1, a)
            norm = extended.normalization(q, p)
            total = mp.fsum(
                norm * extended.det(_logdet_rows_mp(k, q, p, a, cores))
                for k in range(q - s + 1, q + 1)
            )
            return float(total)
    log_k = normalization_log_k(q, p)
    dets = []
    for k in range(q - s + 1, q + 1):
        log_abs, signs = _logdet_matrix_log(k, q, p, a)
        dets.append(det_scaled_log(log_abs, signs).scale(log_k).to_float())
    return math.fsum(dets)


def expected_logdet(cfg: SystemConfig) -> float:
    """E ln det(Phi), Phi = H1^H L H1 when q >= n_s and L H1 H1^H otherwise."""
    return expected_logdet_for_gain(cfg.n_s, cfg.n_r, cfg.n_d, cfg.a)


def expected_logdet_equal_rank_for_gain(n_s: int, n_r: int, n_d: int, a: float) -> float:
    """Equal-rank (q = s) form: digamma sum plus q E{ln beta}.

    q E{ln beta} = sum_{i,j,l} A(i,j,l,p,q) h(p-q+l+1), where h is the
    log-moment core.
    """
    q, p = min(n_d, n_r), max(n_d, n_r)
    if min(n_s, q) != q:
        raise DomainError(f"Equal-rank form requires n_s >= q, got n_s={n_s}, q={q}")
    if not a > 0:
        raise DomainError(f"Equal-rank form requires a > 0, got {a}")
    contributions = [
        weight * log_moment_core(p - q + l + 1, a).to_float()
        for l, weight in _beta_weights(q, p).items()
    ]
    return _digamma_sum(n_s, q) + math.fsum(contributions)


def expected_logdet_equal_rank(cfg: SystemConfig) -> float:
    """Equal-rank alternative to :func:`expected_logdet` (requires q = s)."""
    return expected_logdet_equal_rank_for_gain(cfg.n_s, cfg.n_r, cfg.n_d, cfg.a)


def conditional_expected_logdet(betas: Sequence[float], n_s: int) -> float:
    """E ln det(Phi) for fixed betas."""
    betas = _check_spectrum(betas)
    q = betas.size
    s = min(n_s, q)
    log_b = np.log(betas)
    vandermonde = vandermonde_product(betas)

    ratios = []
    for k in range(q - s + 1, q + 1):
        log_y = np.empty((q, q))
        sign_y = np.ones((q, q))
        for n in range(1, q + 1):
            log_y[:, n - 1] = (n - 1) * log_b
        with np.errstate(divide="ignore"):
            log_y[:, k - 1] += np.log(np.abs(log_b))
        sign_y[:, k - 1] = np.sign(log_b)
        ratios.append((det_scaled_log(log_y, sign_y) / vandermonde).to_float())
    return _digamma_sum(n_s, s) + math.fsum(ratios)


def normalization_identity(cfg: SystemConfig) -> float:
    """K det(G); equals one for every valid configuration."""
    if needs_extended_precision(cfg.q, cfg.a):
        with mp.workdps(_matrix_dps(cfg.q, cfg.a)):
            gram = _gram_rows_mp(cfg.q, cfg.p, cfg.a)
            return float(extended.normalization(cfg.q, cfg.p) * extended.det(gram))
    log_abs, signs = gram_matrix_log(cfg.q, cfg.p, cfg.a)
    return det_scaled_log(log_abs, signs).scale(cfg.log_k).to_float()

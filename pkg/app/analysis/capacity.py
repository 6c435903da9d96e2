"""Ergodic capacity of the AF MIMO dual-hop channel and its characterizations.

Exact capacities integrate log2(1 + c lambda) against the unordered eigenvalue
density series from :mod:`app.analysis.eigenstats`. Upper and lower bounds
come from the expected determinant and the expected log-determinant, and the
high-SNR slope and offset reuse the log-determinant machinery with the
normalized gain fixed at beta / n_r.
"""

import logging
import math
import warnings
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy import integrate
from scipy.integrate import IntegrationWarning

from app.analysis.eigenstats import (
    expected_det,
    expected_det_high_snr,
    expected_det_source_limit,
    expected_logdet,
    expected_logdet_equal_rank_for_gain,
    expected_logdet_for_gain,
    logdet_determinant_sum,
    lost_digits_for_gain,
    pdf_eval,
    rayleigh_product_pdf,
    unordered_pdf,
)
from app.core.config import settings
from app.core.errors import DomainError, NumericalError, QuadratureError
from app.schemas.capacity import (
    AnalogyResult,
    CapacityPoint,
    HighSnrChar,
    Method,
    QuadratureSpec,
    Regime,
    SweepPoint,
    Transform,
)
from app.schemas.montecarlo import McEstimate, RngStream
from app.schemas.spectrum import BesselTermSeries
from app.schemas.system import SystemConfig
from app.simulation.mcoracle import mc_capacity, mc_single_hop_capacity
from app.utils.specfun import EULER_GAMMA, aux_g, aux_g_sum, digamma

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)

# A piece of the semi-infinite integral this small, relative to the requested
# accuracy, closes the integration range.
_TAIL_FRACTION = 1e-3
_MAX_PIECES = 64

_EQUAL_RANK_TOLERANCE = 1e-6

# Regime preconditions for the single-hop analogies.
_ANALOGY_MIN_ANTENNAS = 32
_ANALOGY_MIN_ALPHA = 1e4

# Largest configuration evaluated through the analytic series in analogy checks.
_ANALYTIC_MAX_Q = 8
_ANALYTIC_MAX_DIM = 24


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def _quad_piece(func, lo: float, hi: float, quad: QuadratureSpec) -> Tuple[float, float]:
    """Adaptive quadrature on [lo, hi]; IntegrationWarnings become errors unless
    the reported error still meets the requested accuracy."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, err = integrate.quad(
            func, lo, hi,
            epsabs=quad.abs_tol,
            epsrel=quad.rel_tol,
            limit=quad.max_subdivisions,
        )
    requested = max(quad.abs_tol, quad.rel_tol * abs(value))
    if caught:
        if err > requested:
            raise QuadratureError(
                f"Quadrature on [{lo:.4g}, {hi:.4g}] failed: {caught[-1].message}",
                err,
                requested,
            )
        logger.warning(
            f"Quadrature on [{lo:.4g}, {hi:.4g}] warned but met tolerance "
            f"(error {err:.2e} <= {requested:.2e})"
        )
    return value, err


def _integrate_semi_infinite(
    func, start: float, close_after: float, quad: QuadratureSpec
) -> Tuple[float, float]:
    """Integrate a non-negative, exponentially decaying function over (0, inf).

    The range is covered by [0, start] followed by doubling intervals until an
    interval beyond ``close_after`` contributes a negligible amount.
    """
    total = 0.0
    error = 0.0
    lo, hi = 0.0, start
    for _ in range(_MAX_PIECES):
        piece, piece_err = _quad_piece(func, lo, hi, quad)
        total += piece
        error += piece_err
        negligible = _TAIL_FRACTION * max(quad.abs_tol, quad.rel_tol * abs(total))
        if hi >= close_after and abs(piece) <= negligible:
            return total, error
        lo, hi = hi, 2.0 * hi
    raise QuadratureError(
        f"Integration range did not close after {_MAX_PIECES} intervals", error, quad.abs_tol
    )


def lost_digits(cfg: SystemConfig) -> float:
    """Approximate decimal digits lost when assembling the moment matrices of cfg.

    Above ``MAX_LOST_DIGITS`` the moment matrices and the density series are
    evaluated in extended precision.
    """
    return lost_digits_for_gain(cfg.q, cfg.a)


def _typical_u(n_s: int, p: int, a: float) -> float:
    """sqrt of the typical eigenvalue scale n_s * min(p, 1/a)."""
    scale = p if a == 0 else min(p, 1.0 / a)
    return math.sqrt(n_s * scale)


def _capacity_integral(
    series: BesselTermSeries, c: float, s: int, u_typ: float, quad: QuadratureSpec
) -> Tuple[float, float]:
    """(s/2) times the integral of log2(1 + c lambda) f(lambda) over (0, inf)."""
    if quad.transform == Transform.SQRT_SUBSTITUTION:

        def integrand(u: float) -> float:
            lam = u * u
            if lam <= 0:
                return 0.0
            return 2.0 * u * math.log1p(c * lam) * pdf_eval(series, lam)

        total, err = _integrate_semi_infinite(integrand, 0.05 * u_typ, 4.0 * u_typ, quad)
    else:

        def integrand(lam: float) -> float:
            if lam <= 0:
                return 0.0
            return math.log1p(c * lam) * pdf_eval(series, lam)

        total, err = _integrate_semi_infinite(
            integrand, (0.05 * u_typ) ** 2, (4.0 * u_typ) ** 2, quad
        )
    factor = s / (2.0 * _LN2)
    return factor * total, factor * err


# ---------------------------------------------------------------------------
# Exact capacity
# ---------------------------------------------------------------------------


def exact_capacity(cfg: SystemConfig, quad: Optional[QuadratureSpec] = None) -> CapacityPoint:
    """Ergodic capacity by quadrature of the unordered eigenvalue density.

    Args:
        cfg: System configuration.
        quad: Quadrature accuracy; defaults from settings.

    Returns:
        CapacityPoint with method ``exact`` and the estimated quadrature error.
    """
    quad = quad or QuadratureSpec()
    if cfg.rho == 0:
        return CapacityPoint(rho=0.0, value=0.0, method=Method.EXACT, quad_error=0.0)
    series = unordered_pdf(cfg)
    c = cfg.rho * cfg.a / cfg.n_s
    value, err = _capacity_integral(series, c, cfg.s, _typical_u(cfg.n_s, cfg.p, cfg.a), quad)
    logger.debug(f"exact_capacity{cfg.label} rho={cfg.rho:.6g}: {value:.10g} (+/- {err:.1e})")
    return CapacityPoint(rho=cfg.rho, value=max(value, 0.0), method=Method.EXACT, quad_error=err)


def fixed_alpha_limit(cfg: SystemConfig, quad: Optional[QuadratureSpec] = None) -> CapacityPoint:
    """Capacity as rho grows with the relay gain alpha held fixed.

    (s/2) times the integral of log2(1 + alpha y / (n_s n_r)) against the
    Rayleigh-product density. The returned point echoes ``cfg.rho``.
    """
    quad = quad or QuadratureSpec()
    series = rayleigh_product_pdf(cfg.n_s, cfg.q, cfg.p)
    c = cfg.alpha / (cfg.n_s * cfg.n_r)
    value, err = _capacity_integral(series, c, cfg.s, _typical_u(cfg.n_s, cfg.p, 0.0), quad)
    return CapacityPoint(
        rho=cfg.rho, value=max(value, 0.0), method=Method.FIXED_ALPHA_LIMIT, quad_error=err
    )


# ---------------------------------------------------------------------------
# High-SNR characterization
# ---------------------------------------------------------------------------


def high_snr_char(n_s: int, n_r: int, n_d: int, beta: float) -> HighSnrChar:
    """High-SNR slope and power offset when the relay gain scales as alpha = beta * rho.

    Args:
        n_s: Source antennas.
        n_r: Relay antennas.
        n_d: Destination antennas.
        beta: Ratio alpha / rho.

    Returns:
        HighSnrChar with slope s/2 and the offset in 3-dB units.
    """
    if min(n_s, n_r, n_d) < 1:
        raise DomainError(f"Antenna counts must be positive, got ({n_s},{n_r},{n_d})")
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    q = min(n_r, n_d)
    s = min(n_s, q)
    a = beta / n_r
    logdet = expected_logdet_for_gain(n_s, n_r, n_d, a)
    if s == q:
        alternative = expected_logdet_equal_rank_for_gain(n_s, n_r, n_d, a)
        if abs(alternative - logdet) > _EQUAL_RANK_TOLERANCE * max(1.0, abs(logdet)):
            raise NumericalError(
                f"Log-determinant forms disagree for ({n_s},{n_r},{n_d}), beta={beta}: "
                f"{logdet:.12g} vs {alternative:.12g}"
            )
    offset = math.log2(n_s * n_r / beta) - logdet / (s * _LN2)
    return HighSnrChar(slope=s / 2.0, offset_3db=offset, beta=beta)


def high_snr_affine(char: HighSnrChar, rho: float) -> CapacityPoint:
    """Affine high-SNR approximation slope * (log2(rho) - offset), floored at zero."""
    if not rho > 0:
        raise DomainError(f"high_snr_affine requires rho > 0, got {rho}")
    value = char.slope * (math.log2(rho) - char.offset_3db)
    return CapacityPoint(rho=rho, value=max(value, 0.0), method=Method.HIGH_SNR_AFFINE)


def _shift_3db(n_d: int, k: int, beta: float) -> float:
    x = 1.0 / beta
    return -math.fsum(1.0 / l - aux_g(l, x) for l in range(n_d, n_d + k)) / _LN2


def offset_shift(n_d: int, k: int, beta: float) -> float:
    """Change of the power offset, in dB, from adding k destination antennas (n_r = 1)."""
    if n_d < 1 or k < 1:
        raise DomainError(f"offset_shift requires n_d >= 1 and k >= 1, got n_d={n_d}, k={k}")
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return _shift_3db(n_d, k, beta) * settings.DB_PER_3DB_UNIT


def offset_shift_limit(beta: float, n_d: int = 1) -> float:
    """Limit of :func:`offset_shift` as k grows without bound, in dB."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if n_d < 1:
        raise DomainError(f"offset_shift_limit requires n_d >= 1, got {n_d}")
    x = 1.0 / beta
    total = -(EULER_GAMMA + math.log(x) + aux_g(0, x)) / _LN2
    if n_d > 1:
        total -= _shift_3db(1, n_d - 1, beta)
    return total * settings.DB_PER_3DB_UNIT


def high_snr_offset_nr1(n_s: int, n_d: int, beta: float) -> float:
    """Closed-form power offset (3-dB units) for a single relay antenna."""
    bracket = digamma(n_s) + digamma(n_d) - aux_g_sum(n_d, 1.0 / beta)
    return math.log2(n_s / beta) - bracket / _LN2


def high_snr_offset_nd1(n_s: int, n_r: int, beta: float) -> float:
    """Closed-form power offset (3-dB units) for a single destination antenna."""
    bracket = digamma(n_s) + digamma(n_r) - aux_g_sum(n_r, n_r / beta)
    return math.log2(n_s * n_r / beta) - bracket / _LN2


# ---------------------------------------------------------------------------
# Upper bounds
# ---------------------------------------------------------------------------


def _half_log2(x: float) -> float:
    return max(0.5 * math.log2(x), 0.0) if x > 0 else 0.0


def upper_bound(cfg: SystemConfig) -> CapacityPoint:
    """0.5 log2 E det(I + (rho a / n_s) H1^H L H1)."""
    value = _half_log2(expected_det(cfg))
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.UPPER)


def upper_bound_nr1(n_s: int, n_d: int, alpha: float, rho: float) -> CapacityPoint:
    """Upper bound for a single relay antenna: 0.5 log2(1 + rho n_d g_{n_d}((1+rho)/alpha)).

    The bound does not depend on n_s; it is accepted for a uniform signature.
    """
    if n_s < 1 or n_d < 1:
        raise DomainError(f"Antenna counts must be positive, got n_s={n_s}, n_d={n_d}")
    if not alpha > 0 or rho < 0:
        raise DomainError(f"Require alpha > 0 and rho >= 0, got alpha={alpha}, rho={rho}")
    x = (1.0 + rho) / alpha
    value = 0.5 * math.log2(1.0 + rho * n_d * aux_g(n_d, x))
    return CapacityPoint(rho=rho, value=value, method=Method.UPPER)


def upper_bound_nr1_limit(rho: float) -> CapacityPoint:
    """SISO AWGN limit 0.5 log2(1 + rho) of the single-relay-antenna upper bound."""
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    return CapacityPoint(rho=rho, value=0.5 * math.log2(1.0 + rho), method=Method.UPPER)


def upper_bound_highsnr(cfg: SystemConfig) -> CapacityPoint:
    """Limit of :func:`upper_bound` as rho grows with alpha fixed."""
    value = _half_log2(expected_det_high_snr(cfg))
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.UPPER)


def upper_bound_ns_large(cfg: SystemConfig) -> CapacityPoint:
    """Limit of :func:`upper_bound` as n_s grows without bound."""
    value = _half_log2(expected_det_source_limit(cfg))
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.UPPER)


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------


def _log2_one_plus_exp(z: float) -> float:
    """log2(1 + e^z) without overflow for large z."""
    return float(np.logaddexp(0.0, z)) / _LN2


def _lower_from_logdet(s: int, gain: float, logdet: float) -> float:
    """(s/2) log2(1 + gain exp(logdet / s))."""
    if gain == 0:
        return 0.0
    return 0.5 * s * _log2_one_plus_exp(math.log(gain) + logdet / s)


def lower_bound(cfg: SystemConfig) -> CapacityPoint:
    """Jensen lower bound (s/2) log2(1 + (rho a / n_s) exp(E ln det(Phi) / s))."""
    if cfg.rho == 0:
        return CapacityPoint(rho=0.0, value=0.0, method=Method.LOWER)
    value = _lower_from_logdet(cfg.s, cfg.rho * cfg.a / cfg.n_s, expected_logdet(cfg))
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.LOWER)


def _nr1_exponent(n_s: int, n_d: int, x: float) -> float:
    return digamma(n_s) + digamma(n_d) - aux_g_sum(n_d, x)


def lower_bound_nr1(n_s: int, n_d: int, alpha: float, rho: float) -> CapacityPoint:
    """Closed-form lower bound for a single relay antenna."""
    if n_s < 1 or n_d < 1:
        raise DomainError(f"Antenna counts must be positive, got n_s={n_s}, n_d={n_d}")
    if not alpha > 0 or rho < 0:
        raise DomainError(f"Require alpha > 0 and rho >= 0, got alpha={alpha}, rho={rho}")
    x = (1.0 + rho) / alpha
    gain = rho * alpha / (n_s * (1.0 + rho))
    value = _lower_from_logdet(1, gain, _nr1_exponent(n_s, n_d, x))
    return CapacityPoint(rho=rho, value=value, method=Method.LOWER)


def lower_bound_nr1_limits(
    n_s: int, n_d: int, alpha: float, rho: float
) -> Dict[Regime, CapacityPoint]:
    """Limits of :func:`lower_bound_nr1` as n_s, n_d or alpha grows without bound.

    The n_d and alpha limits coincide at 0.5 log2(1 + (rho / n_s) e^psi(n_s)).
    """
    if n_s < 1 or n_d < 1:
        raise DomainError(f"Antenna counts must be positive, got n_s={n_s}, n_d={n_d}")
    if not alpha > 0 or rho < 0:
        raise DomainError(f"Require alpha > 0 and rho >= 0, got alpha={alpha}, rho={rho}")
    x = (1.0 + rho) / alpha
    ns_gain = rho * alpha / (1.0 + rho)
    ns_value = _lower_from_logdet(1, ns_gain, digamma(n_d) - aux_g_sum(n_d, x))
    nd_value = _lower_from_logdet(1, rho / n_s, digamma(n_s))
    return {
        Regime.NS_LARGE: CapacityPoint(rho=rho, value=ns_value, method=Method.LOWER),
        Regime.ND_LARGE: CapacityPoint(rho=rho, value=nd_value, method=Method.LOWER),
        Regime.ALPHA_LARGE: CapacityPoint(rho=rho, value=nd_value, method=Method.LOWER),
    }


def lower_bound_highsnr(cfg: SystemConfig) -> CapacityPoint:
    """Limit of :func:`lower_bound` as rho grows with alpha fixed."""
    logdet = expected_logdet_for_gain(cfg.n_s, cfg.n_r, cfg.n_d, 0.0)
    value = _lower_from_logdet(cfg.s, cfg.alpha / (cfg.n_r * cfg.n_s), logdet)
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.LOWER)


def lower_bound_ns_large(cfg: SystemConfig) -> CapacityPoint:
    """Limit of :func:`lower_bound` as n_s grows without bound."""
    if cfg.rho == 0:
        return CapacityPoint(rho=0.0, value=0.0, method=Method.LOWER)
    det_sum = logdet_determinant_sum(cfg.n_r, cfg.n_d, cfg.a, cfg.q)
    value = _lower_from_logdet(cfg.q, cfg.rho * cfg.a, det_sum)
    return CapacityPoint(rho=cfg.rho, value=value, method=Method.LOWER)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _evaluate_point(
    cfg: SystemConfig, quad: QuadratureSpec, char: Optional[HighSnrChar]
) -> SweepPoint:
    exact = exact_capacity(cfg, quad)
    affine = None
    if char is not None and cfg.rho > 0:
        affine = high_snr_affine(char, cfg.rho).value
    return SweepPoint(
        rho=cfg.rho,
        alpha=cfg.alpha,
        exact=exact.value,
        upper=upper_bound(cfg).value,
        lower=lower_bound(cfg).value,
        affine=affine,
        quad_error=exact.quad_error,
    )


def capacity_sweep(
    configs: Sequence[SystemConfig],
    quad: Optional[QuadratureSpec] = None,
    char: Optional[HighSnrChar] = None,
) -> List[SweepPoint]:
    """Exact capacity and both bounds for each configuration, in input order.

    Args:
        configs: Grid of configurations.
        quad: Quadrature accuracy; defaults from settings.
        char: High-SNR characterization used for the affine column, if any.

    Returns:
        One SweepPoint per configuration.
    """
    if not configs:
        raise DomainError("capacity_sweep requires at least one configuration")
    quad = quad or QuadratureSpec()
    n_jobs = min(settings.MAX_WORKERS, len(configs))
    logger.info(f"Evaluating {len(configs)} grid points on {n_jobs} workers")
    return list(
        Parallel(n_jobs=n_jobs)(delayed(_evaluate_point)(cfg, quad, char) for cfg in configs)
    )


def sweep_rho(
    n_s: int,
    n_r: int,
    n_d: int,
    rhos: Sequence[float],
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    quad: Optional[QuadratureSpec] = None,
) -> List[SweepPoint]:
    """SNR sweep at a fixed relay gain alpha or with alpha = beta * rho.

    The affine column is filled only in the coupled (beta) case.
    """
    if (alpha is None) == (beta is None):
        raise DomainError("Exactly one of alpha and beta must be given")
    if beta is not None:
        if any(rho <= 0 for rho in rhos):
            raise DomainError("A coupled gain alpha = beta * rho requires rho > 0")
        configs = [SystemConfig.from_alpha_over_rho(n_s, n_r, n_d, beta, rho) for rho in rhos]
        char = high_snr_char(n_s, n_r, n_d, beta)
    else:
        configs = [SystemConfig(n_s=n_s, n_r=n_r, n_d=n_d, alpha=alpha, rho=rho) for rho in rhos]
        char = None
    return capacity_sweep(configs, quad, char)


def alpha_sweep(
    n_s: int,
    n_r: int,
    n_d: int,
    rho: float,
    alphas: Sequence[float],
    quad: Optional[QuadratureSpec] = None,
) -> List[SweepPoint]:
    """Relay-gain sweep at a fixed per-hop SNR."""
    configs = [SystemConfig(n_s=n_s, n_r=n_r, n_d=n_d, alpha=alpha, rho=rho) for alpha in alphas]
    return capacity_sweep(configs, quad)


# ---------------------------------------------------------------------------
# Single-hop analogies
# ---------------------------------------------------------------------------


def _check_regime(cfg: SystemConfig, regime: Regime) -> None:
    growing = {
        Regime.NR_LARGE: ("n_r", cfg.n_r),
        Regime.NS_LARGE: ("n_s", cfg.n_s),
        Regime.ND_LARGE: ("n_d", cfg.n_d),
    }
    if regime == Regime.ALPHA_LARGE:
        if cfg.alpha < _ANALOGY_MIN_ALPHA:
            raise DomainError(
                f"alpha_large requires alpha >= {_ANALOGY_MIN_ALPHA:g}, got {cfg.alpha}"
            )
        return
    name, value = growing[regime]
    if value < _ANALOGY_MIN_ANTENNAS:
        raise DomainError(f"{regime.value} requires {name} >= {_ANALOGY_MIN_ANTENNAS}, got {value}")


def _mc_point(rho: float, estimate: McEstimate) -> CapacityPoint:
    return CapacityPoint(
        rho=rho,
        value=max(estimate.mean, 0.0),
        method=Method.MONTE_CARLO,
        stderr=estimate.stderr,
    )


def _af_side(cfg: SystemConfig, n_trials: int, rng: RngStream) -> CapacityPoint:
    if cfg.q <= _ANALYTIC_MAX_Q and max(cfg.n_s, cfg.p) <= _ANALYTIC_MAX_DIM:
        return exact_capacity(cfg)
    logger.info(f"{cfg.label} exceeds the analytic range; using Monte Carlo for the AF side")
    return _mc_point(cfg.rho, mc_capacity(cfg, n_trials, rng))


def _single_hop_side(
    cfg: SystemConfig, regime: Regime, n_trials: int, rng: RngStream
) -> CapacityPoint:
    rho, alpha = cfg.rho, cfg.alpha
    if regime == Regime.NS_LARGE:
        # Common random numbers for both terms of the difference.
        high = mc_single_hop_capacity(cfg.n_r, cfg.n_d, alpha, n_trials, rng)
        low = mc_single_hop_capacity(cfg.n_r, cfg.n_d, alpha / (1.0 + rho), n_trials, rng)
        return CapacityPoint(
            rho=rho,
            value=max(0.5 * (high.mean - low.mean), 0.0),
            method=Method.MONTE_CARLO,
            stderr=0.5 * (high.stderr + low.stderr),
        )
    if regime == Regime.NR_LARGE:
        snr = rho * alpha / (1.0 + rho + alpha)
        estimate = mc_single_hop_capacity(cfg.n_s, cfg.n_d, snr, n_trials, rng)
    elif regime == Regime.ND_LARGE:
        estimate = mc_single_hop_capacity(cfg.n_s, cfg.n_r, rho, n_trials, rng)
    else:
        estimate = mc_single_hop_capacity(cfg.n_s, cfg.q, rho, n_trials, rng)
    return CapacityPoint(
        rho=rho,
        value=0.5 * estimate.mean,
        method=Method.MONTE_CARLO,
        stderr=0.5 * estimate.stderr,
    )


def analogy_check(
    cfg: SystemConfig,
    regime: Regime,
    n_trials: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> AnalogyResult:
    """AF capacity next to the single-hop capacity it approaches in ``regime``.

    Args:
        cfg: System configuration whose growing parameter is already large.
        regime: Which parameter grows.
        n_trials: Monte Carlo trials for the single-hop side (and the AF side
            when the configuration is too large for the analytic series).
        rng: Random stream; defaults to the configured seed.

    Returns:
        AnalogyResult holding both capacities.
    """
    _check_regime(cfg, regime)
    n_trials = n_trials or settings.DEFAULT_TRIALS
    rng = rng or RngStream(seed=settings.DEFAULT_SEED)
    af = _af_side(cfg, n_trials, rng.child(0))
    single_hop = _single_hop_side(cfg, regime, n_trials, rng.child(1))
    result = AnalogyResult(regime=regime, af=af, single_hop=single_hop)
    logger.info(f"{regime.value}{cfg.label}: AF {af.value:.4f}, single-hop {single_hop.value:.4f}")
    return result

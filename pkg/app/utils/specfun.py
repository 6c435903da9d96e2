"""Scalar special functions and combinatorial coefficients.

Gamma, digamma and the e^x-scaled Bessel-K base orders come from
``scipy.special``; higher integer Bessel orders are reached with the upward
ratio recurrence in log space, and e^x E_n(x) uses a continued fraction for
x > 1. Gamma-bearing sums are accumulated as :class:`LogScaledReal` values.
"""

import logging
import math
from fractions import Fraction
from typing import Union

import numpy as np
from scipy import special
from scipy.special import logsumexp

from app.core.errors import DomainError, NumericalError
from app.schemas.numeric import LogScaledReal

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10_000

ArrayLike = Union[float, np.ndarray]


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return float(special.gammaln(x))


def digamma(x: float) -> float:
    """Digamma function psi(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(special.digamma(x))


def log_bessel_k_scaled(nu: int, x: ArrayLike) -> np.ndarray:
    """ln(e^x K_nu(x)) for integer nu, vectorized over x > 0.

    K_0 and K_1 come from ``scipy.special.kve``; higher orders follow the
    ratio recurrence r_{n+1} = 1/r_n + 2n/x with r_n = K_n / K_{n-1}, which is
    stable upward and never overflows.
    """
    nu = abs(int(nu))
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("bessel_k requires x > 0")
    k0 = special.kve(0, x)
    log_k = np.log(k0)
    if nu == 0:
        return log_k
    ratio = special.kve(1, x) / k0
    log_k = log_k + np.log(ratio)
    for n in range(1, nu):
        ratio = 1.0 / ratio + 2.0 * n / x
        log_k = log_k + np.log(ratio)
    return log_k


def bessel_k_scaled(nu: int, x: float) -> float:
    """e^x K_nu(x) for integer nu >= 0 and x > 0."""
    if not x > 0:
        raise DomainError(f"bessel_k_scaled requires x > 0, got {x}")
    if nu < 0:
        raise DomainError(f"bessel_k_scaled requires nu >= 0, got {nu}")
    return float(np.exp(log_bessel_k_scaled(nu, x)))


def expint_scaled(order: int, x: float) -> float:
    """e^x E_order(x) for integer order >= 1 and x > 0.

    Uses the modified Lentz continued fraction for x > 1 and the series
    representation in ``scipy.special.expn`` otherwise.
    """
    if order < 1:
        raise DomainError(f"expint_scaled requires order >= 1, got {order}")
    if not x > 0:
        raise DomainError(f"expint_scaled requires x > 0, got {x}")
    if x <= 1.0:
        return float(math.exp(x) * special.expn(order, x))

    b = x + order
    c = 1.0 / _CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER + 1):
        an = -i * (order - 1 + i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise NumericalError(f"Continued fraction for E_{order}({x}) did not converge")


def aux_g(l: int, x: float) -> float:
    """g_l(x) = e^x E_{l+1}(x)."""
    return expint_scaled(l + 1, x)


def aux_g_sum(n_terms: int, x: float) -> float:
    """Compensated sum of g_l(x) for l = 0 .. n_terms - 1."""
    return math.fsum(aux_g(l, x) for l in range(n_terms))


def coeff_A(i: int, j: int, l: int, kappa1: int, kappa2: int) -> float:
    """Coefficient of the unordered Wishart eigenvalue expansion.

    (-1)^l C(2i-2j, i-j) C(2j+2k1-2k2, 2j-l) (2j)! / (2^(2i-l) l! (k1-k2+j)! j!),
    evaluated in exact rational arithmetic.
    """
    if i < 0 or not 0 <= j <= i or not 0 <= l <= 2 * j:
        raise DomainError(f"coeff_A index out of range: i={i}, j={j}, l={l}")
    if kappa1 < kappa2:
        raise DomainError(f"coeff_A requires kappa1 >= kappa2, got {kappa1} < {kappa2}")
    d = kappa1 - kappa2
    value = Fraction(
        math.comb(2 * i - 2 * j, i - j)
        * math.comb(2 * j + 2 * d, 2 * j - l)
        * math.factorial(2 * j),
        2 ** (2 * i - l) * math.factorial(l) * math.factorial(d + j) * math.factorial(j),
    )
    return float(-value if l % 2 else value)


def moment_integral(d: int, e: int, a: float) -> LogScaledReal:
    """Integral of t^d (1 + a t)^e e^{-t} over (0, inf).

    For e >= 0 this is the finite binomial sum sum_i C(e, i) a^i Gamma(d+i+1).
    e = -1 is also accepted and equals Gamma(d+1) g_d(1/a) / a.
    """
    if d < 0:
        raise DomainError(f"moment_integral requires d >= 0, got {d}")
    if not a > 0:
        raise DomainError(f"moment_integral requires a > 0, got {a}")
    if e == -1:
        return LogScaledReal.from_log(
            ln_gamma(d + 1) + math.log(aux_g(d, 1.0 / a)) - math.log(a)
        )
    if e < 0:
        raise DomainError(f"moment_integral requires e >= -1, got {e}")
    idx = np.arange(e + 1)
    log_terms = (
        special.gammaln(e + 1)
        - special.gammaln(idx + 1)
        - special.gammaln(e - idx + 1)
        + idx * math.log(a)
        + special.gammaln(d + idx + 1)
    )
    return LogScaledReal.from_log(float(logsumexp(log_terms)))


def log_moment_core(n: int, a: float) -> LogScaledReal:
    """Integral of t^(n-1) e^{-t} ln(t / (1 + a t)) over (0, inf).

    Equals Gamma(n) (psi(n) - sum_{l<n} g_l(1/a)).
    """
    if n < 1:
        raise DomainError(f"log_moment_core requires n >= 1, got {n}")
    if not a > 0:
        raise DomainError(f"log_moment_core requires a > 0, got {a}")
    bracket = digamma(n) - aux_g_sum(n, 1.0 / a)
    return LogScaledReal.from_float(bracket).scale(ln_gamma(n))


def log_moment_integral(d: int, a: float) -> float:
    """Integral of t^d e^{-t} ln(t / (1 + a t)) over (0, inf)."""
    return log_moment_core(d + 1, a).to_float()


def varsigma_scaled(t: int, p: int, q: int, a: float) -> LogScaledReal:
    """Log-moment entry of the expected log-determinant matrices.

    Integral over (0, 1/a) of u^(p-q+t-2) (1-au)^-(p+q) exp(-u/(1-au)) ln u,
    expanded as sum_j C(2q-t, j) a^j h(p-q+t-1+j) with h from
    :func:`log_moment_core`.
    """
    order = 2 * q - t
    if order < 0:
        raise DomainError(f"varsigma requires 2q - t >= 0, got t={t}, q={q}")
    if p < q or q < 1:
        raise DomainError(f"varsigma requires p >= q >= 1, got p={p}, q={q}")
    base = p - q + t - 1
    if base < 1:
        raise DomainError(f"varsigma Gamma argument {base} must be >= 1")
    log_a = math.log(a)
    terms = []
    for j in range(order + 1):
        core = log_moment_core(base + j, a)
        terms.append(core.scale(math.log(math.comb(order, j)) + j * log_a))
    return LogScaledReal.sum_of(terms)


def varsigma(t: int, p: int, q: int, a: float) -> float:
    """Plain-float form of :func:`varsigma_scaled`."""
    return varsigma_scaled(t, p, q, a).to_float()

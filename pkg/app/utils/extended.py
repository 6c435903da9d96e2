"""Extended-precision kernels for moment matrices and Bessel-K series.

As the normalized gain a grows, the moment matrices of the beta spectrum
approach rank one and their determinants lose about q(q-1) log10(a) decimal
digits to cancellation. The helpers below rebuild the same quantities with
mpmath. Callers set the working precision with ``mp.workdps`` and convert
results back to floats once the cancellation has happened.
"""

import logging
from typing import List, Sequence

from mpmath import mp

from app.core.errors import DomainError
from app.schemas.numeric import LogScaledReal

logger = logging.getLogger(__name__)


def aux_g(l: int, x):
    """g_l(x) = e^x E_{l+1}(x)."""
    return mp.exp(x) * mp.expint(l + 1, x)


def moment(d: int, e: int, a):
    """Integral of t^d (1 + a t)^e e^{-t} over (0, inf), for e >= -1 and a > 0."""
    if d < 0:
        raise DomainError(f"moment requires d >= 0, got {d}")
    a = mp.mpf(a)
    if e == -1:
        return mp.factorial(d) * aux_g(d, 1 / a) / a
    if e < 0:
        raise DomainError(f"moment requires e >= -1, got {e}")
    return mp.fsum(mp.binomial(e, i) * a**i * mp.factorial(d + i) for i in range(e + 1))


def log_moment_cores(n_max: int, a) -> List:
    """Gamma(n) (psi(n) - sum_{l<n} g_l(1/a)) for n = 1 .. n_max, at index n."""
    x = 1 / mp.mpf(a)
    cores = [mp.mpf(0)]
    running = mp.mpf(0)
    for n in range(1, n_max + 1):
        running += aux_g(n - 1, x)
        cores.append(mp.gamma(n) * (mp.digamma(n) - running))
    return cores


def varsigma(t: int, p: int, q: int, a, cores: Sequence):
    """Log-moment matrix entry sum_j C(2q-t, j) a^j h(p-q+t-1+j)."""
    order = 2 * q - t
    base = p - q + t - 1
    if order < 0 or base < 1:
        raise DomainError(f"varsigma index out of range: t={t}, p={p}, q={q}")
    a = mp.mpf(a)
    return mp.fsum(mp.binomial(order, j) * a**j * cores[base + j] for j in range(order + 1))


def normalization(q: int, p: int):
    """1 / prod_{i=1}^q Gamma(q-i+1) Gamma(p-i+1)."""
    return 1 / mp.fprod(mp.factorial(q - i) * mp.factorial(p - i) for i in range(1, q + 1))


def det(rows: Sequence[Sequence]):
    """Determinant of a square matrix given as nested lists; 1 for an empty matrix."""
    if len(rows) == 0:
        return mp.mpf(1)
    return mp.det(mp.matrix([list(row) for row in rows]))


def cofactor(rows: Sequence[Sequence], l: int, k: int):
    """(l, k) cofactor (1-based) through the explicit minor."""
    minor = [
        [value for col, value in enumerate(row) if col != k - 1]
        for idx, row in enumerate(rows)
        if idx != l - 1
    ]
    value = det(minor)
    return -value if (l + k) % 2 else value


def bessel_k_ladder(max_order: int, x) -> List:
    """K_0(x) .. K_max_order(x) by the upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n."""
    ladder = [mp.besselk(0, x), mp.besselk(1, x)]
    for n in range(1, max_order):
        ladder.append(ladder[n - 1] + 2 * n / x * ladder[n])
    return ladder[: max_order + 1]


def log10_abs(value) -> float:
    """log10 |value| as a float; -inf for zero."""
    if value == 0:
        return float("-inf")
    return float(mp.log10(abs(value)))


def to_log_scaled(value) -> LogScaledReal:
    """Sign and natural log-magnitude of an mpmath number."""
    if value == 0:
        return LogScaledReal.zero()
    return LogScaledReal.from_log(float(mp.log(abs(value))), 1 if value > 0 else -1)

"""Tail probabilities of N(0, sigma^2) and Binomial(n, 1/2), exact and lower-bounded.

Bounds implemented:

* ``gaussian_tail_lower``: ``P[X >= x] >= exp(-x^2 / 2 sigma^2) / (sqrt(2 pi) x / sigma + 2)``
* ``binomial_tail_lower(..., "mckay")``: ``sqrt(n) C(n-1, k-1) 2^-n M(x)``
* ``binomial_tail_lower(..., "stirling")``: ``exp(-n D(k/n || 1/2)) / (e^(1/6) sqrt(2 pi)) M(x)``
* ``binomial_tail_corollary``: ``e^(-1/6) exp(-2 psi(t/n) t^2 / n) / (sqrt(2 pi) 2t / sqrt(n) + 2)``

where ``M`` is the exact Mill's ratio and ``x = (2k - n) / sqrt(n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .analytic import LN2, SQRT_2PI, kl_bernoulli, mills_ratio, psi, std_normal_survival
from .errors import DomainError

# Slack allowed when asserting a bound is dominated by the exact tail.
DOMINANCE_SLACK = 1e-12


@dataclass(frozen=True)
class GaussianTailQuery:
    x: float
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x >= 0):
            raise DomainError(f"threshold x must be finite and >= 0, got {self.x}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class BinomialTailQuery:
    """Either an integer threshold ``k`` or a real offset ``t`` for Binomial(n, 1/2)."""

    n: int
    k: int | None = None
    t: float | None = None

    def __post_init__(self):
        _check_n(self.n)
        if (self.k is None) == (self.t is None):
            raise DomainError("give exactly one of k or t")
        if self.k is not None:
            _check_k(self.n, self.k)
        else:
            _check_t(self.n, self.t)

    @property
    def threshold(self) -> int:
        """Smallest integer count the query's event requires."""
        if self.k is not None:
            return int(self.k)
        return math.ceil(self.n / 2 + self.t - 1)


@dataclass
class TailResult:
    exact: float
    bounds: dict[str, float] = field(default_factory=dict)

    def violations(self, slack: float = DOMINANCE_SLACK) -> list[str]:
        return [name for name, v in self.bounds.items() if v > self.exact + slack]


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")


def _check_k(n, k):
    if int(k) != k:
        raise DomainError(f"k must be an integer, got {k!r}")
    # Real comparison, as in the hypothesis n/2 <= k <= n.
    if not (n / 2 <= k <= n):
        raise DomainError(f"need n/2 <= k <= n, got n={n}, k={k}")


def _check_t(n, t):
    if not (math.isfinite(t) and 1 <= t <= n / 2 + 1):
        raise DomainError(f"need 1 <= t <= n/2 + 1, got n={n}, t={t}")


def gaussian_tail_lower(q: GaussianTailQuery | float, sigma: float | None = None) -> float:
    if not isinstance(q, GaussianTailQuery):
        q = GaussianTailQuery(float(q), 1.0 if sigma is None else float(sigma))
    z = q.x / q.sigma
    return math.exp(-0.5 * z * z) / (SQRT_2PI * z + 2.0)


def gaussian_tail_exact(q: GaussianTailQuery | float, sigma: float | None = None) -> float:
    if not isinstance(q, GaussianTailQuery):
        q = GaussianTailQuery(float(q), 1.0 if sigma is None else float(sigma))
    return std_normal_survival(q.x / q.sigma)


def binomial_log_pmf(n: int) -> np.ndarray:
    """``log P[B_n = j]`` for j = 0..n, B_n ~ Binomial(n, 1/2)."""
    j = np.arange(n + 1, dtype=float)
    return gammaln(n + 1.0) - gammaln(j + 1.0) - gammaln(n - j + 1.0) - n * LN2


def binomial_tail_exact(n: int, k: int) -> float:
    """``P[B_n >= k]`` for B_n ~ Binomial(n, 1/2).

    Terms are formed in log space through log-gamma and summed with
    ``math.fsum``. ``k <= 0`` gives 1 and ``k > n`` gives 0.
    """
    _check_n(n)
    n = int(n)
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    k = math.ceil(k)
    # Sum the shorter side; the complement is then 1 - (lower tail).
    if k > n / 2:
        return math.fsum(np.exp(binomial_log_pmf(n)[k:]).tolist())
    return 1.0 - math.fsum(np.exp(binomial_log_pmf(n)[:k]).tolist())


def binomial_tail_lower(n: int, k: int, mode: str = "stirling") -> float:
    _check_n(n)
    _check_k(n, k)
    n, k = int(n), int(k)
    x = (2 * k - n) / math.sqrt(n)
    mills = mills_ratio(x)
    if mode == "mckay":
        log_coef = (
            math.lgamma(n) - math.lgamma(k) - math.lgamma(n - k + 1) - n * LN2
        )
        return math.sqrt(n) * math.exp(log_coef) * mills
    if mode == "stirling":
        return math.exp(-n * kl_bernoulli(k / n, 0.5)) / (math.exp(1 / 6) * SQRT_2PI) * mills
    raise DomainError(f"unknown binomial bound mode {mode!r}")


def binomial_tail_corollary(n: int, t: float) -> float:
    """Lower bound on ``P[B_n >= n/2 + t - 1]`` through psi.

    For ``n/2 < t <= n/2 + 1`` the ratio ``t/n`` leaves psi's domain; there
    psi is taken at its maximum ``psi(1/2) = 2 ln 2``, which keeps the bound
    below ``2^-n``, the smallest tail it can be compared with.
    """
    _check_n(n)
    _check_t(n, t)
    return (
        math.exp(-1.0 / 6.0)
        * math.exp(-2.0 * psi(min(t / n, 0.5)) * t * t / n)
        / (SQRT_2PI * 2.0 * t / math.sqrt(n) + 2.0)
    )


def corollary_exact(n: int, t: float) -> float:
    """Exact probability the corollary bound targets, at ``ceil(n/2 + t - 1)``."""
    return binomial_tail_exact(n, BinomialTailQuery(n, t=t).threshold)


def evaluate_binomial(q: BinomialTailQuery) -> TailResult:
    """Exact tail and every bound that applies to the query."""
    if q.k is not None:
        return TailResult(
            binomial_tail_exact(q.n, q.k),
            {
                "mckay": binomial_tail_lower(q.n, q.k, "mckay"),
                "stirling": binomial_tail_lower(q.n, q.k, "stirling"),
            },
        )
    return TailResult(corollary_exact(q.n, q.t), {"corollary": binomial_tail_corollary(q.n, q.t)})


def evaluate_gaussian(q: GaussianTailQuery) -> TailResult:
    return TailResult(gaussian_tail_exact(q), {"corollary1": gaussian_tail_lower(q)})

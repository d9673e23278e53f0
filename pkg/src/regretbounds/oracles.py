"""Reference values for E[max of d i.i.d. variables].

The exact oracles raise a single-variable CDF to the power d in log space,
``F^d = exp(d log F)``, with ``log F = log1p(-S)`` taken from the survival
function ``S`` whenever ``F`` is close to one. That keeps the upper tail
accurate for d as large as 1e12 and beyond.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .extremes import EnsembleSpec
from .tails import binomial_log_pmf

GAUSS_CUTOFF = 12.0
QUAD_EPSABS = 1e-11
# Values generated per chunk in Monte Carlo; chunk j is seeded from (seed, j).
MC_CHUNK_VALUES = 1 << 21
MC_MAX_D = 10**6


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    replicates: int
    seed: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> "MonteCarloEstimate":
        samples = np.asarray(samples, dtype=float)
        if samples.size < 2:
            raise DomainError("need at least 2 replicates")
        se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
        return cls(float(np.mean(samples)), se, int(samples.size), int(seed))

    def z_score(self, target: float) -> float:
        gap = abs(self.mean - target)
        if self.std_error == 0:
            return 0.0 if gap == 0 else math.inf
        return gap / self.std_error


@dataclass(frozen=True)
class WalkMaxDistribution:
    """CDF of one length-n walk on its support ``-n, -n+2, ..., n``, in log space."""

    n: int
    support: np.ndarray
    log_cdf: np.ndarray

    def max_cdf(self, d: float) -> np.ndarray:
        """``P[max of d walks <= z]`` on the support."""
        return np.exp(d * self.log_cdf)

    def max_sf(self, d: float) -> np.ndarray:
        """``P[max of d walks > z]``, without cancellation when F^d is near 1."""
        return -np.expm1(d * self.log_cdf)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abserr: float
    truncation: float


def _check_d(d):
    if not (isinstance(d, (int, float, np.integer, np.floating)) and math.isfinite(d) and d >= 1):
        raise DomainError(f"d must be a finite real >= 1, got {d!r}")
    return float(d)


@functools.lru_cache(maxsize=256)
def walk_distribution(n: int) -> WalkMaxDistribution:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    log_pmf = binomial_log_pmf(n)
    log_lower = np.logaddexp.accumulate(log_pmf)  # log P[B <= j]
    upper = np.zeros(n + 1)  # P[B > j]
    upper[:-1] = np.exp(np.logaddexp.accumulate(log_pmf[::-1])[::-1][1:])
    # log F from whichever side is small, so neither side cancels.
    small_sf = upper < 0.5
    log_cdf = np.where(small_sf, 0.0, log_lower)
    log_cdf[small_sf] = np.log1p(-upper[small_sf])
    log_cdf[-1] = 0.0
    support = 2 * np.arange(n + 1) - n
    for arr in (support, log_cdf):
        arr.setflags(write=False)
    return WalkMaxDistribution(n, support, log_cdf)


def walk_max_exact(n: int, d: float) -> float:
    """Exact ``E[max_i Z_i]`` for d i.i.d. symmetric walks of length n.

    The max lives on ``-n, -n+2, ..., n``, so
    ``E[max] = -n + 2 * sum_{z < n} P[max > z]``; this is the same sum as
    ``sum_z z (F(z)^d - F(z-2)^d)`` rearranged to avoid cancellation.
    """
    d = _check_d(d)
    dist = walk_distribution(n)
    tail = dist.max_sf(d)[:-1]
    return float(-dist.n + 2.0 * math.fsum(tail.tolist()))


def _log_cdf_normal(x: float) -> float:
    if x > 0:
        return math.log1p(-0.5 * math.erfc(x / math.sqrt(2.0)))
    return float(special.log_ndtr(x))


def _max_median(d: float) -> float:
    # Phi(m)^d = 1/2  <=>  1 - Phi(m) = -expm1(-ln 2 / d).
    return float(-special.ndtri(-math.expm1(-math.log(2.0) / d)))


def gaussian_max_quadrature(d: float, sigma: float = 1.0) -> QuadratureResult:
    """E[max of d i.i.d. N(0, sigma^2)] by adaptive quadrature, with an error budget.

    ``E[max] = int_0^inf (1 - Phi^d) - int_-inf^0 Phi^d``, truncated at
    +-12 (extended upward when the max's median sits too close to 12).
    ``truncation`` bounds the discarded tails analytically:
    ``d phi(b) / b^2`` above ``b`` and ``phi(a) / a^2`` below ``-a``.
    """
    d = _check_d(d)
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    if d == 1:
        return QuadratureResult(0.0, 0.0, 0.0)

    def upper_integrand(x):
        return -math.expm1(d * _log_cdf_normal(x))

    def lower_integrand(x):
        return math.exp(d * _log_cdf_normal(x))

    median = _max_median(d)
    hi = GAUSS_CUTOFF
    while d * math.exp(-0.5 * hi * hi) / (math.sqrt(2 * math.pi) * hi * hi) > 1e-14:
        hi += 2.0
    lo = GAUSS_CUTOFF
    trunc = d * math.exp(-0.5 * hi * hi) / (math.sqrt(2 * math.pi) * hi * hi)
    trunc += math.exp(-0.5 * lo * lo) / (math.sqrt(2 * math.pi) * lo * lo)

    pos_err = neg_err = 0.0
    if median > 0:
        # 1 - Phi^d is within float eps of 1 well below the median for big d.
        knee = max(0.0, median - 3.0)
        flat, e1 = integrate.quad(upper_integrand, 0.0, knee, epsabs=QUAD_EPSABS, limit=200)
        body, e2 = integrate.quad(
            upper_integrand, knee, hi, points=[median], epsabs=QUAD_EPSABS, limit=200
        )
        pos, pos_err = flat + body, e1 + e2
    else:
        pos, pos_err = integrate.quad(upper_integrand, 0.0, hi, epsabs=QUAD_EPSABS, limit=200)
    neg_pts = [median] if median < 0 else None
    neg, neg_err = integrate.quad(
        lower_integrand, -lo, 0.0, points=neg_pts, epsabs=QUAD_EPSABS, limit=200
    )
    return QuadratureResult(sigma * (pos - neg), sigma * (pos_err + neg_err), sigma * trunc)


def gaussian_max_exact(d: float, sigma: float = 1.0) -> float:
    return gaussian_max_quadrature(d, sigma).value


def _mc_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(chunk)])


def max_monte_carlo(spec: EnsembleSpec, replicates: int, seed: int) -> MonteCarloEstimate:
    """Seeded Monte Carlo estimate of E[max] for an integer-sized ensemble.

    Replicates are drawn in fixed-size chunks; chunk j uses a generator
    seeded from ``(seed, j)``, so the estimate depends only on
    ``(spec, replicates, seed)``.
    """
    if int(replicates) != replicates or replicates < 2:
        raise DomainError(f"replicates must be an integer >= 2, got {replicates}")
    if not (0 <= int(seed) < 2**64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if spec.d != int(spec.d) or spec.d > MC_MAX_D:
        raise DomainError(
            f"Monte Carlo needs integer d <= {MC_MAX_D}, got {spec.d}; "
            "use walk_max_exact / gaussian_max_exact instead"
        )
    d = int(spec.d)
    replicates = int(replicates)
    per_chunk = max(1, MC_CHUNK_VALUES // d)
    out = np.empty(replicates)
    for j, start in enumerate(range(0, replicates, per_chunk)):
        m = min(per_chunk, replicates - start)
        rng = _mc_rng(seed, j)
        if spec.family == "gaussian":
            out[start:start + m] = spec.sigma * rng.standard_normal((m, d)).max(axis=1)
        else:
            # Sum of n fair +-1 steps is 2 * Binomial(n, 1/2) - n.
            out[start:start + m] = (2 * rng.binomial(spec.n, 0.5, size=(m, d)) - spec.n).max(axis=1)
    return MonteCarloEstimate.from_samples(out, seed)

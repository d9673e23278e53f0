"""Special functions and elementary analytic ingredients.

Standard normal density and upper tail, Mill's ratio with Boyd's lower
bounds, Robbins' two-sided Stirling bracket, the Bernoulli KL divergence,
the ratio ``psi`` between that divergence and its quadratic approximation,
and moment generating function margins for sub-Gaussian variables.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import special

from .errors import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
LN2 = math.log(2.0)
PSI_MAX = 2.0 * LN2

# Below this |x| psi switches to its Taylor series; both branches agree to ~1e-16 here.
PSI_SERIES_CUTOFF = 1e-3


def _finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class RealGrid:
    """Strictly increasing grid of finite reals."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise DomainError("grid must be non-empty")
        if not all(math.isfinite(p) for p in pts):
            raise DomainError("grid points must be finite")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, start: float, stop: float, num: int) -> "RealGrid":
        if num < 2:
            return cls((float(start),))
        step = (stop - start) / (num - 1)
        return cls(tuple(start + i * step for i in range(num - 1)) + (float(stop),))

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


class MillsMode(str, enum.Enum):
    EXACT = "exact"
    BOYD = "boyd"
    BOYD_SIMPLIFIED = "boyd_simplified"


@dataclass(frozen=True)
class FactorialBracket:
    n: int
    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def std_normal_pdf(x: float) -> float:
    x = _finite(x)
    return math.exp(-0.5 * x * x) / SQRT_2PI


def std_normal_survival(x: float) -> float:
    """Return ``1 - Phi(x)`` via the complementary error function.

    Never formed as one minus a CDF, so the far upper tail keeps full
    relative precision down to the smallest normal double (x ~ 37.5).
    """
    x = _finite(x)
    return 0.5 * float(special.erfc(x / math.sqrt(2.0)))


def mills_ratio(x: float, mode: MillsMode | str = MillsMode.EXACT) -> float:
    """Mill's ratio ``(1 - Phi(x)) / phi(x)`` of N(0,1), or one of Boyd's lower bounds.

    ``boyd`` is ``pi / ((pi - 1) x + sqrt(x^2 + 2 pi))`` and
    ``boyd_simplified`` is ``pi / (pi x + sqrt(2 pi))``. For every
    ``x >= 0``: boyd_simplified <= boyd <= exact.
    """
    x = _finite(x)
    if x < 0:
        raise DomainError(f"Mill's ratio bounds hold for x >= 0, got {x}")
    mode = MillsMode(mode)
    if mode is MillsMode.EXACT:
        # erfcx(u) = exp(u^2) erfc(u); avoids 0/0 once phi(x) underflows.
        return math.sqrt(math.pi / 2.0) * float(special.erfcx(x / math.sqrt(2.0)))
    if mode is MillsMode.BOYD:
        return math.pi / ((math.pi - 1.0) * x + math.sqrt(x * x + 2.0 * math.pi))
    return math.pi / (math.pi * x + SQRT_2PI)


def factorial_bounds(n: int) -> FactorialBracket:
    """Robbins' bracket ``sqrt(2 pi n)(n/e)^n < n! < e^(1/12) sqrt(2 pi n)(n/e)^n``."""
    if int(n) != n or n < 1:
        raise DomainError(f"Robbins' bracket needs an integer n >= 1, got {n!r}")
    n = int(n)
    log_lower = 0.5 * math.log(2.0 * math.pi * n) + n * (math.log(n) - 1.0)
    return FactorialBracket(n, math.exp(log_lower), math.exp(log_lower + 1.0 / 12.0))


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence ``D(p || q)`` between Bernoulli(p) and Bernoulli(q).

    Uses ``0 ln 0 = 0``. Returns ``inf`` when q is 0 or 1 and differs from p.
    """
    p = _finite(p, "p")
    q = _finite(q, "q")
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise DomainError(f"p and q must lie in [0, 1], got p={p}, q={q}")
    if p == q:
        return 0.0
    if q in (0.0, 1.0):
        return math.inf
    out = 0.0
    if p > 0.0:
        out += p * math.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(out, 0.0)


def psi(x: float) -> float:
    """``D(1/2 + x || 1/2) / (2 x^2)``, continuously extended by ``psi(0) = 1``.

    Even, minimal at 0, maximal at the endpoints where it equals ``2 ln 2``.
    """
    x = _finite(x)
    ax = abs(x)
    if ax > 0.5:
        raise DomainError(f"psi is defined on [-1/2, 1/2], got {x}")
    if ax < PSI_SERIES_CUTOFF:
        x2 = ax * ax
        return 1.0 + x2 * (2.0 / 3.0 + x2 * (16.0 / 15.0))
    if ax == 0.5:
        return PSI_MAX
    # With u = 2x: 2 D = (1+u)ln(1+u) + (1-u)ln(1-u) = 2u atanh(u) + ln(1 - u^2).
    u = 2.0 * ax
    return (2.0 * u * math.atanh(u) + math.log1p(-u * u)) / (u * u)


def sub_gaussian_mgf_margin(kind: str, s: float, sigma: float = 1.0) -> float:
    """``exp(sigma^2 s^2 / 2) - E[exp(s X)]``; nonnegative for a sigma^2-sub-Gaussian X.

    ``kind`` is ``"rademacher"`` (sigma fixed to 1) or ``"gaussian"``
    (X ~ N(0, sigma^2), margin identically zero).
    """
    s = _finite(s, "s")
    if kind == "rademacher":
        # e^{s^2/2} - cosh(s) = sum_k s^{2k} (1/(k! 2^k) - 1/(2k)!), all terms >= 0.
        a = 0.5 * s * s
        if abs(s) < 1.0:
            total, k, term_a, term_b = 0.0, 1, 1.0, 1.0
            while True:
                term_a *= a / k
                term_b *= s * s / ((2 * k - 1) * (2 * k))
                diff = term_a - term_b
                total += diff
                if k > 1 and abs(diff) <= 1e-18 * total or k > 60:
                    break
                k += 1
            return total
        return math.exp(a) - math.cosh(s)
    if kind == "gaussian":
        sigma = _finite(sigma, "sigma")
        if sigma <= 0:
            raise DomainError(f"sigma must be positive, got {sigma}")
        # Completing the square makes E[e^{sX}] equal e^{sigma^2 s^2 / 2} exactly.
        return 0.0
    raise DomainError(f"unknown sub-Gaussian kind {kind!r}")

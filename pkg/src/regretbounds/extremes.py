"""Closed-form bounds on the expected maximum of d i.i.d. variables.

Two ensembles: N(0, sigma^2) variables and symmetric +-1 random walks of
length n. The ensemble size ``d`` is a real number throughout: only
``ln d`` and ``ln ln d`` enter, so the bounds can be probed at sizes like
``e^30`` where they first become positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .analytic import psi
from .errors import DomainError, HypothesisError

Family = Literal["gaussian", "walk"]
Form = Literal["primary", "simplified"]

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)

# Constants as printed in the two lower-bound theorems.
GAUSS_DENOM = 6.35
GAUSS_SIMPLE_SLOPE, GAUSS_SIMPLE_OFFSET = 0.13, 0.7
WALK_DENOM = 3.1
WALK_PSI_SCALE = 1.6
WALK_SIMPLE_SLOPE, WALK_SIMPLE_OFFSET = 0.09, 2.0
WALK_MIN_N = 7


@dataclass(frozen=True)
class EnsembleSpec:
    family: Family
    d: float
    sigma: float | None = None
    n: int | None = None

    def __post_init__(self):
        if self.family not in ("gaussian", "walk"):
            raise DomainError(f"unknown family {self.family!r}")
        if not (math.isfinite(self.d) and self.d >= 1):
            raise DomainError(f"d must be >= 1, got {self.d}")
        if self.family == "gaussian":
            if self.n is not None:
                raise DomainError("gaussian ensemble takes sigma, not n")
            if self.sigma is None or not self.sigma > 0:
                raise DomainError(f"gaussian ensemble needs sigma > 0, got {self.sigma}")
        else:
            if self.sigma is not None:
                raise DomainError("walk ensemble takes n, not sigma")
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise DomainError(f"walk ensemble needs integer n >= 1, got {self.n}")

    @classmethod
    def gaussian(cls, d: float, sigma: float = 1.0) -> "EnsembleSpec":
        return cls("gaussian", float(d), sigma=float(sigma))

    @classmethod
    def walk(cls, n: int, d: float) -> "EnsembleSpec":
        return cls("walk", float(d), n=int(n))

    @property
    def variance(self) -> float:
        return self.sigma**2 if self.family == "gaussian" else float(self.n)


@dataclass(frozen=True)
class ThresholdConstants:
    f: float
    c_gaussian: float
    c_walk: float | None = None
    psi_arg: float | None = None


@dataclass
class BoundBracket:
    spec: EnsembleSpec
    exact: float
    upper: float
    lower_primary: float | None = None
    lower_simplified: float | None = None
    out_of_scope: str | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        lowers = [v for v in (self.lower_primary, self.lower_simplified) if v is not None]
        return bool(lowers) and all(v < 0 for v in lowers)

    @property
    def ok(self) -> bool:
        return not self.violations


def subgaussian_max_upper(d: float, variance: float) -> float:
    """``sigma sqrt(2 ln d)`` for d variables that are each sigma^2-sub-Gaussian."""
    if not (math.isfinite(d) and d >= 1):
        raise DomainError(f"d must be >= 1, got {d}")
    if not (math.isfinite(variance) and variance >= 0):
        raise DomainError(f"variance must be >= 0, got {variance}")
    return math.sqrt(variance) * math.sqrt(2.0 * math.log(d))


def f_threshold(d: float) -> float:
    """``sqrt(2 - 2 ln ln d / ln d)``; decreasing on (1, e^e], increasing after."""
    if not d > 1:
        raise DomainError(f"f(d) needs d > 1, got {d}")
    ln_d = math.log(d)
    return math.sqrt(2.0 - 2.0 * math.log(ln_d) / ln_d)


def walk_psi_arg(n: int, d: float) -> float:
    return WALK_PSI_SCALE * math.sqrt(math.log(d)) / (2.0 * math.sqrt(n))


def threshold_constants(spec: EnsembleSpec) -> ThresholdConstants:
    if spec.d < 2:
        raise DomainError(f"threshold constants need d >= 2, got {spec.d}")
    f = f_threshold(spec.d)
    if spec.family == "gaussian":
        return ThresholdConstants(f=f, c_gaussian=f)
    arg = walk_psi_arg(spec.n, spec.d)
    return ThresholdConstants(f=f, c_gaussian=f, c_walk=f / math.sqrt(psi(arg)), psi_arg=arg)


def gaussian_max_lower(d: float, sigma: float = 1.0, form: Form = "primary") -> float:
    if not (math.isfinite(d) and d >= 2):
        raise HypothesisError(f"Gaussian lower bound needs d >= 2, got {d}", "d>=2")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    ln_d = math.log(d)
    if form == "simplified":
        return sigma * (GAUSS_SIMPLE_SLOPE * math.sqrt(ln_d) - GAUSS_SIMPLE_OFFSET)
    if form != "primary":
        raise DomainError(f"unknown form {form!r}")
    hit = 1.0 - math.exp(-math.sqrt(ln_d) / GAUSS_DENOM)
    level = math.sqrt(2.0 * ln_d - 2.0 * math.log(ln_d))
    return sigma * hit * (level + SQRT_2_OVER_PI) - SQRT_2_OVER_PI * sigma


def check_walk_hypotheses(n: int, d: float) -> None:
    """Raise ``HypothesisError`` unless ``n >= 7`` and ``2 <= d <= e^(n/3)``."""
    if int(n) != n or n < WALK_MIN_N:
        raise HypothesisError(f"walk lower bound needs n >= 7, got n={n}", "n>=7")
    if not d >= 2:
        raise HypothesisError(f"walk lower bound needs d >= 2, got d={d}", "d>=2")
    # Compare logs; e^(n/3) overflows for large n.
    if math.log(d) > n / 3.0:
        raise HypothesisError(
            f"walk lower bound needs d <= exp(n/3), got d={d}, n={n}", "d<=exp(n/3)"
        )


def walk_max_lower(n: int, d: float, form: Form = "primary") -> float:
    check_walk_hypotheses(n, d)
    ln_d = math.log(d)
    root_n = math.sqrt(n)
    if form == "simplified":
        return WALK_SIMPLE_SLOPE * math.sqrt(n * ln_d) - WALK_SIMPLE_OFFSET * root_n
    if form != "primary":
        raise DomainError(f"unknown form {form!r}")
    hit = 1.0 - math.exp(-math.sqrt(ln_d) / (WALK_DENOM * SQRT_2PI))
    shrink = math.sqrt(psi(walk_psi_arg(n, d)))
    level = math.sqrt(2.0 * ln_d - 2.0 * math.log(ln_d)) - 1.0
    return hit / shrink * root_n * level - root_n


def experts_regret_lower(n: int, d: float) -> float:
    """Minimax regret lower bound, written out in its own ``sqrt(n)/2`` scaling."""
    check_walk_hypotheses(n, d)
    ln_d = math.log(d)
    half_root_n = math.sqrt(n) / 2.0
    hit = 1.0 - math.exp(-math.sqrt(ln_d) / (WALK_DENOM * SQRT_2PI))
    shrink = math.sqrt(psi(walk_psi_arg(n, d)))
    level = math.sqrt(2.0 * ln_d - 2.0 * math.log(ln_d)) - 1.0
    return hit / shrink * half_root_n * level - half_root_n


def experts_regret_upper(n: int, d: float) -> float:
    """``sqrt((n/2) ln d)``, achievable by a horizon-tuned learner."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not d >= 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return math.sqrt(0.5 * n * math.log(d))


def experts_regret_bounds(n: int, d: float) -> tuple[float, float]:
    return experts_regret_lower(n, d), experts_regret_upper(n, d)


def make_bracket(
    spec: EnsembleSpec,
    exact: float,
    tolerance_abs: float = 1e-9,
    tolerance_rel: float = 1e-6,
    lower_scale: float = 1.0,
) -> BoundBracket:
    """Join both lower forms, the exact value and the upper bound for ``spec``.

    Lower forms are left as ``None`` (and ``out_of_scope`` set) when the
    theorem hypotheses fail. ``lower_scale`` multiplies both lower forms;
    it exists only so tests can inject a deliberately broken bound.
    """
    if not isinstance(spec, EnsembleSpec):
        raise DomainError(f"expected an EnsembleSpec, got {type(spec).__name__}")
    upper = subgaussian_max_upper(spec.d, spec.variance)
    br = BoundBracket(spec=spec, exact=float(exact), upper=upper)
    try:
        if spec.family == "gaussian":
            br.lower_primary = gaussian_max_lower(spec.d, spec.sigma, "primary")
            br.lower_simplified = gaussian_max_lower(spec.d, spec.sigma, "simplified")
        else:
            br.lower_primary = walk_max_lower(spec.n, spec.d, "primary")
            br.lower_simplified = walk_max_lower(spec.n, spec.d, "simplified")
    except HypothesisError as err:
        br.out_of_scope = err.hypothesis
    if br.lower_primary is not None:
        br.lower_primary *= lower_scale
        br.lower_simplified *= lower_scale
    slack = max(tolerance_abs, tolerance_rel * abs(br.exact))
    for name in ("lower_primary", "lower_simplified"):
        v = getattr(br, name)
        if v is not None and v > br.exact + slack:
            br.violations.append(f"{name} > exact")
    if br.exact > br.upper + slack:
        br.violations.append("exact > upper")
    return br

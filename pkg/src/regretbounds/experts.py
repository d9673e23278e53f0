"""Learning with expert advice under full-information feedback.

Hedge (exponential weights) plays against loss matrices; regret is
measured against the best fixed action in hindsight. Under i.i.d. fair-coin
losses the expected-loss regret averages to ``E[max_i Z_i] / 2`` with
``Z_i = sum_t (1 - 2 l_{t,i})`` a symmetric walk, which is what
``estimate_expected_regret`` is checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError
from .oracles import MonteCarloEstimate

Mode = Literal["expected_loss", "sampled"]

# Replicates simulated per chunk; chunk j is seeded from (seed, j).
REGRET_CHUNK = 4096


@dataclass(frozen=True)
class LossMatrix:
    losses: np.ndarray

    def __post_init__(self):
        arr = np.array(self.losses, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError(f"losses must be a non-empty n x d array, got shape {arr.shape}")
        if not np.all((arr >= 0.0) & (arr <= 1.0)):
            raise DomainError("losses must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "losses", arr)

    @property
    def n(self) -> int:
        return self.losses.shape[0]

    @property
    def d(self) -> int:
        return self.losses.shape[1]


@dataclass(frozen=True)
class LearnerTrace:
    distributions: np.ndarray
    eta: float
    sampled_actions: np.ndarray | None = None


@dataclass(frozen=True)
class RegretSummary:
    algorithm_loss: float
    best_action_loss: float
    regret: float
    mode: str


def _check_seed(seed):
    if not (0 <= int(seed) < 2**64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def sample_random_losses(n: int, d: int, seed: int) -> LossMatrix:
    """i.i.d. fair-coin losses in {0, 1}."""
    if int(n) != n or int(d) != d or n < 1 or d < 1:
        raise DomainError(f"n and d must be positive integers, got n={n}, d={d}")
    rng = np.random.default_rng(_check_seed(seed))
    return LossMatrix(rng.integers(0, 2, size=(int(n), int(d))).astype(float))


def hedge_distributions(losses: np.ndarray, eta: float) -> np.ndarray:
    """Hedge's action distributions for a stack of loss matrices, shape (..., n, d).

    Row t is proportional to ``exp(-eta * cumulative loss before round t)``,
    normalized in log space after subtracting the row max.
    """
    cum = np.cumsum(losses, axis=-2)
    before = np.zeros_like(cum)
    before[..., 1:, :] = cum[..., :-1, :]
    logits = -eta * before
    logits -= logits.max(axis=-1, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=-1, keepdims=True)


def hedge_run(losses: LossMatrix, eta: float, seed: int | None = None) -> LearnerTrace:
    """Run exponential weights with learning rate ``eta`` over ``losses``.

    With ``seed`` given, an action is also drawn from each round's
    distribution so the trace supports sampled-mode regret.
    """
    if not (isinstance(eta, (int, float)) and math.isfinite(eta) and eta > 0):
        raise DomainError(f"eta must be a positive finite real, got {eta!r}")
    if not isinstance(losses, LossMatrix):
        losses = LossMatrix(losses)
    dist = hedge_distributions(losses.losses, float(eta))
    actions = None
    if seed is not None:
        rng = np.random.default_rng(_check_seed(seed))
        u = rng.random(losses.n)
        actions = np.minimum((dist.cumsum(axis=1) < u[:, None]).sum(axis=1), losses.d - 1)
    return LearnerTrace(dist, float(eta), actions)


def regret_summary(losses: LossMatrix, trace: LearnerTrace, mode: Mode = "expected_loss") -> RegretSummary:
    if not isinstance(losses, LossMatrix):
        losses = LossMatrix(losses)
    if trace.distributions.shape != losses.losses.shape:
        raise DomainError(
            f"trace shape {trace.distributions.shape} does not match losses {losses.losses.shape}"
        )
    best = float(losses.losses.sum(axis=0).min())
    if mode == "expected_loss":
        alg = math.fsum((trace.distributions * losses.losses).sum(axis=1).tolist())
    elif mode == "sampled":
        if trace.sampled_actions is None:
            raise DomainError("sampled mode needs a trace with sampled actions")
        alg = float(losses.losses[np.arange(losses.n), trace.sampled_actions].sum())
    else:
        raise DomainError(f"unknown regret mode {mode!r}")
    return RegretSummary(alg, best, alg - best, mode)


def default_eta(n: int, d: int) -> float:
    """``sqrt(8 ln d / n)``: Hedge then has regret at most ``sqrt((n/2) ln d)``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if d < 2:
        raise DomainError(f"default_eta needs d >= 2, got {d}")
    return math.sqrt(8.0 * math.log(d) / n)


def simulate_regrets(n: int, d: int, eta: float, replicates: int, seed: int) -> np.ndarray:
    """Per-replicate expected-loss regret of Hedge against fresh fair-coin losses."""
    if int(n) != n or int(d) != d or n < 1 or d < 1:
        raise DomainError(f"n and d must be positive integers, got n={n}, d={d}")
    if int(replicates) != replicates or replicates < 1:
        raise DomainError(f"replicates must be a positive integer, got {replicates}")
    if not (math.isfinite(eta) and eta > 0):
        raise DomainError(f"eta must be positive, got {eta}")
    seed = _check_seed(seed)
    n, d, replicates = int(n), int(d), int(replicates)
    out = np.empty(replicates)
    for j, start in enumerate(range(0, replicates, REGRET_CHUNK)):
        m = min(REGRET_CHUNK, replicates - start)
        rng = np.random.default_rng([seed, j])
        losses = rng.integers(0, 2, size=(m, n, d)).astype(float)
        dist = hedge_distributions(losses, eta)
        alg = (dist * losses).sum(axis=(1, 2))
        best = losses.sum(axis=1).min(axis=1)
        out[start:start + m] = alg - best
    return out


def estimate_expected_regret(
    n: int, d: int, eta: float, replicates: int, seed: int
) -> MonteCarloEstimate:
    if replicates < 2:
        raise DomainError(f"replicates must be >= 2, got {replicates}")
    return MonteCarloEstimate.from_samples(simulate_regrets(n, d, eta, replicates, seed), seed)

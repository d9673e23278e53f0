"""Hedge regret on fair-coin losses next to half the exact walk maximum.

For each (n, d) the simulated mean regret should match E[max Z] / 2 within
Monte Carlo error, and sit between the regret lower bound and
sqrt((n/2) ln d).

    python scripts/regret_reduction.py --replicates 50000 --seed 3
"""
import argparse
import csv
import sys
from dataclasses import dataclass, field

from regretbounds import (
    HypothesisError,
    default_eta,
    estimate_expected_regret,
    experts_regret_lower,
    experts_regret_upper,
    walk_max_exact,
)


@dataclass
class ReductionConfig:
    cases: list = field(default_factory=lambda: [(20, 4), (50, 8), (100, 16), (200, 32), (400, 64)])
    replicates: int = 20_000
    seed: int = 0


def run(cfg: ReductionConfig, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "d", "mc_mean", "mc_std_error", "half_walk_max", "z", "lower", "upper"])
    for n, d in cfg.cases:
        est = estimate_expected_regret(n, d, default_eta(n, d), cfg.replicates, cfg.seed)
        half = walk_max_exact(n, d) / 2
        try:
            lower = f"{experts_regret_lower(n, d):.6g}"
        except HypothesisError:
            lower = ""
        w.writerow([
            n, d, f"{est.mean:.6f}", f"{est.std_error:.6f}", f"{half:.6f}",
            f"{est.z_score(half):.2f}", lower, f"{experts_regret_upper(n, d):.6f}",
        ])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--replicates", type=int, default=ReductionConfig.replicates)
    p.add_argument("--seed", type=int, default=ReductionConfig.seed)
    a = p.parse_args()
    run(ReductionConfig(replicates=a.replicates, seed=a.seed))


if __name__ == "__main__":
    main()

"""Random-walk E[max] bracket over n for a fixed set of d.

For each (n, d) the exact expectation sits between the two lower-bound
forms and sqrt(2 n ln d); the last column is how much of the gap between
the primary lower bound and the upper bound the exact value covers.

    python scripts/walk_sweep.py --n-max 300 --d 16,1024,1e6
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

from regretbounds import HypothesisError, walk_max_exact, walk_max_lower


@dataclass
class WalkSweepConfig:
    n_min: int = 7
    n_max: int = 120
    n_step: int = 1
    d_values: list = field(default_factory=lambda: [2, 16, 1024, 1e6])


def run(cfg: WalkSweepConfig, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "d", "exact", "lower_primary", "lower_simplified", "upper", "position"])
    for d in cfg.d_values:
        for n in range(cfg.n_min, cfg.n_max + 1, cfg.n_step):
            exact = walk_max_exact(n, d)
            upper = math.sqrt(2 * n * math.log(d))
            try:
                lp = walk_max_lower(n, d, "primary")
                ls = walk_max_lower(n, d, "simplified")
            except HypothesisError:
                w.writerow([n, f"{d:g}", f"{exact:.10g}", "", "", f"{upper:.10g}", ""])
                continue
            pos = (exact - lp) / (upper - lp)
            w.writerow([n, f"{d:g}", f"{exact:.10g}", f"{lp:.10g}", f"{ls:.10g}", f"{upper:.10g}", f"{pos:.4f}"])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-min", type=int, default=WalkSweepConfig.n_min)
    p.add_argument("--n-max", type=int, default=WalkSweepConfig.n_max)
    p.add_argument("--n-step", type=int, default=WalkSweepConfig.n_step)
    p.add_argument("--d", default=None, help="comma-separated d values")
    a = p.parse_args()
    cfg = WalkSweepConfig(a.n_min, a.n_max, a.n_step)
    if a.d:
        cfg.d_values = [float(v) for v in a.d.split(",")]
    run(cfg)


if __name__ == "__main__":
    main()

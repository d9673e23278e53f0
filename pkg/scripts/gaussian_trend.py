"""Gaussian E[max] against its lower and upper bounds as d grows.

Prints a CSV with the exact value, both lower-bound forms, the upper bound
and the ratio exact / sqrt(2 ln d), which creeps toward 1 very slowly.

    python scripts/gaussian_trend.py --max-exp 30 --per-decade 2
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from regretbounds import gaussian_max_exact, gaussian_max_lower, subgaussian_max_upper


@dataclass
class TrendConfig:
    max_exp: float = 12.0
    per_decade: int = 1
    sigma: float = 1.0


def run(cfg: TrendConfig, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["d", "exact", "lower_primary", "lower_simplified", "upper", "ratio"])
    steps = int(round(cfg.max_exp * cfg.per_decade))
    for d in np.logspace(math.log10(2), cfg.max_exp, steps + 1):
        exact = gaussian_max_exact(d, cfg.sigma)
        w.writerow([
            f"{d:.6g}", f"{exact:.10g}",
            f"{gaussian_max_lower(d, cfg.sigma, 'primary'):.10g}",
            f"{gaussian_max_lower(d, cfg.sigma, 'simplified'):.10g}",
            f"{subgaussian_max_upper(d, cfg.sigma**2):.10g}",
            f"{exact / (cfg.sigma * math.sqrt(2 * math.log(d))):.6f}",
        ])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-exp", type=float, default=TrendConfig.max_exp, help="largest d is 10^max_exp")
    p.add_argument("--per-decade", type=int, default=TrendConfig.per_decade)
    p.add_argument("--sigma", type=float, default=TrendConfig.sigma)
    a = p.parse_args()
    run(TrendConfig(a.max_exp, a.per_decade, a.sigma))


if __name__ == "__main__":
    main()

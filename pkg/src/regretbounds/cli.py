"""Command-line sweeps: ``verify``, ``tails`` and ``experts``.

Exit codes: 0 all checks pass, 1 at least one bound violated, 2 usage or
configuration error.

Settings come from flags, or from a JSON file given with ``--config``
whose keys mirror ``SweepConfig``; a flag always overrides the file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Iterable, Sequence

from . import analytic, experts, extremes, oracles, tails
from .errors import DomainError, HypothesisError

FAMILIES = ("gaussian", "walk", "tails", "experts")
TAIL_BOUNDS = ("mckay", "stirling", "corollary", "gaussian")
STATUSES = ("pass", "fail", "vacuous", "out_of_scope")

# Monte Carlo in `verify` runs only when n * d * replicates stays under this.
VERIFY_MC_BUDGET = 2 * 10**7
EXPERTS_GAP_LIMIT = 4.0
HEDGE_GUARANTEE_SLACK = 1e-9


class ConfigError(Exception):
    pass


@dataclass
class SweepConfig:
    families: list[str] = field(default_factory=lambda: list(FAMILIES))
    d_grid: list[float] = field(default_factory=lambda: [2, 10, 100, 1e4, 1e6, 1e9, 1e12])
    n_grid: list[int] = field(default_factory=lambda: list(range(7, 61)))
    sigma_grid: list[float] = field(default_factory=lambda: [0.5, 1.0, 3.0])
    replicates: int = 1000
    seed: int = 0
    tolerance_abs: float = 1e-9
    tolerance_rel: float = 1e-6

    def validate(self) -> "SweepConfig":
        bad = [f for f in self.families if f not in FAMILIES]
        if bad or not self.families:
            raise ConfigError(f"families must be a non-empty subset of {FAMILIES}, got {self.families}")
        needs = {
            "d_grid": {"gaussian", "walk", "experts"},
            "n_grid": {"walk", "tails", "experts"},
            "sigma_grid": {"gaussian", "tails"},
        }
        for name, fams in needs.items():
            if fams & set(self.families) and not getattr(self, name):
                raise ConfigError(f"{name} must be non-empty for families {sorted(fams & set(self.families))}")
        if any(not (math.isfinite(d) and d >= 1) for d in self.d_grid):
            raise ConfigError(f"d_grid values must be finite and >= 1, got {self.d_grid}")
        if any(int(n) != n or n < 1 for n in self.n_grid):
            raise ConfigError(f"n_grid values must be positive integers, got {self.n_grid}")
        self.n_grid = [int(n) for n in self.n_grid]
        if any(not (math.isfinite(s) and s > 0) for s in self.sigma_grid):
            raise ConfigError(f"sigma_grid values must be positive, got {self.sigma_grid}")
        if int(self.replicates) != self.replicates or self.replicates < 0:
            raise ConfigError(f"replicates must be a nonnegative integer, got {self.replicates}")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.tolerance_abs < 0 or self.tolerance_rel < 0:
            raise ConfigError("tolerances must be >= 0")
        return self

    def slack(self, exact: float) -> float:
        return max(self.tolerance_abs, self.tolerance_rel * abs(exact))


@dataclass
class VerifyRow:
    family: str
    case: str
    n: int | None = None
    d: float | None = None
    sigma: float | None = None
    k: int | None = None
    t: float | None = None
    x: float | None = None
    lower_primary: float | None = None
    lower_simplified: float | None = None
    exact: float | None = None
    upper: float | None = None
    mc_mean: float | None = None
    mc_std_error: float | None = None
    status: str = "pass"
    detail: str = ""


VERIFY_COLUMNS = [f.name for f in fields(VerifyRow)]
TAILS_COLUMNS = [
    "n", "k", "t", "x", "exact", "mckay", "stirling", "corollary",
    "gaussian_lower", "gaussian_exact", "status",
]


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_num(v: Any) -> Any:
    if isinstance(v, float):
        if not math.isfinite(v):
            return str(v)
        return float(format(v, ".17g"))
    return v


def _finish(row: VerifyRow, cfg: SweepConfig, scope: str | None = None) -> VerifyRow:
    """Set ``status`` from the row's bound columns; violations beat scope."""
    slack = cfg.slack(row.exact)
    problems = []
    for name in ("lower_primary", "lower_simplified"):
        v = getattr(row, name)
        if v is not None and v > row.exact + slack:
            problems.append(f"{name} > exact")
    if row.upper is not None and row.exact > row.upper + slack:
        problems.append("exact > upper")
    if row.detail:
        problems.append(row.detail)
    lowers = [v for v in (row.lower_primary, row.lower_simplified) if v is not None]
    if problems:
        row.status, row.detail = "fail", "; ".join(problems)
    elif scope:
        row.status, row.detail = "out_of_scope", scope
    elif lowers and all(v < 0 for v in lowers):
        row.status = "vacuous"
    else:
        row.status = "pass"
    return row


def _scaled(v: float | None, scale: float) -> float | None:
    return None if v is None else v * scale


def gaussian_rows(cfg: SweepConfig, lower_scale: float = 1.0) -> Iterable[VerifyRow]:
    for d in cfg.d_grid:
        for sigma in cfg.sigma_grid:
            spec = extremes.EnsembleSpec.gaussian(d, sigma)
            br = extremes.make_bracket(
                spec, oracles.gaussian_max_exact(d, sigma), cfg.tolerance_abs,
                cfg.tolerance_rel, lower_scale,
            )
            row = VerifyRow("gaussian", "max", d=float(d), sigma=float(sigma), exact=br.exact,
                            upper=br.upper, lower_primary=br.lower_primary,
                            lower_simplified=br.lower_simplified)
            yield _finish(row, cfg, br.out_of_scope)


def walk_rows(cfg: SweepConfig, lower_scale: float = 1.0) -> Iterable[VerifyRow]:
    for n in cfg.n_grid:
        for d in cfg.d_grid:
            spec = extremes.EnsembleSpec.walk(n, d)
            br = extremes.make_bracket(
                spec, oracles.walk_max_exact(n, d), cfg.tolerance_abs,
                cfg.tolerance_rel, lower_scale,
            )
            row = VerifyRow("walk", "max", n=n, d=float(d), exact=br.exact, upper=br.upper,
                            lower_primary=br.lower_primary, lower_simplified=br.lower_simplified)
            yield _finish(row, cfg, br.out_of_scope)


def _half_steps(lo: float, hi: float) -> list[float]:
    return [lo + 0.5 * i for i in range(int(round((hi - lo) / 0.5)) + 1)]


def tail_rows(cfg: SweepConfig, lower_scale: float = 1.0) -> Iterable[VerifyRow]:
    for n in cfg.n_grid:
        for k in range(math.ceil(n / 2), n + 1):
            yield _finish(VerifyRow(
                "tails", "binomial", n=n, k=k, x=(2 * k - n) / math.sqrt(n),
                lower_primary=tails.binomial_tail_lower(n, k, "mckay") * lower_scale,
                lower_simplified=tails.binomial_tail_lower(n, k, "stirling") * lower_scale,
                exact=tails.binomial_tail_exact(n, k), upper=1.0,
            ), cfg)
        for t in _half_steps(1.0, n / 2 + 1):
            yield _finish(VerifyRow(
                "tails", "corollary", n=n, t=t,
                lower_primary=tails.binomial_tail_corollary(n, t) * lower_scale,
                exact=tails.corollary_exact(n, t), upper=1.0,
            ), cfg)
    for sigma in cfg.sigma_grid:
        for i in range(33):
            z = 0.25 * i
            q = tails.GaussianTailQuery(z * sigma, sigma)
            yield _finish(VerifyRow(
                "tails", "gaussian", sigma=float(sigma), x=q.x,
                lower_primary=tails.gaussian_tail_lower(q) * lower_scale,
                exact=tails.gaussian_tail_exact(q), upper=1.0,
            ), cfg)
    for i in range(41):
        x = 0.25 * i
        yield _finish(VerifyRow(
            "tails", "mills", x=x,
            lower_primary=analytic.mills_ratio(x, "boyd") * lower_scale,
            lower_simplified=analytic.mills_ratio(x, "boyd_simplified") * lower_scale,
            exact=analytic.mills_ratio(x, "exact"),
        ), cfg)


def experts_rows(cfg: SweepConfig, lower_scale: float = 1.0) -> Iterable[VerifyRow]:
    for n in cfg.n_grid:
        for d in cfg.d_grid:
            exact = 0.5 * oracles.walk_max_exact(n, d)
            row = VerifyRow("experts", "regret", n=n, d=float(d), exact=exact,
                            upper=extremes.experts_regret_upper(n, d))
            scope = None
            try:
                row.lower_primary = extremes.experts_regret_lower(n, d) * lower_scale
            except HypothesisError as err:
                scope = err.hypothesis
            simulate = (
                cfg.replicates >= 2 and d == int(d) and d >= 2
                and n * d * cfg.replicates <= VERIFY_MC_BUDGET
            )
            if simulate:
                est = experts.estimate_expected_regret(
                    n, int(d), experts.default_eta(n, int(d)), cfg.replicates, cfg.seed
                )
                row.mc_mean, row.mc_std_error = est.mean, est.std_error
                if est.z_score(exact) > EXPERTS_GAP_LIMIT:
                    row.detail = f"mc regret {est.z_score(exact):.2f} std errors from exact"
            yield _finish(row, cfg, scope)


def run_verify(cfg: SweepConfig, lower_scale: float = 1.0) -> list[VerifyRow]:
    """Evaluate every grid point of every selected family, in grid order."""
    cfg.validate()
    makers = {"gaussian": gaussian_rows, "walk": walk_rows, "tails": tail_rows, "experts": experts_rows}
    rows: list[VerifyRow] = []
    for fam in FAMILIES:
        if fam in cfg.families:
            rows.extend(makers[fam](cfg, lower_scale))
    return rows


def summarize(rows: Sequence[VerifyRow]) -> dict[str, int]:
    out = {"rows": len(rows)}
    for s in STATUSES:
        out[f"{s}_count"] = sum(r.status == s for r in rows)
    return out


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def tails_table(n: int, bounds: Sequence[str] = TAIL_BOUNDS, slack: float = 1e-12) -> list[dict]:
    """One row per threshold ``ceil(n/2) <= k <= n``; the corollary uses ``t = k - n/2 + 1``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    rows = []
    for k in range(math.ceil(n / 2), n + 1):
        x = (2 * k - n) / math.sqrt(n)
        t = k - n / 2 + 1
        row: dict[str, Any] = {"n": n, "k": k, "t": t, "x": x, "exact": tails.binomial_tail_exact(n, k)}
        ok = True
        if "mckay" in bounds:
            row["mckay"] = tails.binomial_tail_lower(n, k, "mckay")
            ok &= row["mckay"] <= row["exact"] + slack
        if "stirling" in bounds:
            row["stirling"] = tails.binomial_tail_lower(n, k, "stirling")
            ok &= row["stirling"] <= row["exact"] + slack
        if "corollary" in bounds:
            row["corollary"] = tails.binomial_tail_corollary(n, t)
            ok &= row["corollary"] <= tails.corollary_exact(n, t) + slack
        if "gaussian" in bounds:
            row["gaussian_lower"] = tails.gaussian_tail_lower(x)
            row["gaussian_exact"] = tails.gaussian_tail_exact(x)
            ok &= row["gaussian_lower"] <= row["gaussian_exact"] + slack
        row["status"] = "pass" if ok else "fail"
        rows.append(row)
    return rows


def experts_report(n: int, d: int, replicates: int, seed: int, eta: float | None = None) -> dict:
    if int(n) != n or n < 1 or int(d) != d or d < 1:
        raise DomainError(f"n and d must be positive integers, got n={n}, d={d}")
    if replicates < 2:
        raise DomainError(f"replicates must be >= 2, got {replicates}")
    if eta is None:
        eta = experts.default_eta(n, d) if d >= 2 else 1.0
    regrets = experts.simulate_regrets(n, d, eta, replicates, seed)
    est = oracles.MonteCarloEstimate.from_samples(regrets, seed)
    half = 0.5 * oracles.walk_max_exact(n, d)
    upper = extremes.experts_regret_upper(n, d)
    try:
        lower: Any = extremes.experts_regret_lower(n, d)
    except HypothesisError:
        lower = "out_of_scope"
    gap = est.z_score(half)
    worst = float(regrets.max())
    held = worst <= upper + HEDGE_GUARANTEE_SLACK
    return {
        "n": int(n),
        "d": int(d),
        "replicates": int(replicates),
        "seed": int(seed),
        "eta_used": eta,
        "mc_regret": {"mean": est.mean, "std_error": est.std_error},
        "half_walk_max_exact": half,
        "regret_lower_bound": lower,
        "regret_upper_bound": upper,
        "reduction_gap_in_std_errors": gap,
        "max_replicate_regret": worst,
        "hedge_guarantee_held": held,
        "pass": bool(gap <= EXPERTS_GAP_LIMIT and held),
    }


_EXP = re.compile(r"^e\^\(?([-+0-9.eE]+)\)?$")


def parse_grid(text: str, integer: bool = False) -> list:
    """Comma-separated values; ``a:b`` and ``a:b:step`` are inclusive ranges, ``e^30`` is exp(30)."""
    out: list = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if ":" in tok:
            parts = [int(p) for p in tok.split(":")]
            if len(parts) not in (2, 3):
                raise ConfigError(f"bad range {tok!r}")
            step = parts[2] if len(parts) == 3 else 1
            out.extend(range(parts[0], parts[1] + 1, step))
            continue
        m = _EXP.match(tok)
        val = math.exp(float(m.group(1))) if m else float(tok)
        if integer:
            if val != int(val):
                raise ConfigError(f"expected an integer, got {tok!r}")
            val = int(val)
        out.append(val)
    if not out:
        raise ConfigError(f"empty grid {text!r}")
    return out


def _grid_arg(integer=False):
    def conv(text):
        try:
            return parse_grid(text, integer)
        except (ValueError, ConfigError) as err:
            raise argparse.ArgumentTypeError(str(err))
    return conv


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="regretbounds",
        description="Check lower <= exact <= upper for expected-maximum, tail and regret bounds.",
        epilog="Exit codes: 0 all pass, 1 a bound is violated, 2 usage/config error.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with SweepConfig keys; flags override it")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), default=None)

    v = sub.add_parser("verify", help="sweep bound brackets over parameter grids")
    common(v)
    v.add_argument("--family", action="append",
                   help=f"family to sweep (repeat or comma-separate): {', '.join(FAMILIES)}")
    v.add_argument("--d-grid", type=_grid_arg(), help="e.g. 2,10,1e6,e^30 or 2:64")
    v.add_argument("--n-grid", type=_grid_arg(True), help="e.g. 7:60")
    v.add_argument("--sigma-grid", type=_grid_arg())
    v.add_argument("--replicates", type=int, help="Monte Carlo replicates for the experts family (0 disables)")
    v.add_argument("--seed", type=int)
    v.add_argument("--tolerance-abs", type=float)
    v.add_argument("--tolerance-rel", type=float)
    v.add_argument("--inject-lower-inflation", type=float, default=1.0, help=argparse.SUPPRESS)

    t = sub.add_parser("tails", help="tabulate binomial and Gaussian tail bounds against exact tails")
    common(t)
    t.add_argument("--n-grid", "--n", dest="n_grid", type=_grid_arg(True), default=None)
    t.add_argument("--bounds", default=",".join(TAIL_BOUNDS),
                   help=f"comma-separated subset of {', '.join(TAIL_BOUNDS)}")

    e = sub.add_parser("experts", help="simulate Hedge against fair-coin losses")
    common(e)
    e.add_argument("--n", "--n-grid", dest="n", type=_grid_arg(True), required=False)
    e.add_argument("--d", "--d-grid", dest="d", type=_grid_arg(True), required=False)
    e.add_argument("--replicates", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--eta", type=float)
    return p


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path}: {err}")
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(SweepConfig)} | {"eta", "n", "d", "bounds"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _grid_from_file(val, integer=False):
    if isinstance(val, str):
        return parse_grid(val, integer)
    if isinstance(val, (int, float)):
        return [val]
    return list(val)


def config_from_args(args, file_cfg: dict) -> SweepConfig:
    cfg = SweepConfig()
    for key in ("families", "replicates", "seed", "tolerance_abs", "tolerance_rel"):
        if key in file_cfg:
            setattr(cfg, key, file_cfg[key])
    for key, integer in (("d_grid", False), ("n_grid", True), ("sigma_grid", False)):
        if key in file_cfg:
            setattr(cfg, key, _grid_from_file(file_cfg[key], integer))
    if args.family:
        cfg.families = [f.strip() for item in args.family for f in item.split(",") if f.strip()]
    for key in ("d_grid", "n_grid", "sigma_grid", "replicates", "seed", "tolerance_abs", "tolerance_rel"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    return cfg.validate()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_verify(args) -> int:
    cfg = config_from_args(args, load_config(args.config))
    rows = run_verify(cfg, lower_scale=args.inject_lower_inflation)
    summary = summarize(rows)
    if (args.format or "csv") == "json":
        report = dict(summary, config=asdict(cfg),
                      results=[{k: _json_num(v) for k, v in asdict(r).items()} for r in rows])
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        _emit(rows_to_csv([asdict(r) for r in rows], VERIFY_COLUMNS), args.out)
        print(json.dumps(summary), file=sys.stdout if args.out else sys.stderr)
    return 1 if summary["fail_count"] else 0


def _cmd_tails(args) -> int:
    file_cfg = load_config(args.config)
    ns = args.n_grid
    if ns is None:
        ns = _grid_from_file(file_cfg.get("n", file_cfg.get("n_grid", [4])), True)
    bounds = [b.strip() for b in args.bounds.split(",") if b.strip()]
    if not bounds or set(bounds) - set(TAIL_BOUNDS):
        raise ConfigError(f"--bounds must be a subset of {TAIL_BOUNDS}, got {args.bounds!r}")
    rows = [r for n in ns for r in tails_table(n, bounds)]
    failed = sum(r["status"] == "fail" for r in rows)
    if (args.format or "csv") == "json":
        report = {"rows": [{k: _json_num(v) for k, v in r.items()} for r in rows],
                  "pass_count": len(rows) - failed, "fail_count": failed}
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        _emit(rows_to_csv(rows, TAILS_COLUMNS), args.out)
    return 1 if failed else 0


def _single(val, name):
    if isinstance(val, list):
        if len(val) != 1:
            raise ConfigError(f"experts takes a single {name}, got {val}")
        return val[0]
    return val


def _cmd_experts(args) -> int:
    file_cfg = load_config(args.config)
    n = args.n if args.n is not None else file_cfg.get("n", (file_cfg.get("n_grid") or [None])[0])
    d = args.d if args.d is not None else file_cfg.get("d", (file_cfg.get("d_grid") or [None])[0])
    if n is None or d is None:
        raise ConfigError("experts needs --n and --d")
    n, d = _single(n, "n"), _single(d, "d")
    replicates = args.replicates if args.replicates is not None else file_cfg.get("replicates", 20000)
    seed = args.seed if args.seed is not None else file_cfg.get("seed", 0)
    eta = args.eta if args.eta is not None else file_cfg.get("eta")
    if eta is not None and not (math.isfinite(eta) and eta > 0):
        raise ConfigError(f"eta must be positive, got {eta}")
    report = experts_report(n, d, replicates, seed, eta)
    text = json.dumps({k: (_json_num(v) if not isinstance(v, dict) else
                           {kk: _json_num(vv) for kk, vv in v.items()}) for k, v in report.items()},
                      indent=2)
    _emit(text + "\n", args.out)
    return 0 if report["pass"] else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": _cmd_verify, "tails": _cmd_tails, "experts": _cmd_experts}
    try:
        return handlers[args.command](args)
    except (ConfigError, DomainError) as err:
        print(f"regretbounds {args.command}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

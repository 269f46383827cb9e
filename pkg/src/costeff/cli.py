"""Command-line entry point: experiment runs, validation suite, HTTP server.

Subcommands
-----------
cost-surface    cost over an (alpha, std) grid -> CSV
frontier        cost-efficient frontier per alpha -> CSV
hedge-sim       discrete-rebalancing replication error study -> CSV
decompose-demo  exact-sum allocation benchmark report
validate        run the analytic invariant suite (exit 1 on failure)
serve           start the HTTP API

Every output file embeds the fully resolved configuration and seed in its
comment header, so any file can be reproduced from its own header. Exit
codes: 0 ok, 1 check failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .copula import ClaytonParams
from .market import BsParams, CevParams
from .optimizer import draw_scenarios, frontier as trace_frontier, lognormal_plan_cost
from .targetdist import TargetDistribution

TARGET_MODE_SCALE = "scale"  # sweep std at fixed lognormal scale exp(log_m) = level
TARGET_MODE_MEAN = "mean"    # sweep std at fixed distribution mean = level


@dataclass
class ExperimentConfig:
    """Resolved run configuration; validated before any computation starts."""

    model: str = "black-scholes"
    mu: float = 0.03
    sigma: float = 0.3
    r: float = 0.02
    s0: float = 1.0
    horizon: float = 10.0
    beta: float = -0.25
    cev_steps: int = 1000
    alphas: list[float] = field(default_factory=lambda: [-0.9, 1.0, 5.0, 10.0, 20.0])
    stds: list[float] = field(default_factory=lambda: [10, 20, 30, 40, 50, 60, 70, 80])
    target_mode: str = TARGET_MODE_SCALE
    level: float = 100.0
    budget: float = 1000.0
    periods: int = 10
    scenarios: int = 100_000
    seed: int = 7_2024
    rebalance_grid: list[int] = field(default_factory=lambda: [32, 64, 128, 256, 512])
    hedge_paths: int = 10_000
    output: str | None = None
    workers: int = 0  # 0 = machine parallelism

    def validate(self) -> None:
        problems = []
        if self.model not in ("black-scholes", "cev"):
            problems.append(f"model: unknown model {self.model!r}")
        if self.sigma <= 0:
            problems.append(f"sigma: must be positive, got {self.sigma}")
        if self.s0 <= 0:
            problems.append(f"s0: must be positive, got {self.s0}")
        if self.horizon <= 0:
            problems.append(f"horizon: must be positive, got {self.horizon}")
        if self.model == "cev" and not (-0.5 < self.beta < 0.0):
            problems.append(f"beta: must lie in (-1/2, 0), got {self.beta}")
        if self.cev_steps < 1:
            problems.append(f"cev_steps: must be >= 1, got {self.cev_steps}")
        if not self.alphas:
            problems.append("alphas: grid must not be empty")
        for a in self.alphas:
            if a == 0.0 or a < -1.0:
                problems.append(f"alphas: {a} outside [-1, inf) \\ {{0}}")
        if not self.stds:
            problems.append("stds: grid must not be empty")
        if any(s <= 0 for s in self.stds):
            problems.append("stds: every entry must be positive")
        if self.target_mode not in (TARGET_MODE_SCALE, TARGET_MODE_MEAN):
            problems.append(f"target_mode: must be 'scale' or 'mean', got {self.target_mode!r}")
        if self.level <= 0:
            problems.append(f"level: must be positive, got {self.level}")
        if self.budget <= 0:
            problems.append(f"budget: must be positive, got {self.budget}")
        if self.periods < 2:
            problems.append(f"periods: must be >= 2, got {self.periods}")
        if self.scenarios < 100:
            problems.append(f"scenarios: must be >= 100, got {self.scenarios}")
        if self.workers < 0:
            problems.append(f"workers: must be >= 0 (0 = machine parallelism), got {self.workers}")
        if any(k < 1 for k in self.rebalance_grid):
            problems.append("rebalance_grid: entries must be >= 1")
        if problems:
            raise ValueError("; ".join(problems))

    def market(self):
        if self.model == "cev":
            return CevParams(
                mu=self.mu, sigma=self.sigma, r=self.r, s0=self.s0,
                horizon_T=self.horizon, beta=self.beta, n_steps=self.cev_steps,
            )
        return BsParams(
            mu=self.mu, sigma=self.sigma, r=self.r, s0=self.s0, horizon_T=self.horizon
        )

    def target(self, std: float) -> TargetDistribution:
        if self.target_mode == TARGET_MODE_MEAN:
            return TargetDistribution.from_mean_std(self.level, std)
        return TargetDistribution.from_scale_std(self.level, std)


# ----------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------

def _header_lines(cfg: ExperimentConfig, command: str) -> list[str]:
    # the embedded config carries every field that affects the numbers;
    # output destination and worker count are execution details
    payload = dataclasses.asdict(cfg)
    payload.pop("output", None)
    payload.pop("workers", None)
    resolved = json.dumps(payload, sort_keys=True)
    return [
        f"# costeff {command} v{__version__}",
        f"# generated_at={time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}",
        f"# config={resolved}",
    ]


def _write_csv(path: str | None, header: list[str], columns: list[str], rows) -> None:
    lines = header + [",".join(columns)]
    for row in rows:
        lines.append(",".join(f"{x:.12g}" if isinstance(x, float) else str(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ----------------------------------------------------------------------
# cost-surface
# ----------------------------------------------------------------------

def _surface_row(args: tuple) -> list[tuple]:
    cfg_dict, alpha = args
    cfg = ExperimentConfig(**cfg_dict)
    params = ClaytonParams(alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # mechanical negative-alpha sweeps warn once
        sc = draw_scenarios(cfg.market(), cfg.scenarios, cfg.periods, params, cfg.seed)
        out = []
        for std in cfg.stds:
            t = cfg.target(std)
            value, se = lognormal_plan_cost(sc, t.log_m, t.log_v)
            out.append((alpha, float(std), value, se))
    return out


def cmd_cost_surface(cfg: ExperimentConfig) -> int:
    """One CSV row per (alpha, std) grid point, common seed across the grid."""
    cfg.validate()
    jobs = [(dataclasses.asdict(cfg), a) for a in cfg.alphas]
    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_surface_row, jobs))  # submit order kept
    else:
        blocks = [_surface_row(j) for j in jobs]
    rows = [row for block in blocks for row in block]
    _write_csv(
        cfg.output,
        _header_lines(cfg, "cost-surface"),
        ["alpha", "std", "cost", "std_error"],
        rows,
    )
    return 0


# ----------------------------------------------------------------------
# frontier
# ----------------------------------------------------------------------

def cmd_frontier(cfg: ExperimentConfig) -> int:
    """Frontier rows (alpha, std, per_period_mean, achieved_cost); mean-parameterized."""
    cfg.validate()
    rows = []
    status = 0
    for alpha in cfg.alphas:
        params = ClaytonParams(alpha)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sc = draw_scenarios(cfg.market(), cfg.scenarios, cfg.periods, params, cfg.seed)
            for std in cfg.stds:
                try:
                    (pt,) = trace_frontier(
                        cfg.budget, [std], params, cfg.market(), cfg.scenarios,
                        cfg.seed, n_periods=cfg.periods, scenarios=sc,
                    )
                except ValueError as exc:
                    print(f"frontier point (alpha={alpha}, std={std}) failed: {exc}",
                          file=sys.stderr)
                    status = 1
                    continue
                rows.append(
                    (alpha, float(std), pt.per_period_mean, pt.achieved_cost,
                     pt.budget, pt.budget_at_horizon)
                )
    _write_csv(
        cfg.output,
        _header_lines(cfg, "frontier"),
        ["alpha", "std", "per_period_mean", "achieved_cost", "budget", "budget_at_horizon"],
        rows,
    )
    return status


# ----------------------------------------------------------------------
# hedge simulation
# ----------------------------------------------------------------------

def cmd_hedge_sim(cfg: ExperimentConfig) -> int:
    from .hedge import LognormalHedgeParams, hedge_value, simulate_hedge
    from .market import bs_paths

    cfg.validate()
    if cfg.model != "black-scholes":
        print("hedge-sim: only the black-scholes model is supported", file=sys.stderr)
        return 2
    market = cfg.market()
    target = cfg.target(cfg.stds[0])
    hp = LognormalHedgeParams.from_target(target, market)

    finest = max(cfg.rebalance_grid)
    for steps in cfg.rebalance_grid:
        if finest % steps != 0:
            print(f"hedge-sim: rebalance grid {steps} does not divide {finest}",
                  file=sys.stderr)
            return 2
    paths = bs_paths(cfg.hedge_paths, market, finest, cfg.seed)
    rows = []
    for steps in sorted(cfg.rebalance_grid):
        err = simulate_hedge(paths, hp, steps)
        rows.append(
            (steps, math.sqrt(float(np.mean(err**2))), float(np.mean(err)),
             float(np.mean(np.abs(err))))
        )
    capital = hedge_value(0.0, market.s0, hp)
    rng = np.random.default_rng(cfg.seed + 1)
    z = rng.standard_normal(1_000_000)
    T = market.horizon_T
    s_T = market.s0 * np.exp((market.r - 0.5 * market.sigma**2) * T
                             + market.sigma * math.sqrt(T) * z)
    disc = math.exp(-market.r * T) * hp.payoff(s_T)
    se = float(disc.std(ddof=1) / 1000.0)
    print(f"initial hedge capital {capital:.6f} vs MC payoff price "
          f"{float(disc.mean()):.6f} +- {se:.6f}")
    _write_csv(
        cfg.output,
        _header_lines(cfg, "hedge-sim"),
        ["rebalance_steps", "rms_error", "mean_error", "mean_abs_error"],
        rows,
    )
    return 0


# ----------------------------------------------------------------------
# decomposition demo
# ----------------------------------------------------------------------

def cmd_decompose_demo(cfg: ExperimentConfig) -> int:
    from scipy.stats import kstest

    from .copula import sample
    from .decompose import allocate
    from .optimizer import build_consumption

    cfg.validate()
    m = cfg.scenarios
    n_comp = min(cfg.periods, 3)
    target = TargetDistribution.from_mean_std(cfg.level, cfg.stds[0])
    alpha = ClaytonParams(cfg.alphas[0]) if cfg.alphas[0] > 0 else ClaytonParams(5.0)
    pop = build_consumption(sample(m, n_comp, alpha, cfg.seed), [target] * n_comp).values
    redraw = build_consumption(sample(m, n_comp, alpha, cfg.seed + 1), [target] * n_comp)
    z_tilde = redraw.values.sum(axis=1)

    res = allocate(pop, z_tilde, cfg.seed + 2)
    worst = float(np.max(np.abs(res.values.sum(axis=1) - z_tilde)))
    print(f"rows: {m}, components: {n_comp}, alpha: {alpha.alpha}")
    print(f"max |row sum - target|: {worst:.3e} (exact: {worst == 0.0})")
    ok = worst == 0.0
    crit = 1.6276 / math.sqrt(m)
    for k in range(n_comp):
        stat = float(kstest(res.values[:, k], target.cdf).statistic)
        passed = stat < crit
        ok &= passed
        print(f"column {k}: KS={stat:.5f} vs 1% critical {crit:.5f} -> "
              f"{'ok' if passed else 'FAIL'}")
    return 0 if ok else 1


# ----------------------------------------------------------------------
# validation suite
# ----------------------------------------------------------------------

def cmd_validate(cfg: ExperimentConfig, quick: bool = False) -> int:
    from . import checks

    cfg.validate()
    results = checks.run_all(quick=quick)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        mark = "ok  " if r.passed else "FAIL"
        print(f"[{mark}] {r.name:<{width}}  {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


# ----------------------------------------------------------------------
# server
# ----------------------------------------------------------------------

def cmd_serve(host: str, port: int) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)
    return 0


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--model", choices=["black-scholes", "cev"])
    p.add_argument("--mu", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--s0", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--cev-steps", type=int, dest="cev_steps")
    p.add_argument("--alphas", type=_float_list, help="comma-separated grid")
    p.add_argument("--stds", type=_float_list, help="comma-separated grid")
    p.add_argument("--target-mode", choices=[TARGET_MODE_SCALE, TARGET_MODE_MEAN],
                   dest="target_mode",
                   help="sweep std at fixed lognormal scale (default) or fixed mean")
    p.add_argument("--level", type=float, help="target scale or mean, by --target-mode")
    p.add_argument("--budget", type=float)
    p.add_argument("--periods", type=int)
    p.add_argument("--scenarios", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--rebalance-grid", type=_int_list, dest="rebalance_grid")
    p.add_argument("--hedge-paths", type=int, dest="hedge_paths")
    p.add_argument("--output", "-o", help="CSV destination (default: stdout)")
    p.add_argument("--workers", type=int,
                   help="grid worker processes; 0 = machine parallelism (default)")


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ValueError(f"config file: unknown fields {sorted(unknown)}")
        values.update(loaded)
    for f in dataclasses.fields(ExperimentConfig):
        flag_val = getattr(args, f.name, None)
        if flag_val is not None:
            values[f.name] = flag_val
    return ExperimentConfig(**values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costeff",
        description="Cost-efficient multi-period consumption: simulation and optimization",
    )
    parser.add_argument("--version", action="version", version=f"costeff {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext, columns in [
        ("cost-surface", "cost over an (alpha, std) grid, written as CSV",
         "alpha, std, cost (E[xi Z*], present value), std_error (MC standard error)"),
        ("frontier", "cost-efficient frontier (per-period mean vs std) at fixed budget",
         "alpha, std, per_period_mean, achieved_cost (E[xi Z*]), budget, "
         "budget_at_horizon (budget * e^{rT}, the root target)"),
        ("hedge-sim", "discrete-rebalancing replication error study",
         "rebalance_steps, rms_error, mean_error, mean_abs_error "
         "(terminal portfolio minus payoff)"),
        ("decompose-demo", "exact-sum allocation benchmark", None),
    ]:
        p = sub.add_parser(
            name, help=helptext,
            epilog=f"CSV columns: {columns}" if columns else None,
        )
        _add_config_flags(p)

    pv = sub.add_parser("validate", help="run analytic invariant checks")
    _add_config_flags(pv)
    pv.add_argument("--quick", action="store_true", help="reduced sizes for smoke testing")

    ps = sub.add_parser("serve", help="start the HTTP API")
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args.host, args.port)
    try:
        cfg = _resolve_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "cost-surface":
            return cmd_cost_surface(cfg)
        if args.command == "frontier":
            return cmd_frontier(cfg)
        if args.command == "hedge-sim":
            return cmd_hedge_sim(cfg)
        if args.command == "decompose-demo":
            return cmd_decompose_demo(cfg)
        if args.command == "validate":
            return cmd_validate(cfg, quick=args.quick)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

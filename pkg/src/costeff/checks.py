"""Analytic invariant checks used by the `validate` subcommand.

Each check compares a simulated quantity against an independent closed form
or a brute-force computation and reports the measured values. Sizes are
chosen so the full run finishes in a few minutes; `quick` shrinks them for
smoke testing.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import kendalltau, kstest

from .copula import ClaytonParams, sample
from .market import (
    BsParams,
    CevParams,
    bs_paths,
    bs_state_price,
    cev_state_price,
    laplace_qv,
    sqrt_diffusion_step,
)
from .optimizer import build_consumption, rearrange_antimonotone
from .targetdist import TargetDistribution

KS_CRIT_1PCT = 1.6276

BS_DEFAULT = BsParams(mu=0.03, sigma=0.3, r=0.02, s0=1.0, horizon_T=10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_config_rejection() -> CheckResult:
    try:
        ClaytonParams(0.0)
    except ValueError as exc:
        return CheckResult("config-rejection", True, f"alpha=0 rejected ({exc})")
    return CheckResult("config-rejection", False, "alpha=0 was accepted")


def check_bs_kernel(n: int, seed: int = 101) -> CheckResult:
    sp = bs_state_price(n, BS_DEFAULT, seed)
    target = math.exp(-BS_DEFAULT.r * BS_DEFAULT.horizon_T)
    se = sp.xi.std(ddof=1) / math.sqrt(n)
    dev = sp.xi.mean() - target
    return CheckResult(
        "bs-kernel-normalization",
        abs(dev) < 4 * se,
        f"E[xi]={sp.xi.mean():.6f} vs e^-rT={target:.6f} (dev {dev:+.2e}, SE {se:.2e})",
    )


def check_cev_kernel(n: int, n_steps: int, seed: int = 102) -> CheckResult:
    p = CevParams(mu=0.03, sigma=0.3, r=0.02, s0=1.0, horizon_T=10.0,
                  beta=-0.25, n_steps=n_steps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sp = cev_state_price(n, p, seed)
    target = math.exp(-0.2)
    se = sp.xi.std(ddof=1) / math.sqrt(n)
    dev = sp.xi.mean() - target
    return CheckResult(
        "cev-kernel-normalization",
        abs(dev) < 4 * se,
        f"E[xi]={sp.xi.mean():.6f} vs e^-rT={target:.6f} (dev {dev:+.2e}, SE {se:.2e})",
    )


def check_rearrangement(n_instances: int, seed: int = 103) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        n = int(rng.integers(2, 8))
        z = rng.normal(0, 3, n)
        xi = rng.lognormal(-0.3, 0.5, n)
        perm = rearrange_antimonotone(z, xi)
        algo = float(xi @ z[perm])
        brute = min(float(xi @ z[list(p)]) for p in itertools.permutations(range(n)))
        worst = max(worst, abs(algo - brute))
    return CheckResult(
        "rearrangement-optimality",
        worst < 1e-10,
        f"{n_instances} exhaustive instances, worst gap {worst:.2e}",
    )


def check_clayton_sampler(n: int, seed: int = 104) -> CheckResult:
    msgs = []
    ok = True
    for alpha in (1.0, 5.0, 20.0):
        s = sample(n, 3, ClaytonParams(alpha), seed)
        tau = kendalltau(s.values[:, 0], s.values[:, 1]).statistic
        expect = alpha / (alpha + 2.0)
        ks = kstest(s.values[:, 0], "uniform").statistic * math.sqrt(n)
        ok &= abs(tau - expect) < 0.02 and ks < KS_CRIT_1PCT
        msgs.append(f"a={alpha:g}: tau {tau:.3f}/{expect:.3f}, KS*sqrt(n) {ks:.2f}")
    return CheckResult("clayton-sampler", ok, "; ".join(msgs))


def check_cir_moments(n: int, seed: int = 105) -> CheckResult:
    points = [(-0.005, 2.25, 0.15, 1.0, 0.01), (2.0, 0.04, 0.30, 0.03, 0.25),
              (1.0, 0.02, 0.40, 0.05, 0.50)]
    rng = np.random.default_rng(seed)
    ok = True
    msgs = []
    for a, b, s_p, r0, dt in points:
        draws = sqrt_diffusion_step(np.full(n, r0), dt, a, b, s_p, rng)
        ead = math.exp(-a * dt)
        m_true = b + (r0 - b) * ead
        v_true = r0 * (s_p**2 / a) * (ead - ead**2) + b * (s_p**2 / (2 * a)) * (1 - ead) ** 2
        se_m = draws.std(ddof=1) / math.sqrt(n)
        se_v = ((draws - draws.mean()) ** 2).std(ddof=1) / math.sqrt(n)
        ok &= abs(draws.mean() - m_true) < 4 * se_m
        ok &= abs(draws.var(ddof=1) - v_true) < 4 * se_v
        msgs.append(f"a={a:g}: mean dev {draws.mean() - m_true:+.1e}, "
                    f"var dev {draws.var(ddof=1) - v_true:+.1e}")
    return CheckResult("cir-step-moments", ok, "; ".join(msgs))


def check_laplace_vs_mc(n_paths: int, n_steps: int, seed: int = 106,
                        rel_tol: float = 0.02) -> CheckResult:
    p = CevParams(mu=0.03, sigma=0.3, r=0.02, s0=1.0, horizon_T=1.0, beta=-0.25, n_steps=10)
    beta_p = -p.beta
    rng = np.random.default_rng(seed)
    dt = p.horizon_T / n_steps
    s = np.full(n_paths, p.s0)
    qv = np.zeros(n_paths)
    for _ in range(n_steps):
        s_pos = np.maximum(s, 0.0)
        qv += p.sigma**2 * s_pos ** (2 * beta_p) * dt
        s = s + p.sigma * s_pos ** (beta_p + 1.0) * math.sqrt(dt) * rng.standard_normal(n_paths)
    ok = True
    msgs = []
    for sv in (0.05, 0.1, 0.5):
        mc = float(np.exp(-sv * qv).mean())
        an = laplace_qv(sv, p, 0.0)
        rel = an / mc - 1.0
        ok &= abs(rel) < rel_tol
        msgs.append(f"s={sv:g}: {an:.5f} vs MC {mc:.5f} ({rel:+.2%})")
    ok &= abs(laplace_qv(0.0, p) - 1.0) < 1e-10
    return CheckResult("laplace-transform-vs-mc", ok, "; ".join(msgs))


def check_hedge_convergence(n_paths: int, coarse: int, fine: int,
                            seed: int = 107) -> CheckResult:
    from .hedge import LognormalHedgeParams, hedge_value, simulate_hedge

    target = TargetDistribution.from_mean_std(100.0, 40.0)
    hp = LognormalHedgeParams.from_target(target, BS_DEFAULT)
    paths = bs_paths(n_paths, BS_DEFAULT, fine, seed)
    rms_c = math.sqrt(float(np.mean(simulate_hedge(paths, hp, coarse) ** 2)))
    rms_f = math.sqrt(float(np.mean(simulate_hedge(paths, hp, fine) ** 2)))

    rng = np.random.default_rng(seed + 1)
    z = rng.standard_normal(max(n_paths * 10, 100_000))
    T = BS_DEFAULT.horizon_T
    s_T = BS_DEFAULT.s0 * np.exp((BS_DEFAULT.r - 0.5 * BS_DEFAULT.sigma**2) * T
                                 + BS_DEFAULT.sigma * math.sqrt(T) * z)
    disc = math.exp(-BS_DEFAULT.r * T) * hp.payoff(s_T)
    se = disc.std(ddof=1) / math.sqrt(disc.size)
    cap_dev = float(disc.mean()) - hedge_value(0.0, BS_DEFAULT.s0, hp)
    ok = rms_f < 0.5 * rms_c and abs(cap_dev) < 3 * se
    return CheckResult(
        "hedge-replication",
        ok,
        f"RMS {coarse} steps {rms_c:.4f} -> {fine} steps {rms_f:.4f} "
        f"(ratio {rms_f / rms_c:.3f}); capital dev {cap_dev:+.4f} (SE {se:.4f})",
    )


def check_decomposition(m: int, seed: int = 108) -> CheckResult:
    from .decompose import allocate

    target = TargetDistribution.from_mean_std(100.0, 40.0)
    pop = build_consumption(sample(m, 3, ClaytonParams(5.0), seed), [target] * 3).values
    z_tilde = build_consumption(
        sample(m, 3, ClaytonParams(5.0), seed + 1), [target] * 3
    ).values.sum(axis=1)
    res = allocate(pop, z_tilde, seed + 2)
    worst = float(np.max(np.abs(res.values.sum(axis=1) - z_tilde)))
    stats = [float(kstest(res.values[:, k], target.cdf).statistic) * math.sqrt(m)
             for k in range(3)]
    ok = worst == 0.0 and all(s < KS_CRIT_1PCT for s in stats)
    return CheckResult(
        "sum-decomposition",
        ok,
        f"row-sum gap {worst:.1e}; KS*sqrt(m) per column "
        + "/".join(f"{s:.2f}" for s in stats),
    )


def run_all(quick: bool = False) -> list[CheckResult]:
    if quick:
        sizes = dict(bs_n=100_000, cev_n=10_000, cev_steps=200, rearr=120,
                     clayton_n=20_000, cir_n=100_000, lap_paths=20_000,
                     lap_steps=400, hedge_paths=2_000, coarse=16, fine=128,
                     decomp_m=20_000)
    else:
        sizes = dict(bs_n=1_000_000, cev_n=100_000, cev_steps=1000, rearr=500,
                     clayton_n=100_000, cir_n=1_000_000, lap_paths=100_000,
                     lap_steps=2000, hedge_paths=10_000, coarse=32, fine=512,
                     decomp_m=100_000)
    lap_tol = 0.03 if quick else 0.02
    return [
        check_config_rejection(),
        check_bs_kernel(sizes["bs_n"]),
        check_cev_kernel(sizes["cev_n"], sizes["cev_steps"]),
        check_rearrangement(sizes["rearr"]),
        check_clayton_sampler(sizes["clayton_n"]),
        check_cir_moments(sizes["cir_n"]),
        check_laplace_vs_mc(sizes["lap_paths"], sizes["lap_steps"], rel_tol=lap_tol),
        check_hedge_convergence(sizes["hedge_paths"], sizes["coarse"], sizes["fine"]),
        check_decomposition(sizes["decomp_m"]),
    ]

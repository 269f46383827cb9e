"""Minimum-cost funding of a copula-linked consumption profile.

Pipeline: simulate the horizon pricing kernel, draw dependent uniforms,
push them through the per-period target quantiles, and rearrange the
scenario sums antimonotonically against the kernel. The rearranged cost
(1/n) sum_j xi_j z*_j is the Monte Carlo estimate of the cheapest way to
fund the chosen joint consumption law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .copula import ClaytonParams, CopulaSample, sample as copula_sample
from .market import BsParams, CevParams, StatePriceSample, bs_state_price, cev_state_price
from .targetdist import TargetDistribution

__all__ = [
    "ConsumptionMatrix",
    "CostResult",
    "FrontierPoint",
    "ScenarioSet",
    "build_consumption",
    "rearrange_antimonotone",
    "cost",
    "draw_scenarios",
    "efficient_cost",
    "frontier",
    "lognormal_plan_cost",
]

# sub-stream indices hung off the root seed, so kernel and copula draws
# are independent but jointly reproducible
_KERNEL_STREAM = 0
_COPULA_STREAM = 1


@dataclass(frozen=True)
class ConsumptionMatrix:
    """n scenarios x N periods of consumption draws with their row sums."""

    values: np.ndarray
    targets: tuple
    alpha: ClaytonParams | None
    row_sums: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.values.ndim != 2:
            raise ValueError("values must be an n x N matrix")
        object.__setattr__(self, "row_sums", self.values.sum(axis=1))

    @property
    def n_scenarios(self) -> int:
        return self.values.shape[0]

    @property
    def n_periods(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class CostResult:
    """Monte Carlo cost of a consumption plan against a kernel sample."""

    cost: float
    permutation: np.ndarray
    z_star: np.ndarray
    std_error: float


@dataclass(frozen=True)
class FrontierPoint:
    """One (risk, reward) point of the cost-efficient frontier at fixed budget.

    achieved_cost is the horizon-priced plan cost E[xi_T Z*]; the budget is
    time-0 capital, compounded at the risk-free rate to the horizon before
    it is matched against achieved_cost.
    """

    target_std: float
    per_period_mean: float
    achieved_cost: float
    budget: float
    budget_at_horizon: float


def build_consumption(u: CopulaSample, targets) -> ConsumptionMatrix:
    """Map dependent uniforms through per-period target quantiles."""
    targets = tuple(targets)
    if len(targets) != u.n_periods:
        raise ValueError(
            f"got {len(targets)} targets for {u.n_periods} copula columns"
        )
    cols = [t.quantile(u.values[:, k]) for k, t in enumerate(targets)]
    values = np.column_stack(cols)
    return ConsumptionMatrix(values=values, targets=targets, alpha=u.alpha)


def rearrange_antimonotone(z, xi) -> np.ndarray:
    """Permutation p with Z[p] antimonotone to xi: cheapest states get the most.

    Sorting is stable (value, then original index); runs of tied kernel
    values keep their assigned consumption draws in original index order,
    so a constant kernel returns the identity permutation.
    """
    z = np.asarray(z, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if z.shape != xi.shape or z.ndim != 1:
        raise ValueError(f"Z and xi must be 1-d with equal length, got {z.shape} vs {xi.shape}")
    order_xi = np.argsort(xi, kind="stable")
    order_z_desc = np.argsort(-z, kind="stable")

    perm = np.empty_like(order_xi)
    perm[order_xi] = order_z_desc
    # inside tied-kernel blocks any assignment has equal cost; restore the
    # original index order of the assigned draws for determinism
    xi_sorted = xi[order_xi]
    ties = np.nonzero(xi_sorted[1:] == xi_sorted[:-1])[0]
    if ties.size:
        block_start = 0
        n = xi.size
        while block_start < n:
            block_end = block_start + 1
            while block_end < n and xi_sorted[block_end] == xi_sorted[block_start]:
                block_end += 1
            if block_end - block_start > 1:
                rows = order_xi[block_start:block_end]
                perm[rows] = np.sort(perm[rows])
            block_start = block_end
    return perm


def cost(m: ConsumptionMatrix, kernel: StatePriceSample, rearranged: bool = True) -> CostResult:
    """Price the plan: (1/n) sum_j xi_j z*_j with z* the antimonotone rearrangement.

    With rearranged=False the raw scenario pairing is priced instead; the
    rearranged cost is never larger.
    """
    xi = kernel.xi
    if m.n_scenarios != xi.shape[0]:
        raise ValueError(
            f"scenario count mismatch: matrix has {m.n_scenarios}, kernel has {xi.shape[0]}"
        )
    if rearranged:
        perm = rearrange_antimonotone(m.row_sums, xi)
        z_star = m.row_sums[perm]
    else:
        perm = np.arange(xi.shape[0])
        z_star = m.row_sums
    products = xi * z_star
    n = products.shape[0]
    se = float(np.std(products, ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return CostResult(cost=float(products.mean()), permutation=perm, z_star=z_star, std_error=se)


# ----------------------------------------------------------------------
# full pipeline with common-random-number support
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioSet:
    """Frozen draws shared across evaluations: kernel values and copula z-scores.

    z_scores holds ndtri(u); a lognormal target with parameters (log_m,
    log_v) prices through exp(log_m + log_v * z) without re-inverting the
    uniforms, which makes sweeps and bisection cheap under common random
    numbers.
    """

    kernel: StatePriceSample
    uniforms: CopulaSample
    z_scores: np.ndarray

    @property
    def n_scenarios(self) -> int:
        return self.z_scores.shape[0]


def _model_kernel(model, n: int, seed) -> StatePriceSample:
    if isinstance(model, CevParams):
        return cev_state_price(n, model, seed)
    if isinstance(model, BsParams):
        return bs_state_price(n, model, seed)
    raise TypeError(f"unsupported market model {type(model).__name__}")


def draw_scenarios(
    model: BsParams,
    n: int,
    n_periods: int,
    alpha: ClaytonParams | None,
    seed: int,
    *,
    independent: bool = False,
) -> ScenarioSet:
    """Draw the kernel and copula samples from independent sub-streams of one seed."""
    root = np.random.SeedSequence(seed)
    kernel_seed, copula_seed = root.spawn(2)
    kernel = _model_kernel(model, n, kernel_seed)
    uniforms = copula_sample(n, n_periods, alpha, copula_seed, independent=independent)
    return ScenarioSet(kernel=kernel, uniforms=uniforms, z_scores=ndtri(uniforms.values))


def lognormal_plan_cost(sc: ScenarioSet, log_m: float, log_v: float) -> tuple[float, float]:
    """Rearranged cost of identical lognormal(log_m, log_v) targets on frozen draws."""
    z = np.exp(log_m + log_v * sc.z_scores).sum(axis=1)
    xi_sorted = np.sort(sc.kernel.xi)
    z_desc = -np.sort(-z)
    products = xi_sorted * z_desc
    return float(products.mean()), float(np.std(products, ddof=1) / math.sqrt(z.size))


def efficient_cost(
    targets,
    alpha: ClaytonParams | None,
    model: BsParams,
    n: int,
    seed: int,
    *,
    independent: bool = False,
    rearranged: bool = True,
) -> CostResult:
    """Full pipeline: kernel + copula + quantile transform + rearranged cost."""
    targets = tuple(targets)
    sc = draw_scenarios(model, n, len(targets), alpha, seed, independent=independent)
    matrix = build_consumption(sc.uniforms, targets)
    return cost(matrix, sc.kernel, rearranged=rearranged)


def frontier(
    budget: float,
    stds,
    alpha: ClaytonParams | None,
    model: BsParams,
    n: int,
    seed: int,
    *,
    n_periods: int = 10,
    cost_rtol: float = 1e-3,
    max_iter: int = 60,
    independent: bool = False,
    scenarios: ScenarioSet | None = None,
) -> list[FrontierPoint]:
    """Trace per-period expected consumption against target risk at fixed budget.

    For each std the per-period mean is found by bisection so that the
    horizon-priced plan cost matches the budget compounded at the risk-free
    rate to the horizon, |cost - budget e^{rT}| <= cost_rtol * budget e^{rT}.
    All evaluations share one frozen scenario set (common random numbers),
    and cost is strictly increasing in the mean, so the root is unique.
    A pre-drawn ScenarioSet may be supplied to share draws across calls.
    """
    if not (budget > 0.0):
        raise ValueError(f"budget must be positive, got {budget}")
    stds = [float(s) for s in stds]
    if any(s <= 0.0 for s in stds):
        raise ValueError("every std must be positive")

    sc = scenarios
    if sc is None:
        sc = draw_scenarios(model, n, n_periods, alpha, seed, independent=independent)
    horizon_budget = budget * math.exp(model.r * model.horizon_T)
    discount = math.exp(-model.r * model.horizon_T)
    lo0 = budget * discount / (n_periods * 5.0)
    hi0 = budget * 5.0 / (n_periods * discount)

    points: list[FrontierPoint] = []
    for std in stds:
        def plan_cost(mean: float) -> float:
            t = TargetDistribution.from_mean_std(mean, std)
            return lognormal_plan_cost(sc, t.log_m, t.log_v)[0]

        lo, hi = lo0, hi0
        f_lo, f_hi = plan_cost(lo), plan_cost(hi)
        if not (f_lo <= horizon_budget <= f_hi):
            raise ValueError(
                f"frontier root not bracketed for std={std}: cost({lo:.4g})={f_lo:.6g}, "
                f"cost({hi:.4g})={f_hi:.6g}, target {horizon_budget:.6g}"
            )
        mid = 0.5 * (lo + hi)
        achieved = plan_cost(mid)
        for _ in range(max_iter):
            if abs(achieved - horizon_budget) <= cost_rtol * horizon_budget:
                break
            if achieved < horizon_budget:
                lo = mid
            else:
                hi = mid
            mid = 0.5 * (lo + hi)
            achieved = plan_cost(mid)
        points.append(
            FrontierPoint(
                target_std=std,
                per_period_mean=mid,
                achieved_cost=achieved,
                budget=budget,
                budget_at_horizon=horizon_budget,
            )
        )
    return points

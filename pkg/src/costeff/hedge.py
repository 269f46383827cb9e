"""Replication of the cost-efficient terminal payoff in a Black-Scholes market.

When the stock carries a positive Sharpe ratio the cheapest claim with a
given law is an increasing function of the terminal price; for a lognormal
target it is the power payoff b * S_T^p. Its no-arbitrage price admits the
closed form E(t, S) = e^{-r(T-t)} b S^p g(t) with the accumulation factor
g(t) = exp[(p (r - sigma^2/2) + p^2 sigma^2 / 2)(T - t)], and delta hedging
that price function replicates the payoff. A discrete-rebalancing
self-financing simulator measures the tracking error of the strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .market import BsParams, bs_terminal_cdf
from .targetdist import TargetDistribution

__all__ = ["LognormalHedgeParams", "HedgeState", "target_payoff", "hedge_positions",
           "hedge_value", "simulate_hedge"]


@dataclass(frozen=True)
class HedgeState:
    """Snapshot of the replicating portfolio at one rebalance instant.

    psi counts bond units with B_0 = 1, so portfolio_value always equals
    delta * stock_price + psi * bond_price.
    """

    t: float
    delta: float
    psi: float
    stock_price: float
    bond_price: float
    portfolio_value: float

    @classmethod
    def at(cls, t: float, s_t: float, hp: "LognormalHedgeParams") -> "HedgeState":
        delta, psi_value = hedge_positions(t, s_t, hp)
        bond = math.exp(hp.market.r * t)
        return cls(
            t=t,
            delta=delta,
            psi=psi_value / bond,
            stock_price=s_t,
            bond_price=bond,
            portfolio_value=delta * s_t + psi_value,
        )


@dataclass(frozen=True)
class LognormalHedgeParams:
    """Closed-form power-payoff hedge b * S_T^sigma_prime for a lognormal target.

    sigma_prime = log_v / (sigma sqrt(T)) and
    b = exp(log_m - sigma_prime (ln s0 + (mu - sigma^2/2) T)), so that
    b S_T^sigma_prime equals the quantile-composed payoff
    F^{-1}(F_{S_T}(S_T)) identically.
    """

    b: float
    sigma_prime: float
    market: BsParams

    def __post_init__(self) -> None:
        if not (self.b > 0.0):
            raise ValueError(f"payoff coefficient b must be positive, got {self.b}")

    @classmethod
    def from_target(cls, target: TargetDistribution, market: BsParams) -> "LognormalHedgeParams":
        if not target.is_lognormal:
            raise ValueError("closed-form hedge parameters require a lognormal target")
        _require_positive_sharpe(market)
        T = market.horizon_T
        power = target.log_v / (market.sigma * math.sqrt(T))
        b = math.exp(
            target.log_m - power * (math.log(market.s0) + (market.mu - 0.5 * market.sigma**2) * T)
        )
        return cls(b=b, sigma_prime=power, market=market)

    def g(self, t: float) -> float:
        """Accumulation factor of the price function; g(T) = 1.

        Solves the pricing PDE for the power payoff, so the delta hedge is
        self-financing: g(t) = exp[(p(r - sigma^2/2) + p^2 sigma^2/2)(T-t)].
        """
        m = self.market
        p = self.sigma_prime
        rate = p * (m.r - 0.5 * m.sigma**2) + 0.5 * p**2 * m.sigma**2
        return math.exp(rate * (m.horizon_T - t))

    def payoff(self, s_T):
        return self.b * np.asarray(s_T, dtype=float) ** self.sigma_prime


def _require_positive_sharpe(market: BsParams) -> None:
    if market.theta <= 0.0:
        raise ValueError(
            "cost-efficient payoff hedging requires mu > r (positive Sharpe ratio); "
            f"got theta = {market.theta:.6g}"
        )


def target_payoff(s_T, d: TargetDistribution, market: BsParams):
    """Cost-efficient terminal payoff F^{-1}(F_{S_T}(s_T)) for an increasing claim.

    Defined for mu > r, where the kernel is anticomonotonic with S_T. For
    lognormal targets the closed form b * s_T^sigma_prime is used.
    """
    _require_positive_sharpe(market)
    s_arr = np.asarray(s_T, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError("terminal price must be positive")
    if d.is_lognormal:
        hp = LognormalHedgeParams.from_target(d, market)
        out = hp.payoff(s_arr)
    else:
        out = d.quantile(np.clip(bs_terminal_cdf(market, s_arr), 1e-15, 1.0 - 1e-15))
    return out if np.ndim(s_T) else float(out)


def hedge_positions(t: float, s_t: float, hp: LognormalHedgeParams) -> tuple[float, float]:
    """Stock units delta and bond-account value psi of the replicating portfolio.

    delta_t = e^{-r(T-t)} b p S^{p-1} g(t),
    psi_t   = e^{-r(T-t)} b (1-p) S^p g(t),
    and delta S + psi recombines to the price E_t = e^{-r(T-t)} b S^p g(t).
    """
    m = hp.market
    if not (0.0 <= t < m.horizon_T):
        raise ValueError(f"t must lie in [0, T), got t={t}, T={m.horizon_T}")
    if s_t <= 0.0:
        raise ValueError("stock price must be positive")
    p = hp.sigma_prime
    disc = math.exp(-m.r * (m.horizon_T - t)) * hp.b * hp.g(t)
    delta = disc * p * s_t ** (p - 1.0)
    psi = disc * (1.0 - p) * s_t**p
    return delta, psi


def hedge_value(t: float, s_t, hp: LognormalHedgeParams):
    """Price of the payoff at time t: e^{-r(T-t)} b s^p g(t)."""
    m = hp.market
    s_arr = np.asarray(s_t, dtype=float)
    out = math.exp(-m.r * (m.horizon_T - t)) * hp.b * hp.g(t) * s_arr**hp.sigma_prime
    return out if np.ndim(s_t) else float(out)


def simulate_hedge(paths: np.ndarray, hp: LognormalHedgeParams, rebalance_steps: int) -> np.ndarray:
    """Terminal tracking error of discrete self-financing delta hedging.

    paths is an (n, K+1) grid of stock prices on a uniform grid over [0, T]
    with K a multiple of rebalance_steps. The portfolio starts from the
    closed-form initial capital, holds delta units of stock between
    rebalances with the rest in bonds at rate r, and the error is terminal
    portfolio value minus the target payoff.
    """
    paths = np.asarray(paths, dtype=float)
    if paths.ndim != 2 or paths.shape[1] < 2:
        raise ValueError("paths must be an (n, K+1) grid with K >= 1")
    k_grid = paths.shape[1] - 1
    if rebalance_steps < 1 or k_grid % rebalance_steps != 0:
        raise ValueError(
            f"path grid of {k_grid} steps does not refine {rebalance_steps} rebalances"
        )
    m = hp.market
    T = m.horizon_T
    stride = k_grid // rebalance_steps
    dt = T * stride / k_grid
    growth = math.exp(m.r * dt)

    s = paths[:, 0]
    value = np.asarray(hedge_value(0.0, s, hp), dtype=float)
    for i in range(rebalance_steps):
        t = i * dt
        p = hp.sigma_prime
        disc = math.exp(-m.r * (T - t)) * hp.b * hp.g(t)
        delta = disc * p * s ** (p - 1.0)
        cash = value - delta * s
        s = paths[:, (i + 1) * stride]
        value = delta * s + cash * growth
    return value - hp.payoff(s)

"""Pricing-kernel simulation under Black-Scholes and CEV dynamics.

The kernel (state-price density) xi_T prices any horizon claim X as
E[xi_T X]. Under Black-Scholes xi_T is an explicit power of the terminal
stock price. Under CEV the discounted stock is evolved exactly through its
square-root-diffusion transform (noncentral chi-square transitions) and the
kernel is accumulated from the recovered Brownian increments; a closed-form
Laplace transform of the realized variance of the auxiliary process serves
as an analytic cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BsParams",
    "CevParams",
    "StatePriceSample",
    "bs_state_price",
    "bs_paths",
    "bs_terminal_cdf",
    "sqrt_diffusion_step",
    "cev_paths",
    "cev_state_price",
    "kummer_m",
    "laplace_qv",
    "SeriesConvergenceError",
]

S_FLOOR = 1e-12  # discounted price floor once a path absorbs at zero

BLACK_SCHOLES = "black-scholes"
CEV = "cev"


class SeriesConvergenceError(RuntimeError):
    """Raised when the hypergeometric series fails to converge under its cap."""


@dataclass(frozen=True)
class BsParams:
    """Black-Scholes market: drift mu, volatility sigma, rate r, spot s0, horizon T."""

    mu: float
    sigma: float
    r: float
    s0: float = 1.0
    horizon_T: float = 10.0

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not (self.s0 > 0.0):
            raise ValueError(f"s0 must be positive, got {self.s0}")
        if not (self.horizon_T > 0.0):
            raise ValueError(f"horizon_T must be positive, got {self.horizon_T}")

    @property
    def theta(self) -> float:
        """Sharpe ratio (mu - r) / sigma."""
        return (self.mu - self.r) / self.sigma


@dataclass(frozen=True)
class CevParams(BsParams):
    """CEV market dS = mu S dt + sigma S^{beta+1} dW, restricted to -1/2 < beta < 0.

    In that band beta_star = 2(beta+1) lies in (1, 2), the square-root
    transform r_t = S^{2-beta_star} is exactly simulable, and the kernel
    density is a uniformly integrable martingale.
    """

    beta: float = -0.25
    n_steps: int = 1000

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (-0.5 < self.beta < 0.0):
            raise ValueError(
                f"beta must lie in (-1/2, 0) so that 1 < beta_star < 2, got {self.beta}"
            )
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def beta_star(self) -> float:
        return 2.0 * (self.beta + 1.0)


@dataclass(frozen=True)
class StatePriceSample:
    """Simulated kernel values at the horizon plus the matching terminal prices."""

    xi: np.ndarray
    terminal_price: np.ndarray
    model_tag: str
    seed: int | np.random.SeedSequence

    def __post_init__(self) -> None:
        if np.any(self.xi <= 0.0):
            raise ValueError("state-price values must be strictly positive")


# ----------------------------------------------------------------------
# Black-Scholes
# ----------------------------------------------------------------------

def bs_state_price(n: int, p: BsParams, seed) -> StatePriceSample:
    """Draw n i.i.d. (xi_T, S_T) pairs under Black-Scholes.

    S_T = s0 exp((mu - sigma^2/2)T + sigma sqrt(T) Z) and
    xi_T = a (S_T/s0)^{-theta/sigma} with
    a = exp((theta/sigma)(mu - sigma^2/2)T - (r + theta^2/2)T), which makes
    E[xi_T] = e^{-rT}. For mu = r the kernel is the constant e^{-rT}.
    """
    if n < 1:
        raise ValueError(f"scenario count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    T = p.horizon_T
    drift = (p.mu - 0.5 * p.sigma**2) * T
    log_ret = drift + p.sigma * math.sqrt(T) * rng.standard_normal(n)
    s_T = p.s0 * np.exp(log_ret)
    power = p.theta / p.sigma
    a = math.exp(power * drift - (p.r + 0.5 * p.theta**2) * T)
    xi = a * np.exp(-power * log_ret)
    return StatePriceSample(xi=xi, terminal_price=s_T, model_tag=BLACK_SCHOLES, seed=seed)


def bs_paths(n: int, p: BsParams, n_steps: int, seed) -> np.ndarray:
    """Exact lognormal stock paths under the physical measure, shape (n, n_steps+1)."""
    if n < 1 or n_steps < 1:
        raise ValueError("need n >= 1 paths and n_steps >= 1 steps")
    rng = np.random.default_rng(seed)
    dt = p.horizon_T / n_steps
    z = rng.standard_normal((n, n_steps))
    increments = (p.mu - 0.5 * p.sigma**2) * dt + p.sigma * math.sqrt(dt) * z
    log_path = np.concatenate(
        [np.zeros((n, 1)), np.cumsum(increments, axis=1)], axis=1
    )
    return p.s0 * np.exp(log_path)


def bs_terminal_cdf(p: BsParams, s):
    """CDF of the terminal price S_T: lognormal(ln s0 + (mu - sigma^2/2)T, sigma^2 T)."""
    from scipy.special import ndtr

    s_arr = np.asarray(s, dtype=float)
    out = np.zeros_like(np.atleast_1d(s_arr), dtype=float)
    flat = np.atleast_1d(s_arr)
    pos = flat > 0.0
    m = math.log(p.s0) + (p.mu - 0.5 * p.sigma**2) * p.horizon_T
    sd = p.sigma * math.sqrt(p.horizon_T)
    out[pos] = ndtr((np.log(flat[pos]) - m) / sd)
    return float(out[0]) if s_arr.ndim == 0 else out.reshape(s_arr.shape)


# ----------------------------------------------------------------------
# square-root diffusion (CIR) exact transition
# ----------------------------------------------------------------------

def _sqrt_step_core(r_t, dt, a, a_times_b, sigma_p, rng):
    """Exact-in-distribution transition of dr = a(b - r)dt + sigma' sqrt(r) dW.

    Parameterized by (a, a*b) so the driftless-rate limit a -> 0 stays
    analytic: c -> sigma'^2 dt / 4 and lambda -> 4 r / (sigma'^2 dt).
    The chi-square degrees of freedom d = 4 a b / sigma'^2 select between
    the normal-plus-chi-square construction (d > 1) and the Poisson
    mixture (d <= 1); mixture components with df <= 0 carry the absorbed
    mass at zero and return exactly 0.
    """
    r_arr = np.atleast_1d(np.asarray(r_t, dtype=float))
    if np.any(r_arr < 0.0):
        raise ValueError("square-root diffusion state must be nonnegative")
    ad = a * dt
    if ad == 0.0:
        exp_ad = 1.0
        c = sigma_p**2 * dt / 4.0
    else:
        exp_ad = math.exp(-ad)
        c = sigma_p**2 * (-math.expm1(-ad)) / (4.0 * a)
    if c <= 0.0:
        raise ValueError(f"transition scale must be positive, got c={c}")
    lam = r_arr * (exp_ad / c)
    d = 4.0 * a_times_b / sigma_p**2

    if d > 1.0:
        z = rng.standard_normal(r_arr.shape)
        x = rng.chisquare(d - 1.0, r_arr.shape)
        out = c * ((z + np.sqrt(lam)) ** 2 + x)
    else:
        mix = rng.poisson(lam / 2.0)
        df = d + 2.0 * mix
        out = np.zeros_like(r_arr)
        alive = df > 0.0
        if np.any(alive):
            out[alive] = c * rng.chisquare(df[alive])
    return out


def sqrt_diffusion_step(r_t, dt: float, a: float, b: float, sigma_p: float, rng):
    """One exact transition of the square-root diffusion dr = a(b-r)dt + sigma' sqrt(r) dW."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if sigma_p <= 0.0:
        raise ValueError(f"sigma_p must be positive, got {sigma_p}")
    out = _sqrt_step_core(r_t, dt, a, a * b, sigma_p, rng)
    return out if np.ndim(r_t) else float(out[0])


# ----------------------------------------------------------------------
# CEV simulation via the square-root transform
# ----------------------------------------------------------------------

def _cev_coeffs(p: CevParams):
    """Square-root-diffusion coefficients for r_t = S_tilde^{2 - beta_star}."""
    q = 2.0 - p.beta_star  # = -2 beta, in (0, 1)
    a = -(p.mu - p.r) * q
    a_times_b = 0.5 * p.sigma**2 * q * (q - 1.0)
    sigma_p = p.sigma * q
    return q, a, a_times_b, sigma_p


def cev_paths(n: int, p: CevParams, seed):
    """Exact discounted-price paths, shape (n, n_steps+1), plus absorption mask.

    Evolves r_t = S_tilde^{2-beta_star} with the exact square-root
    transition and inverts S_tilde = r^{1/(2-beta_star)}. Paths whose state
    hits zero are frozen at the floor 1e-12 and reported through the mask.

    Returns (s_tilde_grid, absorbed) where absorbed marks paths that hit 0.
    Memory is O(n * n_steps); for kernel estimation at scale prefer
    cev_state_price, which streams the grid.
    """
    if n < 1:
        raise ValueError(f"scenario count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    q, a, ab, sigma_p = _cev_coeffs(p)
    dt = p.horizon_T / p.n_steps
    r_floor = S_FLOOR**q

    grid = np.empty((n, p.n_steps + 1))
    grid[:, 0] = p.s0
    r = np.full(n, p.s0**q)
    absorbed = np.zeros(n, dtype=bool)
    for i in range(p.n_steps):
        r = _sqrt_step_core(r, dt, a, ab, sigma_p, rng)
        hit = r <= 0.0
        absorbed |= hit
        r[hit] = r_floor
        grid[:, i + 1] = r ** (1.0 / q)
    if absorbed.any():
        warnings.warn(
            f"{int(absorbed.sum())} of {n} CEV paths absorbed at zero "
            f"(frozen at floor {S_FLOOR:g})",
            UserWarning,
            stacklevel=2,
        )
    return grid, absorbed


def cev_state_price(n: int, p: CevParams, seed) -> StatePriceSample:
    """Simulate the CEV kernel xi_T = e^{-rT} Y_T along exact discounted paths.

    Y_T = exp(-(mu-r)/sigma * int S~^{-beta} dW - 1/2 ((mu-r)/sigma)^2 int
    S~^{-2 beta} dt) accumulated with left-point sums; the Brownian
    increments are recovered from the discounted-price increments via
    dW = (dS~ - (mu-r) S~ dt) / (sigma S~^{beta+1}). For beta < 0 the
    density is a uniformly integrable martingale, so E[xi_T] = e^{-rT}.
    """
    if n < 1:
        raise ValueError(f"scenario count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    q, a, ab, sigma_p = _cev_coeffs(p)
    dt = p.horizon_T / p.n_steps
    r_floor = S_FLOOR**q
    theta_loc = (p.mu - p.r) / p.sigma
    drift_rate = p.mu - p.r

    r = np.full(n, p.s0**q)
    s_prev = np.full(n, p.s0)
    log_y = np.zeros(n)
    absorbed = np.zeros(n, dtype=bool)
    for _ in range(p.n_steps):
        r = _sqrt_step_core(r, dt, a, ab, sigma_p, rng)
        hit = r <= 0.0
        absorbed |= hit
        r[hit] = r_floor
        s_new = r ** (1.0 / q)
        if theta_loc != 0.0:
            # recovered Brownian increment on [t, t+dt] from the price move
            dw = (s_new - s_prev - drift_rate * s_prev * dt) / (
                p.sigma * s_prev ** (p.beta + 1.0)
            )
            s_pow = s_prev ** (-p.beta)
            log_y -= theta_loc * s_pow * dw + 0.5 * theta_loc**2 * s_pow**2 * dt
        s_prev = s_new
    if absorbed.any():
        warnings.warn(
            f"{int(absorbed.sum())} of {n} CEV paths absorbed at zero; their kernel "
            "contribution is frozen at the absorption value",
            UserWarning,
            stacklevel=2,
        )
    xi = np.exp(-p.r * p.horizon_T + log_y)
    terminal = s_prev * math.exp(p.r * p.horizon_T)
    return StatePriceSample(xi=xi, terminal_price=terminal, model_tag=CEV, seed=seed)


# ----------------------------------------------------------------------
# Kummer confluent hypergeometric M and the realized-variance Laplace transform
# ----------------------------------------------------------------------

def kummer_m(a: float, c: float, z: float, *, rtol: float = 1e-14, max_terms: int = 1000) -> float:
    """Confluent hypergeometric M(a, c, z) = sum_n (a)_n/(c)_n z^n/n!.

    Terms are summed until the running term drops below rtol relative to the
    partial sum. Negative z is routed through the Kummer transformation
    M(a, c, z) = e^z M(c-a, c, -z), whose series has no sign cancellation.
    """
    if c <= 0.0 and c == int(c):
        raise ValueError(f"c must not be a non-positive integer, got {c}")
    if z < 0.0:
        return math.exp(z) * kummer_m(c - a, c, -z, rtol=rtol, max_terms=max_terms)
    term = 1.0
    total = 1.0
    for n in range(1, max_terms + 1):
        term *= (a + n - 1.0) / (c + n - 1.0) * z / n
        total += term
        if abs(term) <= rtol * abs(total):
            return total
    raise SeriesConvergenceError(
        f"Kummer series did not converge within {max_terms} terms at "
        f"(a={a}, c={c}, z={z}); last term {term:.3e}"
    )


def laplace_qv(s: float, p: CevParams, t: float = 0.0) -> float:
    """Laplace transform E[exp(-s <log S'>_{[t,T]})] of the realized variance.

    S' is the driftless auxiliary CEV process with sign-flipped exponent
    beta' = -beta; its instantaneous variance is a quadratic-drift 3/2
    process, which yields the closed form
    Gamma(g-a)/Gamma(g) * x^a * M(a, g, -x) with x = 2/(eps^2 h_t),
    h_t = (T-t) sigma^2 s0^{-2 beta}, eps = 2 beta', and
    a = (1+sqrt(1+8s))/(4 beta'), g = sqrt(1+8s)/(2 beta') + 1.
    """
    if s < 0.0:
        raise ValueError(f"s must be nonnegative, got {s}")
    if not (0.0 <= t < p.horizon_T):
        raise ValueError(f"t must lie in [0, T), got {t}")
    beta_p = -p.beta  # > 0
    eps2 = 4.0 * beta_p**2
    h_t = (p.horizon_T - t) * p.sigma**2 * p.s0 ** (-2.0 * p.beta)
    root = math.sqrt(1.0 + 8.0 * s)
    alpha_s = (1.0 + root) / (4.0 * beta_p)
    gamma_s = root / (2.0 * beta_p) + 1.0
    diff = gamma_s - alpha_s
    if diff <= 0.0 and diff == int(diff):
        raise ValueError(
            f"gamma_s - alpha_s = {diff} hits a gamma-function pole at s={s}"
        )
    x = 2.0 / (eps2 * h_t)
    log_prefactor = math.lgamma(diff) - math.lgamma(gamma_s) + alpha_s * math.log(x)
    # M(alpha_s, gamma_s, -x) = e^{-x} M(diff, gamma_s, x); the transformed
    # series has positive terms, so it can be summed safely in log space
    return math.exp(log_prefactor + _log_kummer_scaled(diff, gamma_s, x))


def _log_kummer_scaled(a: float, c: float, x: float, *, max_terms: int = 10_000) -> float:
    """log(e^{-x} M(a, c, x)) for x >= 0 with a, c > 0, immune to overflow."""
    if x == 0.0:
        return 0.0  # M(a, c, 0) = 1
    log_term = -x
    log_total = log_term
    for n in range(1, max_terms + 1):
        log_term += math.log((a + n - 1.0) * x / ((c + n - 1.0) * n))
        log_total = float(np.logaddexp(log_total, log_term))
        if log_term - log_total < math.log(1e-16):
            return log_total
    raise SeriesConvergenceError(
        f"scaled Kummer series did not converge within {max_terms} terms at (a={a}, c={c}, x={x})"
    )

"""Split an exogenous total into coordinates with a prescribed joint law.

Given a scenario population for (X_1..X_N) and a vector z_tilde distributed
like the row sums, the recursion draws each coordinate from the empirical
conditional law of the next component given the running remainder, and sets
the final coordinate by subtraction so every row sums to its target exactly.
Conditional laws are estimated by k-nearest-neighbor windows on the
conditioning statistic with k = ceil(sqrt(m)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_2samp

__all__ = ["AllocationResult", "distributional_transform", "conditional_quantile", "allocate"]

_CHUNK_ROWS = 20_000  # bounds the (rows x k) gather buffers


@dataclass(frozen=True)
class AllocationResult:
    """Allocated matrix plus the audit trail of uniforms and partial remainders."""

    values: np.ndarray          # m x N, rows sum exactly to z_tilde
    z_tilde: np.ndarray
    uniforms_used: np.ndarray   # m x N: distributional-transform U, then V_1..V_{N-1}
    partial_remainders: np.ndarray  # m x (N-1): remainder after each recursion step


def distributional_transform(z, seed) -> np.ndarray:
    """Map z through h(z_i, U_i) = P[Z < z_i] + U_i P[Z = z_i] (empirical law of z).

    The output is uniform on (0, 1) in distribution, and the empirical
    quantile of z evaluated at the output recovers z element-wise.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("z must be a nonempty 1-d vector")
    rng = np.random.default_rng(seed)
    u = rng.random(z.size)
    sorted_z = np.sort(z)
    below = np.searchsorted(sorted_z, z, side="left") / z.size
    upto = np.searchsorted(sorted_z, z, side="right") / z.size
    return below + u * (upto - below)


def _window_quantile(x_sorted_by_s: np.ndarray, s_sorted: np.ndarray, s_values: np.ndarray,
                     v_values: np.ndarray, k: int) -> np.ndarray:
    """v-quantiles of X inside the k-nearest-neighbor window of each s value."""
    m = s_sorted.size
    pos = np.searchsorted(s_sorted, s_values)
    start = np.clip(pos - k // 2, 0, m - k)
    # quantile index inside a sorted window of size k (generalized inverse)
    q_idx = np.clip(np.ceil(v_values * k).astype(int) - 1, 0, k - 1)
    out = np.empty(s_values.size)
    for lo in range(0, s_values.size, _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, s_values.size)
        window = x_sorted_by_s[start[lo:hi, None] + np.arange(k)[None, :]]
        window.sort(axis=1)
        out[lo:hi] = window[np.arange(hi - lo), q_idx[lo:hi]]
    return out


def conditional_quantile(population, s: float, v: float) -> float:
    """Empirical conditional quantile of X given S ~= s from an (X, S) population.

    Uses the k = ceil(sqrt(m)) nearest neighbors of s in the S column and
    returns the v-quantile of their X values.
    """
    pop = np.asarray(population, dtype=float)
    if pop.ndim != 2 or pop.shape[1] != 2 or pop.shape[0] < 1:
        raise ValueError("population must be a nonempty m x 2 matrix of (X, S) pairs")
    if not (0.0 < v < 1.0):
        raise ValueError(f"v must lie in (0, 1), got {v}")
    m = pop.shape[0]
    k = min(math.ceil(math.sqrt(m)), m)
    order = np.argsort(pop[:, 1], kind="stable")
    s_sorted = pop[order, 1]
    x_by_s = pop[order, 0]
    return float(
        _window_quantile(x_by_s, s_sorted, np.array([s]), np.array([v]), k)[0]
    )


def allocate(population, z_tilde, seed) -> AllocationResult:
    """Build rows with the population's joint law summing exactly to z_tilde.

    Step j draws the component X_{N-j+1} conditionally on the partial sum
    X_1 + ... + X_{N-j+1} being near the current remainder, consuming one
    fresh uniform V_j per row; the last component is the final remainder.
    Output columns are reported in original component order, so column k
    follows the law of population column k.

    A two-sample KS mismatch between z_tilde and the population row sums is
    surfaced as a warning (the construction presumes equality in law).
    """
    pop = np.asarray(population, dtype=float)
    if pop.ndim != 2 or pop.shape[0] < 1 or pop.shape[1] < 2:
        raise ValueError("population must be m x N with N >= 2")
    z = np.asarray(z_tilde, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("z_tilde must be a nonempty vector")
    m_pop, n_comp = pop.shape
    m_out = z.size

    pop_sums = pop.sum(axis=1)
    ks = ks_2samp(pop_sums, z)
    if ks.pvalue < 0.01:
        warnings.warn(
            f"z_tilde law deviates from population row sums (two-sample KS "
            f"stat={ks.statistic:.4f}, p={ks.pvalue:.2e}); allocation proceeds "
            "but marginals may be off",
            UserWarning,
            stacklevel=2,
        )

    rng = np.random.default_rng(seed)
    u_transform = distributional_transform(z, rng.integers(2**63))
    v_draws = rng.random((m_out, n_comp - 1))

    k = min(math.ceil(math.sqrt(m_pop)), m_pop)
    prefix = np.cumsum(pop, axis=1)  # prefix[:, c] = X_1 + ... + X_{c+1}

    values = np.empty((m_out, n_comp))
    partials = np.empty((m_out, n_comp - 1))
    remainder = z.copy()
    for j in range(n_comp - 1):
        comp = n_comp - 1 - j          # component X_{comp+1} in 0-based terms
        cond_stat = prefix[:, comp]    # law of X_1 + ... + X_{comp+1}
        order = np.argsort(cond_stat, kind="stable")
        drawn = _window_quantile(
            pop[order, comp], cond_stat[order], remainder, v_draws[:, j], k
        )
        values[:, comp] = drawn
        remainder = remainder - drawn
        partials[:, j] = remainder
    values[:, 0] = remainder

    _force_exact_row_sums(values, z)
    uniforms = np.column_stack([u_transform, v_draws])
    return AllocationResult(
        values=values, z_tilde=z, uniforms_used=uniforms, partial_remainders=partials
    )


def _scan_adjust(values: np.ndarray, target: np.ndarray, rows: np.ndarray,
                 span: int = 12) -> np.ndarray:
    """Try col-0 candidates within +-span ulps; fix what hits, return rows still off."""
    if rows.size == 0:
        return rows
    sub = values[rows]
    tgt = target[rows]
    base = sub[:, 0] + (tgt - sub.sum(axis=1))  # residual folded in once
    lo_c = base.copy()
    hi_c = base.copy()
    solved = np.zeros(rows.size, dtype=bool)
    answer = base.copy()
    candidates = [base]
    for _ in range(span):
        lo_c = np.nextafter(lo_c, -np.inf)
        hi_c = np.nextafter(hi_c, np.inf)
        candidates.extend([lo_c.copy(), hi_c.copy()])
    for cand in candidates:
        sub[:, 0] = cand
        hit = (sub.sum(axis=1) == tgt) & ~solved
        answer[hit] = cand[hit]
        solved |= hit
        if solved.all():
            break
    values[rows, 0] = np.where(solved, answer, values[rows, 0])
    return rows[~solved]


def _force_exact_row_sums(values: np.ndarray, target: np.ndarray) -> None:
    """Make np.sum(values, axis=1) match the target bitwise on every row.

    The last constructed coordinate is a chain of subtractions, so the
    recomputed float sum can land a few ulps off. A candidate scan on the
    subtraction column closes almost every row; rows whose rounding lattice
    skips the target (possible under round-to-nearest-even) get a one-ulp
    shift of a drawn column, which moves the lattice, and are rescanned.
    The shifts are far below the statistical resolution of the draws.
    """
    resid = target - values.sum(axis=1)
    bad = np.nonzero(resid)[0]
    if bad.size == 0:
        return
    bad = _scan_adjust(values, target, bad)
    col = 1
    while bad.size and col < values.shape[1]:
        for _ in range(4):
            if bad.size == 0:
                break
            up = target[bad] > values[bad].sum(axis=1)
            values[bad, col] = np.nextafter(
                values[bad, col], np.where(up, np.inf, -np.inf)
            )
            bad = _scan_adjust(values, target, bad)
        col += 1
    if bad.size:
        raise ArithmeticError(f"{bad.size} row sums failed to close bitwise")

"""Target consumption distributions given as CDF/quantile pairs.

The workhorse family is the lognormal, parameterized either by its true
moments (mean, std), by its log-scale parameters (log_m, log_v), or by a
fixed scale exp(log_m) together with a requested distribution std. An
empirical kind backed by a sorted sample vector covers degenerate and
user-supplied targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = ["TargetDistribution"]

LOGNORMAL_BY_MOMENTS = "lognormal-by-moments"
LOGNORMAL_BY_LOGPARAMS = "lognormal-by-logparams"
EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TargetDistribution:
    """One per-period consumption law, exposed through cdf and quantile.

    For continuous kinds quantile and cdf are mutual inverses on (0, 1);
    for the empirical kind quantile is the generalized (left-continuous)
    inverse of the right-continuous step CDF.
    """

    kind: str
    log_m: float = float("nan")
    log_v: float = float("nan")
    points: np.ndarray | None = field(default=None, compare=False)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_mean_std(cls, mean: float, std: float) -> "TargetDistribution":
        """Lognormal with distribution mean `mean` and distribution std `std`."""
        if not (mean > 0.0) or not (std > 0.0):
            raise ValueError(f"mean and std must be positive, got mean={mean}, std={std}")
        log_v = math.sqrt(math.log1p((std / mean) ** 2))
        log_m = math.log(mean) - 0.5 * log_v**2
        return cls(LOGNORMAL_BY_MOMENTS, log_m=log_m, log_v=log_v)

    @classmethod
    def from_log_params(cls, log_m: float, log_v: float) -> "TargetDistribution":
        """Lognormal exp(N(log_m, log_v^2))."""
        if not (log_v > 0.0):
            raise ValueError(f"log_v must be positive, got {log_v}")
        return cls(LOGNORMAL_BY_LOGPARAMS, log_m=float(log_m), log_v=float(log_v))

    @classmethod
    def from_scale_std(cls, scale: float, std: float) -> "TargetDistribution":
        """Lognormal with fixed scale (median) exp(log_m)=scale and distribution std `std`.

        Solves scale^2 * e^{v^2} (e^{v^2} - 1) = std^2 for the log volatility,
        so sweeping `std` moves only the shape parameter while the log-scale
        location stays put.
        """
        if not (scale > 0.0) or not (std > 0.0):
            raise ValueError(f"scale and std must be positive, got scale={scale}, std={std}")
        ratio2 = (std / scale) ** 2
        # e^{v^2} is the positive root of y(y-1) = ratio2
        y = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * ratio2))
        log_v = math.sqrt(math.log(y))
        return cls(LOGNORMAL_BY_LOGPARAMS, log_m=math.log(scale), log_v=log_v)

    @classmethod
    def from_samples(cls, points) -> "TargetDistribution":
        pts = np.sort(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise ValueError("empirical target needs at least one sample point")
        return cls(EMPIRICAL, points=pts)

    @classmethod
    def degenerate(cls, value: float) -> "TargetDistribution":
        """Point mass at `value` (empirical with a single atom)."""
        return cls.from_samples([value])

    # ------------------------------------------------------------------
    # distribution interface
    # ------------------------------------------------------------------

    @property
    def is_lognormal(self) -> bool:
        return self.kind in (LOGNORMAL_BY_MOMENTS, LOGNORMAL_BY_LOGPARAMS)

    @property
    def mean(self) -> float:
        if self.is_lognormal:
            return math.exp(self.log_m + 0.5 * self.log_v**2)
        return float(np.mean(self.points))

    @property
    def std(self) -> float:
        if self.is_lognormal:
            v2 = self.log_v**2
            return math.exp(self.log_m + 0.5 * v2) * math.sqrt(math.expm1(v2))
        return float(np.std(self.points))

    def quantile(self, p):
        """Generalized inverse CDF; p must lie strictly inside (0, 1)."""
        scalar = np.ndim(p) == 0
        p_arr = np.atleast_1d(np.asarray(p, dtype=float))
        if np.any(p_arr <= 0.0) or np.any(p_arr >= 1.0):
            raise ValueError("quantile probability must lie in the open interval (0, 1)")
        if self.is_lognormal:
            out = np.exp(self.log_m + self.log_v * ndtri(p_arr))
        else:
            n = self.points.size
            idx = np.ceil(p_arr * n).astype(int) - 1
            out = self.points[np.clip(idx, 0, n - 1)]
        return float(out[0]) if scalar else out.reshape(np.shape(p))

    def cdf(self, x):
        """Right-continuous CDF evaluated at x."""
        scalar = np.ndim(x) == 0
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if self.is_lognormal:
            out = np.zeros_like(x_arr, dtype=float)
            pos = x_arr > 0.0
            out[pos] = ndtr((np.log(x_arr[pos]) - self.log_m) / self.log_v)
        else:
            out = np.searchsorted(self.points, x_arr, side="right") / self.points.size
        return float(out[0]) if scalar else out.reshape(np.shape(x))

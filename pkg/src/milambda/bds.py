"""BDS test of the i.i.d. hypothesis via correlation integrals.

The statistic follows Broock, Dechert, Scheinkman and LeBaron (1996): the
effect ``C_m - C_1**m`` scaled by ``sqrt(n)`` and the asymptotic standard
deviation built from the one-dimensional correlation integral ``C`` and the
triple-match fraction ``K``. Like Kanzler's reference code, ``C`` and ``K``
for the variance use the whole series, while ``C_1`` in the effect uses only
the ``N - m + 1`` observations that end a window.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._kernels import pair_counts
from .core_stats import as_series
from .errors import InvalidParameter, TooShort, ZeroVariance

__all__ = [
    "BdsConfig",
    "BdsResult",
    "correlation_integral",
    "bds_statistic",
    "bds_variance",
    "bds_residuals",
]


@dataclass(frozen=True)
class BdsConfig:
    """Embedding dimension and distance threshold.

    With ``absolute=False`` the threshold is ``eta_multiplier`` times the
    sample standard deviation of the series; otherwise it is used as is.
    """

    embedding: int = 2
    eta_multiplier: float = 0.5
    absolute: bool = False

    def __post_init__(self):
        if int(self.embedding) != self.embedding or self.embedding < 2:
            raise InvalidParameter(f"embedding must be an integer >= 2, got {self.embedding}")
        if not self.eta_multiplier > 0:
            raise InvalidParameter(f"eta must be positive, got {self.eta_multiplier}")


@dataclass(frozen=True)
class BdsResult:
    embedding: int
    epsilon: float
    statistic: float
    p_value: float
    c1: float
    cm: float
    k: float
    n: int

    def rejects(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


def _pairs(k: int) -> int:
    return k * (k - 1) // 2


def correlation_integral(s, m: int, epsilon: float) -> float:
    """Fraction of pairs of length-`m` windows within `epsilon` in max-norm."""
    s = as_series(s)
    m = int(m)
    if m < 1:
        raise InvalidParameter("embedding must be >= 1")
    if not epsilon > 0:
        raise InvalidParameter("epsilon must be positive")
    if s.size - m + 1 < 2:
        raise TooShort(f"series of length {s.size} has fewer than two windows of length {m}")
    _, _, close_windows, _ = pair_counts(s, epsilon, m)
    return close_windows / _pairs(s.size - m + 1)


def bds_variance(c: float, k: float, m: int) -> float:
    """Asymptotic variance of ``sqrt(n) * (C_m - C_1**m)`` under i.i.d."""
    cross = sum(k ** (m - j) * c ** (2 * j) for j in range(1, m))
    return 4.0 * (
        k**m
        + 2.0 * cross
        + (m - 1) ** 2 * c ** (2 * m)
        - m**2 * k * c ** (2 * m - 2)
    )


def bds_statistic(s, config: BdsConfig | None = None) -> BdsResult:
    """BDS statistic and two-sided normal p-value for the series `s`."""
    config = config or BdsConfig()
    s = as_series(s)
    m = int(config.embedding)
    n_full = s.size
    nobs = n_full - m + 1
    if nobs < 3 or n_full < 3:
        raise TooShort(f"series of length {n_full} is too short for embedding {m}")
    if n_full < 200:
        warnings.warn(
            f"BDS p-values are asymptotic; {n_full} observations is below the 200 recommended",
            RuntimeWarning,
            stacklevel=2,
        )

    if config.absolute:
        eps = float(config.eta_multiplier)
    else:
        sd = float(np.std(s, ddof=1))
        if sd == 0.0:
            raise ZeroVariance("series is constant")
        eps = config.eta_multiplier * sd

    close_all, close_tail, close_windows, rows = pair_counts(s, eps, m)
    c_full = close_all / _pairs(n_full)
    rows = rows.astype(np.float64)
    k = float(np.dot(rows, rows - 1.0)) / (n_full * (n_full - 1.0) * (n_full - 2.0))
    c1 = close_tail / _pairs(nobs)
    cm = close_windows / _pairs(nobs)

    var = bds_variance(c_full, k, m)
    if not var > 0:
        raise ZeroVariance(f"BDS variance estimate is {var}; threshold {eps} is degenerate")
    stat = math.sqrt(nobs) * (cm - c1**m) / math.sqrt(var)
    p = float(2.0 * ndtr(-abs(stat)))
    return BdsResult(
        embedding=m,
        epsilon=eps,
        statistic=float(stat),
        p_value=min(1.0, p),
        c1=c1,
        cm=cm,
        k=k,
        n=n_full,
    )


def bds_residuals(x, residuals, config: BdsConfig | None = None,
                  ordering: str = "x") -> BdsResult:
    """BDS test on regression residuals.

    With ``ordering="x"`` the residuals are arranged by increasing regressor
    value (ties by position) before testing, which turns misfit curvature into
    serial dependence the test can see. ``ordering="index"`` tests them in
    observation order, appropriate for genuine time series.
    """
    z = as_series(residuals, "residuals")
    if ordering == "x":
        x = as_series(x, "x")
        if x.size != z.size:
            raise InvalidParameter("x and residuals must have equal length")
        z = z[np.argsort(x, kind="stable")]
    elif ordering != "index":
        raise InvalidParameter(f"ordering must be 'x' or 'index', got {ordering!r}")
    return bds_statistic(z, config)

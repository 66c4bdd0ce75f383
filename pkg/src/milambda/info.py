"""Equal-frequency discretization and histogram entropy / mutual information.

All logarithms are natural; every value is in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core_stats import as_series
from .errors import (
    AlreadyCorrected,
    CountMismatch,
    InvalidParameter,
    InvalidProbabilities,
    LengthMismatch,
    PerfectCorrelation,
    TooFewPoints,
    TooShort,
)

__all__ = [
    "MM_DIVISOR",
    "DiscretizedSeries",
    "JointHistogram",
    "EntropyEstimate",
    "default_bins",
    "equal_frequency_bins",
    "plugin_entropy",
    "miller_madow",
    "joint_histogram",
    "entropy_of",
    "mutual_information",
    "gaussian_mi",
    "binary_correlation_function",
    "binary_mi_approx",
    "lagged_binary_mi",
]

#: Denominator multiplier of the Miller-Madow term ``(m - 1) / (MM_DIVISOR * n)``.
#: 2 is the classical correction; 1 doubles it.
MM_DIVISOR = 2.0


@dataclass(frozen=True)
class DiscretizedSeries:
    labels: np.ndarray
    bin_count: int
    boundaries: np.ndarray  # (bin_count, 2) array of [min, max] per bin

    def __len__(self) -> int:
        return self.labels.size

    def occupancy(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.bin_count)


@dataclass(frozen=True)
class JointHistogram:
    counts: np.ndarray  # (m_x, m_y) int64
    n: int

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    nonempty_bins: int
    corrected: bool
    n: int


def default_bins(n: int) -> int:
    """``min(50, max(5, floor(sqrt(n) / 2)))``; 50 at n = 10,000."""
    return min(50, max(5, math.isqrt(int(n)) // 2))


def equal_frequency_bins(s, m: int) -> DiscretizedSeries:
    """Assign each value one of `m` bins holding (nearly) equal counts.

    Values are ordered by ``(value, original index)`` and the sorted position
    ``p`` goes to bin ``p * m // N``, so occupancies differ by at most one and
    runs of tied values are split across a boundary in index order.
    """
    s = as_series(s)
    n = s.size
    m = int(m)
    if m < 2:
        raise InvalidParameter(f"need at least 2 bins, got {m}")
    if n < m:
        raise TooFewPoints(f"{n} points cannot fill {m} equal-frequency bins")
    order = np.argsort(s, kind="stable")
    sorted_labels = (np.arange(n, dtype=np.int64) * m) // n
    labels = np.empty(n, dtype=np.int64)
    labels[order] = sorted_labels
    sv = s[order]
    first = np.searchsorted(sorted_labels, np.arange(m), side="left")
    last = np.searchsorted(sorted_labels, np.arange(m), side="right") - 1
    boundaries = np.column_stack([sv[first], sv[last]])
    return DiscretizedSeries(labels=labels, bin_count=m, boundaries=boundaries)


def _entropy_from_counts(counts: np.ndarray, n: int) -> tuple[float, int]:
    # sorting makes the sum independent of bin labelling
    c = np.sort(counts[counts > 0]).astype(np.float64)
    p = c / n
    h = float(-np.sum(p * np.log(p)))
    return max(h, 0.0), int(c.size)


def plugin_entropy(counts, n: int | None = None) -> EntropyEstimate:
    """Maximum-likelihood (plug-in) entropy of a histogram."""
    c = np.asarray(counts)
    if c.size and (np.any(c < 0) or not np.all(np.equal(np.mod(c, 1), 0))):
        raise CountMismatch("counts must be non-negative integers")
    c = c.astype(np.int64).ravel()
    total = int(c.sum())
    if n is None:
        n = total
    if total != n or n < 1:
        raise CountMismatch(f"counts sum to {total}, expected n={n} >= 1")
    value, nonempty = _entropy_from_counts(c, n)
    return EntropyEstimate(value=value, nonempty_bins=nonempty, corrected=False, n=int(n))


def miller_madow(e: EntropyEstimate, divisor: float = MM_DIVISOR) -> EntropyEstimate:
    """Add ``(m - 1) / (divisor * n)`` with ``m`` the number of non-empty bins."""
    if e.corrected:
        raise AlreadyCorrected("estimate already carries a Miller-Madow correction")
    if divisor <= 0:
        raise ValueError("divisor must be positive")
    bump = (e.nonempty_bins - 1) / (divisor * e.n)
    return replace(e, value=e.value + bump, corrected=True)


def joint_histogram(dx: DiscretizedSeries, dy: DiscretizedSeries) -> JointHistogram:
    if len(dx) != len(dy):
        raise LengthMismatch(f"{len(dx)} x labels vs {len(dy)} y labels")
    mx, my = dx.bin_count, dy.bin_count
    flat = np.bincount(dx.labels * my + dy.labels, minlength=mx * my)
    return JointHistogram(counts=flat.reshape(mx, my), n=len(dx))


def entropy_of(d: DiscretizedSeries, correction: bool = True,
               divisor: float = MM_DIVISOR) -> EntropyEstimate:
    e = plugin_entropy(d.occupancy(), len(d))
    return miller_madow(e, divisor) if correction else e


def mutual_information(dx: DiscretizedSeries, dy: DiscretizedSeries,
                       correction: bool = True, divisor: float = MM_DIVISOR) -> float:
    """``H(X) + H(Y) - H(X, Y)`` from binned data, floored at zero.

    With `correction` each of the three entropies gets its own Miller-Madow
    term, so the net adjustment is ``-(m_xy - m_x - m_y + 1) / (divisor * N)``.
    """
    if len(dx) != len(dy):
        raise LengthMismatch(f"{len(dx)} x labels vs {len(dy)} y labels")
    n = len(dx)
    joint = joint_histogram(dx, dy)
    hx = plugin_entropy(joint.row_sums(), n)
    hy = plugin_entropy(joint.col_sums(), n)
    hxy = plugin_entropy(joint.counts, n)
    if correction:
        hx, hy, hxy = (miller_madow(h, divisor) for h in (hx, hy, hxy))
    return max(0.0, (hx.value + hy.value) - hxy.value)


def gaussian_mi(rho: float) -> float:
    """Mutual information of a bivariate normal with correlation `rho`."""
    rho = float(rho)
    if not abs(rho) < 1.0:
        raise PerfectCorrelation(f"|rho| = {abs(rho)} gives infinite mutual information")
    return -0.5 * math.log1p(-rho * rho)


def _binary(seq) -> np.ndarray:
    s = np.asarray(seq)
    if s.ndim != 1 or not np.all((s == 0) | (s == 1)):
        raise InvalidProbabilities("sequence symbols must be 0 or 1")
    return s.astype(np.float64)


def binary_correlation_function(seq, d: int) -> float:
    """Lag-`d` autocovariance ``E[s_t s_{t+d}] - P1**2`` of a 0/1 sequence."""
    s = _binary(seq)
    d = int(d)
    if d < 1:
        raise ValueError("lag must be a positive integer")
    if s.size <= d:
        raise TooShort(f"sequence of length {s.size} has no pairs at lag {d}")
    p1 = s.mean()
    return float(np.mean(s[:-d] * s[d:]) - p1 * p1)


def binary_mi_approx(gamma: float, p0: float, p1: float) -> float:
    """Small-correlation approximation ``0.5 * (gamma / (p0 * p1)) ** 2``.

    Only meaningful when ``|gamma / (p0 * p1)|`` is small; that is not checked.
    """
    if not (p0 > 0 and p1 > 0) or abs(p0 + p1 - 1.0) > 1e-12:
        raise InvalidProbabilities(f"p0={p0}, p1={p1} must be positive and sum to 1")
    return 0.5 * (gamma / (p0 * p1)) ** 2


def lagged_binary_mi(seq, d: int) -> float:
    """Plug-in mutual information between ``s_t`` and ``s_{t+d}`` (2x2 table)."""
    s = _binary(seq).astype(np.int64)
    d = int(d)
    if s.size <= d:
        raise TooShort(f"sequence of length {s.size} has no pairs at lag {d}")
    a, b = s[:-d], s[d:]
    n = a.size
    joint = np.bincount(2 * a + b, minlength=4)
    hx, _ = _entropy_from_counts(np.bincount(a, minlength=2), n)
    hy, _ = _entropy_from_counts(np.bincount(b, minlength=2), n)
    hxy, _ = _entropy_from_counts(joint, n)
    return max(0.0, hx + hy - hxy)

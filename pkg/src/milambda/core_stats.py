"""Sample moments, correlation coefficients and polynomial least squares."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantSeries,
    DegenerateInput,
    LengthMismatch,
    NonFiniteInput,
    SingularDesign,
)

__all__ = [
    "PairedSample",
    "RegressionFit",
    "as_series",
    "covariance",
    "pearson",
    "spearman",
    "midranks",
    "fit_polynomial",
]


def as_series(values, name: str = "series") -> np.ndarray:
    """Return `values` as a 1-d float64 array, rejecting NaN and infinities."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DegenerateInput(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or infinite values")
    return arr


def _pair(x, y, min_n: int = 2) -> tuple[np.ndarray, np.ndarray]:
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.shape != y.shape:
        raise LengthMismatch(f"x has {x.size} values, y has {y.size}")
    if x.size < min_n:
        raise DegenerateInput(f"need at least {min_n} observations, got {x.size}")
    return x, y


@dataclass(frozen=True)
class PairedSample:
    """Aligned observations ``(x[i], y[i])``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = _pair(self.x, self.y, min_n=3)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.x.size

    @property
    def n(self) -> int:
        return self.x.size


def covariance(x, y) -> float:
    """Unbiased sample covariance, ``sum((x - xbar) * (y - ybar)) / (N - 1)``."""
    x, y = _pair(x, y)
    return float(np.dot(x - x.mean(), y - y.mean()) / (x.size - 1))


def pearson(x, y) -> float:
    """Product-moment correlation, clamped to [-1, 1].

    Computed symmetrically so ``pearson(x, y) == pearson(y, x)`` holds
    bit-for-bit.
    """
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantSeries("correlation is undefined for a constant series")
    r = np.dot(dx, dy) / (np.sqrt(sxx) * np.sqrt(syy))
    return float(min(1.0, max(-1.0, r)))


def midranks(values) -> np.ndarray:
    """Ranks starting at 1, ties receiving the mean of the ranks they span."""
    v = as_series(values)
    order = np.argsort(v, kind="stable")
    sv = v[order]
    # boundaries of runs of equal values in sorted order
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    ends = np.r_[starts[1:], sv.size]
    run_rank = (starts + ends + 1) / 2.0
    ranks = np.empty(v.size, dtype=np.float64)
    ranks[order] = np.repeat(run_rank, ends - starts)
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation (Pearson on midranks)."""
    x, y = _pair(x, y)
    return pearson(midranks(x), midranks(y))


@dataclass(frozen=True)
class RegressionFit:
    """Result of :func:`fit_polynomial`.

    `coefficients` are in the centred basis ``(x - offset) ** j`` for
    ``j = 0..order``; use :meth:`raw_coefficients` for powers of ``x`` itself.
    """

    order: int
    coefficients: np.ndarray
    offset: float
    fitted: np.ndarray
    residuals: np.ndarray
    standard_errors: np.ndarray

    def predict(self, x) -> np.ndarray:
        xc = as_series(x, "x") - self.offset
        return np.vander(xc, self.order + 1, increasing=True) @ self.coefficients

    def raw_coefficients(self) -> np.ndarray:
        """Coefficients of ``1, x, ..., x**order`` (intercept first)."""
        # expand sum_j c_j (x - o)^j into powers of x
        poly = np.polynomial.Polynomial(self.coefficients)
        shifted = poly(np.polynomial.Polynomial([-self.offset, 1.0]))
        out = np.zeros(self.order + 1)
        out[: shifted.coef.size] = shifted.coef
        return out

    @property
    def rss(self) -> float:
        return float(np.dot(self.residuals, self.residuals))


def fit_polynomial(sample: PairedSample, order: int = 1) -> RegressionFit:
    """Ordinary least squares of ``y`` on ``1, x, ..., x**order``.

    The design matrix is built from ``x - mean(x)`` and solved through a QR
    decomposition; fitted values and residuals do not depend on the basis.
    """
    if int(order) != order or order < 1:
        raise DegenerateInput(f"order must be a positive integer, got {order!r}")
    order = int(order)
    x, y = sample.x, sample.y
    n = x.size
    if n <= order + 1:
        raise DegenerateInput(f"order {order} fit needs more than {order + 1} points, got {n}")

    offset = float(x.mean())
    xc = x - offset
    scale = float(np.max(np.abs(xc)))
    if scale == 0.0:
        raise SingularDesign("x is constant")
    # column scaling keeps the triangular factor well conditioned
    design = np.vander(xc / scale, order + 1, increasing=True)
    q, r = np.linalg.qr(design, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-12 * diag.max() * np.sqrt(n):
        raise SingularDesign(f"design matrix for order {order} is rank deficient")

    qty = q.T @ y
    beta = np.linalg.solve(r, qty)  # r is triangular and tiny, (order+1)^2
    fitted = q @ qty
    residuals = y - fitted

    dof = n - order - 1
    sigma2 = float(np.dot(residuals, residuals)) / dof
    rinv = np.linalg.inv(r)
    se = np.sqrt(sigma2 * np.sum(rinv * rinv, axis=1))

    powers = scale ** np.arange(order + 1)
    return RegressionFit(
        order=order,
        coefficients=beta / powers,
        offset=offset,
        fitted=fitted,
        residuals=residuals,
        standard_errors=se / powers,
    )

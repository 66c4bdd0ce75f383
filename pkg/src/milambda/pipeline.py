"""Share of dependence explained by a fitted polynomial.

The procedure:

1. regress ``y`` on a polynomial in ``x`` and keep the residuals ``z``;
2. estimate ``I = I(x, y)`` from equal-frequency histograms;
3. map ``z`` onto the empirical distribution of ``y`` by rank substitution,
   giving ``y'`` with exactly the marginal of ``y``;
4. estimate ``I' = I(x, y')`` with the same ``x`` bins and report
   ``Lambda = 1 - I' / I``.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .core_stats import PairedSample, as_series, fit_polynomial, pearson
from .errors import ConstantSeries, ConstantVariable, InvalidParameter, LengthMismatch, NoDependence
from .info import MM_DIVISOR, default_bins, equal_frequency_bins, mutual_information

__all__ = [
    "LambdaConfig",
    "LambdaReport",
    "quantile_transform",
    "compute_lambda",
    "lambda_from_residuals",
    "lambda_profile",
]

MAX_PROFILE_ORDER = 6


@dataclass(frozen=True)
class LambdaConfig:
    """Estimator settings.

    bins
        Equal-frequency bins per axis, or ``"auto"`` for
        :func:`milambda.info.default_bins`.
    model_order
        Degree of the fitted polynomial.
    correction
        Apply the Miller-Madow term to each entropy.
    mm_divisor
        The correction is ``(m - 1) / (mm_divisor * N)``.
    min_information
        Below this ``I`` (nats) the ratio is not reported. The default sits
        above the corrected estimator's floor on independent data for
        ``N >= 1000`` with automatic bins.
    direction
        ``"y_on_x"`` regresses y on x; ``"symmetric"`` also regresses x on y
        and keeps the smaller Lambda.
    """

    bins: int | Literal["auto"] = "auto"
    model_order: int = 1
    correction: bool = True
    mm_divisor: float = MM_DIVISOR
    min_information: float = 0.025
    direction: Literal["y_on_x", "symmetric"] = "y_on_x"

    def __post_init__(self):
        if self.bins != "auto" and (int(self.bins) != self.bins or self.bins < 2):
            raise InvalidParameter(f"bins must be 'auto' or an integer >= 2, got {self.bins!r}")
        if int(self.model_order) != self.model_order or self.model_order < 1:
            raise InvalidParameter(f"model_order must be >= 1, got {self.model_order}")
        if not self.mm_divisor > 0:
            raise InvalidParameter("mm_divisor must be positive")
        if self.direction not in ("y_on_x", "symmetric"):
            raise InvalidParameter(f"unknown direction {self.direction!r}")

    def resolve_bins(self, n: int) -> int:
        return default_bins(n) if self.bins == "auto" else int(self.bins)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LambdaReport:
    rho: float
    i_xy: float
    i_xyprime: float
    lam: float | None
    order: int
    bins: int
    n: int
    degenerate: bool
    clamped: bool
    rho_x_yprime: float
    config: LambdaConfig

    def require(self) -> float:
        """Return Lambda, raising :class:`NoDependence` for degenerate input."""
        if self.degenerate:
            raise NoDependence(
                f"I(x, y) = {self.i_xy:.4g} nats is below {self.config.min_information}"
            )
        return self.lam

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out


def quantile_transform(y, z) -> np.ndarray:
    """Give each ``z`` value the order statistic of `y` of the same rank.

    Ties in `z` are ranked by position, so the output is always a
    rearrangement of `y`.
    """
    y = as_series(y, "y")
    z = as_series(z, "z")
    if y.shape != z.shape:
        raise LengthMismatch(f"y has {y.size} values, z has {z.size}")
    out = np.empty_like(y)
    out[np.argsort(z, kind="stable")] = np.sort(y, kind="stable")
    return out


def _safe_pearson(a, b) -> float:
    try:
        return pearson(a, b)
    except ConstantSeries:
        return 0.0


def _is_exact_fit(y: np.ndarray, z: np.ndarray) -> bool:
    spread = float(np.std(y))
    return spread > 0.0 and float(np.sqrt(np.mean(z * z))) <= 1e-9 * spread


def lambda_from_residuals(x, y, residuals, config: LambdaConfig | None = None,
                          order: int | None = None) -> LambdaReport:
    """Lambda for residuals from any fitted model of y given x.

    Residuals at rounding level (RMS at most ``1e-9`` of y's spread) mean the
    model is exact; their ranks then reflect floating-point error that grows
    with ``|y|``, so ``I'`` is set to zero rather than estimated from them.
    """
    config = config or LambdaConfig()
    x = as_series(x, "x")
    y = as_series(y, "y")
    z = as_series(residuals, "residuals")
    if not (x.size == y.size == z.size):
        raise LengthMismatch("x, y and residuals must have equal length")
    n = x.size
    m = config.resolve_bins(n)
    if n < 10 * m:
        warnings.warn(
            f"{n} observations for {m} bins; at least {10 * m} are recommended",
            RuntimeWarning,
            stacklevel=2,
        )
    rho = pearson(x, y)
    yprime = quantile_transform(y, z)

    dx = equal_frequency_bins(x, m)
    kw = dict(correction=config.correction, divisor=config.mm_divisor)
    i_xy = mutual_information(dx, equal_frequency_bins(y, m), **kw)
    if _is_exact_fit(y, z):
        i_xyprime = 0.0
    else:
        i_xyprime = mutual_information(dx, equal_frequency_bins(yprime, m), **kw)

    degenerate = i_xy < config.min_information
    clamped = False
    lam = None
    if not degenerate:
        raw = 1.0 - i_xyprime / i_xy
        lam = min(1.0, max(0.0, raw))
        clamped = lam != raw
    return LambdaReport(
        rho=rho,
        i_xy=i_xy,
        i_xyprime=i_xyprime,
        lam=lam,
        order=config.model_order if order is None else order,
        bins=m,
        n=n,
        degenerate=degenerate,
        clamped=clamped,
        rho_x_yprime=_safe_pearson(x, yprime),
        config=config,
    )


def _one_direction(x, y, config: LambdaConfig) -> LambdaReport:
    if np.all(y == y[0]):
        raise ConstantVariable("y is constant")
    if np.all(x == x[0]):
        raise ConstantVariable("x is constant")
    fit = fit_polynomial(PairedSample(x, y), config.model_order)
    return lambda_from_residuals(x, y, fit.residuals, config)


def compute_lambda(sample: PairedSample, config: LambdaConfig | None = None,
                   strict: bool = False) -> LambdaReport:
    """Run the four-step procedure on `sample`.

    When the raw mutual information is below ``config.min_information`` the
    report is flagged degenerate and carries no Lambda; with ``strict=True``
    :class:`NoDependence` is raised instead.
    """
    config = config or LambdaConfig()
    report = _one_direction(sample.x, sample.y, config)
    if config.direction == "symmetric":
        other = _one_direction(sample.y, sample.x, config)
        if report.degenerate or (
            not other.degenerate and other.lam is not None and other.lam < report.lam
        ):
            report = other
    if strict:
        report.require()
    return report


def lambda_profile(sample: PairedSample, config: LambdaConfig | None = None,
                   max_order: int = 3) -> list[LambdaReport]:
    """Reports for polynomial orders ``1..max_order`` on the same bins."""
    config = config or LambdaConfig()
    if not 1 <= max_order <= MAX_PROFILE_ORDER:
        raise InvalidParameter(f"max_order must be in 1..{MAX_PROFILE_ORDER}, got {max_order}")
    return [
        compute_lambda(sample, _with_order(config, k)) for k in range(1, max_order + 1)
    ]


def _with_order(config: LambdaConfig, order: int) -> LambdaConfig:
    d = config.to_dict()
    d["model_order"] = order
    return LambdaConfig(**d)

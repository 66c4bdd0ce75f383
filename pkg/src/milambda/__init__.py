"""Mutual-information diagnostics for how much of a dependence a model explains.

Lambda compares the binned mutual information between ``x`` and ``y`` with
the information left between ``x`` and the model residuals once those are
mapped onto ``y``'s marginal distribution. A BDS test on the same residuals
gives a complementary significance check.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .bds import BdsConfig, BdsResult, bds_residuals, bds_statistic, correlation_integral
from .core_stats import PairedSample, fit_polynomial, pearson, spearman
from .datagen import GenSpec, generate
from .errors import MilambdaError, NoDependence
from .info import (
    equal_frequency_bins,
    gaussian_mi,
    miller_madow,
    mutual_information,
    plugin_entropy,
)
from .pipeline import LambdaConfig, LambdaReport, compute_lambda, lambda_profile, quantile_transform

__all__ = [
    "__version__",
    "BACKEND",
    "BdsConfig",
    "BdsResult",
    "GenSpec",
    "LambdaConfig",
    "LambdaReport",
    "MilambdaError",
    "NoDependence",
    "PairedSample",
    "bds_residuals",
    "bds_statistic",
    "compute_lambda",
    "correlation_integral",
    "equal_frequency_bins",
    "fit_polynomial",
    "gaussian_mi",
    "generate",
    "lambda_profile",
    "miller_madow",
    "mutual_information",
    "pearson",
    "plugin_entropy",
    "quantile_transform",
    "spearman",
]

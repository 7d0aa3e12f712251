"""Median-of-means square-root LASSO: robust joint estimation of sparse coefficients and noise level."""

from .core.criterion import CriterionParams, PlayerPoint
from .core.partition import BlockPartition, make_partition
from .data.dataset import Dataset, GroundTruth
from .estimators import (
    AdaptiveConfig,
    FitResult,
    TuningSchedule,
    fit_adaptive,
    fit_estimated_sigma_plus,
    fit_fixed_s,
    lasso_baseline,
    sqrt_lasso_baseline,
)
from .solver.saddle import SolverConfig, solve

__all__ = [
    "AdaptiveConfig",
    "BlockPartition",
    "CriterionParams",
    "Dataset",
    "FitResult",
    "GroundTruth",
    "PlayerPoint",
    "SolverConfig",
    "TuningSchedule",
    "fit_adaptive",
    "fit_estimated_sigma_plus",
    "fit_fixed_s",
    "lasso_baseline",
    "make_partition",
    "solve",
    "sqrt_lasso_baseline",
]

__version__ = "0.1.0"

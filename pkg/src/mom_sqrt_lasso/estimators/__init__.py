from .tuning import TuningSchedule, rate, schedule
from .result import FitResult
from .fixed import fit_fixed_s, fit_with_blocks
from .variance import estimate_sigma_plus, fit_estimated_sigma_plus, mom_variance_bound
from .adaptive import AdaptiveConfig, fit_adaptive
from .baselines import lasso_baseline, sqrt_lasso_baseline

__all__ = [
    'TuningSchedule',
    'rate',
    'schedule',
    'FitResult',
    'fit_fixed_s',
    'fit_with_blocks',
    'estimate_sigma_plus',
    'fit_estimated_sigma_plus',
    'mom_variance_bound',
    'AdaptiveConfig',
    'fit_adaptive',
    'lasso_baseline',
    'sqrt_lasso_baseline',
]

from .config import EstimatorName, ExperimentConfig, load_config
from .records import TrialRecord, read_records, write_records
from .runner import run_bench, trial_seed
from .rates import compute_rates

__all__ = [
    'EstimatorName',
    'ExperimentConfig',
    'load_config',
    'TrialRecord',
    'read_records',
    'write_records',
    'run_bench',
    'trial_seed',
    'compute_rates',
]

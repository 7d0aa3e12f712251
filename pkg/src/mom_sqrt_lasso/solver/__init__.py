from .prox import fista_lasso, soft_threshold
from .saddle import SaddleState, SolverConfig, StepDecay, TraceEntry, objective_trace, solve

__all__ = [
    'fista_lasso',
    'soft_threshold',
    'SaddleState',
    'SolverConfig',
    'StepDecay',
    'TraceEntry',
    'objective_trace',
    'solve',
]

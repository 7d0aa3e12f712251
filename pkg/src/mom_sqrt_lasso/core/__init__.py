from .quantile import QuantileSpec, quantile, quantile_at_least, quantile_at_most
from .partition import MEDIAN, BlockPartition, block_means, make_partition, median_block, mom_statistic
from .criterion import (
    CriterionParams,
    PlayerPoint,
    block_criteria,
    block_criterion,
    block_criterion_gradients,
    r_c,
    r_c_naive,
    squared_loss,
    t_k_mu,
)

__all__ = [
    'QuantileSpec',
    'quantile',
    'quantile_at_least',
    'quantile_at_most',
    'MEDIAN',
    'BlockPartition',
    'block_means',
    'make_partition',
    'median_block',
    'mom_statistic',
    'CriterionParams',
    'PlayerPoint',
    'block_criteria',
    'block_criterion',
    'block_criterion_gradients',
    'r_c',
    'r_c_naive',
    'squared_loss',
    't_k_mu',
]

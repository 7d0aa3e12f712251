"""MOM square-root LASSO at a fixed sparsity level."""

import logging
from typing import Optional

from ..core.criterion import DEFAULT_C, CriterionParams
from ..core.partition import make_partition
from ..data.dataset import Dataset
from ..exceptions import InfeasibleConfigurationError, InvalidInputError
from ..solver.saddle import SolverConfig, solve
from .result import FitResult
from .tuning import TuningSchedule, schedule

logger = logging.getLogger(__name__)


def fit_with_blocks(
    data: Dataset,
    k: int,
    mu: float,
    sigma_plus: float,
    solver_cfg: SolverConfig = SolverConfig(),
    seed: Optional[int] = None,
    c: float = DEFAULT_C,
    sigma_floor: Optional[float] = None,
) -> FitResult:
    """Run the saddle solver on a K-block partition drawn with ``seed`` (default ``solver_cfg.seed``)."""
    seed = solver_cfg.seed if seed is None else seed
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if k > data.n:
        raise InfeasibleConfigurationError(f"K={k} blocks requested but only n={data.n} samples")
    params = CriterionParams(c=c, mu=mu, sigma_plus=sigma_plus, sigma_floor=sigma_floor)
    partition = make_partition(data.n, k, seed)
    state = solve(data, partition, params, solver_cfg)

    estimate = state.running_average
    sigma_hat = min(estimate.sigma, params.sigma_plus)
    diagnostics = {
        "iterations": state.iter,
        "converged": state.converged,
        "averaged_over": state.averaged_over,
        "median_block": state.median_block_history[-1],
        "sigma_plus": params.sigma_plus,
        "block_size": partition.block_size,
    }
    if state.trace is not None:
        diagnostics["trace"] = state.trace
    logger.info(
        f"MOM fit K={k} mu={mu:.4g}: {state.iter} iterations, converged={state.converged}"
    )
    return FitResult(
        beta_hat=estimate.beta,
        sigma_hat=sigma_hat,
        k_used=k,
        mu_used=mu,
        diagnostics=diagnostics,
    )


def fit_fixed_s(
    data: Dataset,
    s: int,
    sigma_plus: float,
    t: TuningSchedule = TuningSchedule(),
    solver_cfg: SolverConfig = SolverConfig(),
    seed: Optional[int] = None,
    c: float = DEFAULT_C,
) -> FitResult:
    """MOM square-root LASSO with (K, mu) taken from the sparsity schedule."""
    if not sigma_plus > 0:
        raise InvalidInputError(f"sigma_plus must be > 0, got {sigma_plus}")
    k, mu = schedule(data.n, data.d, s, t, strict=True)
    result = fit_with_blocks(data, k, mu, sigma_plus, solver_cfg, seed, c)
    result.diagnostics["sparsity"] = s
    return result

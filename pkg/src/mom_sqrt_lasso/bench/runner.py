"""Monte-Carlo grid execution.

Every (cell, trial) pair draws one dataset from a seed derived by hashing
(master seed, cell, trial) and runs every configured estimator on it. Pairs
are independent, so they are fanned out over a process pool with
``asyncio.gather``; rows are sorted afterwards, which makes the output
independent of scheduling.
"""

import asyncio
import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Union

import numpy as np

from ..data.dataset import Dataset
from ..data.generate import generate
from ..estimators.adaptive import AdaptiveConfig, fit_adaptive
from ..estimators.baselines import lasso_baseline, sqrt_lasso_baseline
from ..estimators.fixed import fit_fixed_s
from ..estimators.result import FitResult
from ..estimators.tuning import schedule
from ..estimators.variance import fit_estimated_sigma_plus
from ..exceptions import InvalidInputError, MomLassoError
from .config import CellSpec, EstimatorName, ExperimentConfig
from .metrics import check_record, error_norms, interpolation_holds, norm_ordering_holds
from .records import STATUS_OK, TrialRecord, write_cells, write_records

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 63) - 1


def trial_seed(master: int, cell_id: int, trial: int) -> int:
    """First 8 bytes of sha256("master:cell:trial"), big-endian, masked to 63 bits."""
    digest = hashlib.sha256(f"{master}:{cell_id}:{trial}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & SEED_MASK


def baseline_penalty(config: ExperimentConfig, cell: CellSpec) -> float:
    """sqrt-lasso mu; defaults to the sigma-fixed equivalent of the MOM penalty, mu_s / (2c)."""
    if config.sqrt_lasso_mu is not None:
        return float(config.sqrt_lasso_mu)
    _, mu = schedule(cell.n, cell.d, max(cell.s, 1), config.tuning(cell))
    return mu / (2 * config.c)


def run_estimator(
    name: EstimatorName,
    data: Dataset,
    cell: CellSpec,
    config: ExperimentConfig,
    seed: int,
) -> FitResult:
    s = max(cell.s, 1)
    sigma_plus = config.cell_sigma_plus(cell)
    tuning = config.tuning(cell)
    solver_cfg = config.solver_config()
    if name is EstimatorName.MOM_FIXED:
        return fit_fixed_s(data, s, sigma_plus, tuning, solver_cfg, seed, config.c)
    if name is EstimatorName.MOM_EST_SIGMA:
        return fit_estimated_sigma_plus(data, s, tuning, solver_cfg, seed, config.c)
    if name is EstimatorName.MOM_ADAPTIVE:
        adaptive = AdaptiveConfig(s_plus=config.cell_s_plus(cell))
        return fit_adaptive(data, adaptive, sigma_plus, tuning, solver_cfg, seed, config.c)
    mu = baseline_penalty(config, cell)
    if name is EstimatorName.SQRT_LASSO:
        return sqrt_lasso_baseline(data, mu)
    lam = config.lasso_lambda if config.lasso_lambda is not None else mu * sigma_plus
    return lasso_baseline(data, lam)


def run_trial(config: ExperimentConfig, cell: CellSpec, trial: int, timing: bool = False) -> List[TrialRecord]:
    seed = trial_seed(config.seed, cell.cell_id, trial)
    data = generate(config.gen_spec(cell, seed))
    beta_star = data.truth.beta_star
    common = dict(
        cell_id=cell.cell_id,
        trial=trial,
        n=cell.n,
        d=cell.d,
        s=cell.s,
        sigma_star=float(cell.sigma_star),
        n_outliers=len(data.outliers),
        seed=seed,
    )

    records = []
    for name in config.estimators:
        start = time.perf_counter()
        try:
            result = run_estimator(name, data, cell, config, seed)
        except (MomLassoError, ArithmeticError, ValueError) as exc:
            logger.warning(f"cell {cell.cell_id} trial {trial} {name.value} failed: {exc}")
            records.append(
                TrialRecord(
                    estimator=name.value,
                    err_l1=None,
                    err_l2=None,
                    sigma_err=None,
                    s_selected=None,
                    runtime_ms=None,
                    status=f"error:{type(exc).__name__}",
                    **common,
                )
            )
            continue
        runtime = (time.perf_counter() - start) * 1000 if timing else None

        diff = result.beta_hat - beta_star
        err_l1 = float(np.abs(diff).sum())
        err_l2 = float(np.linalg.norm(diff))
        if not (
            norm_ordering_holds(err_l1, err_l2, cell.d)
            and interpolation_holds(err_l1, err_l2, error_norms(diff))
        ):
            logger.warning(f"interpolation check failed: cell {cell.cell_id} trial {trial} {name.value}")
        records.append(
            TrialRecord(
                estimator=name.value,
                err_l1=err_l1,
                err_l2=err_l2,
                sigma_err=abs(result.sigma_hat - float(cell.sigma_star)),
                s_selected=result.s_selected,
                runtime_ms=runtime,
                status=STATUS_OK,
                err_lp=error_norms(diff, config.lp_norms),
                **common,
            )
        )
    logger.debug(f"finished cell {cell.cell_id} trial {trial}")
    return records


def _sort_key(config: ExperimentConfig):
    order = {name.value: i for i, name in enumerate(config.estimators)}
    return lambda r: (r.cell_id, order[r.estimator], r.trial)


async def _gather_trials(config: ExperimentConfig, jobs: int, timing: bool) -> List[List[TrialRecord]]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        tasks = [
            loop.run_in_executor(pool, run_trial, config, cell, trial, timing)
            for cell in config.cells()
            for trial in range(config.trials)
        ]
        return await asyncio.gather(*tasks)


def run_bench(config: ExperimentConfig, jobs: int = 1, timing: bool = False) -> List[TrialRecord]:
    """Run the whole grid; rows come back sorted by (cell, estimator, trial)."""
    if jobs < 1:
        raise InvalidInputError(f"jobs must be >= 1, got {jobs}")
    cells = config.cells()
    logger.info(f"running {len(cells)} cells x {config.trials} trials with jobs={jobs}")
    if jobs == 1:
        batches = [run_trial(config, cell, trial, timing) for cell in cells for trial in range(config.trials)]
    else:
        batches = asyncio.run(_gather_trials(config, jobs, timing))
    records = sorted((r for batch in batches for r in batch), key=_sort_key(config))
    failed = sum(not r.ok for r in records)
    if failed:
        logger.warning(f"{failed} of {len(records)} trial rows failed")
    return records


def cells_path(out: Union[str, Path]) -> Path:
    return Path(f"{out}.cells.csv")


def write_bench(
    config: ExperimentConfig,
    records: List[TrialRecord],
    out: Union[str, Path],
) -> Path:
    """Write the bench CSV and its cell sidecar; returns the sidecar path."""
    for record in records:
        check_record(record)
    write_records(records, out, config.lp_norms)
    sidecar = cells_path(out)
    cells = config.cells()
    write_cells(cells, sidecar, {cell.cell_id: config.cell_sigma_plus(cell) for cell in cells})
    return sidecar

"""MOM pre-estimate of the noise bound sigma_plus and the two-stage split fit."""

import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..core.criterion import DEFAULT_C
from ..core.partition import MEDIAN, BlockPartition, make_partition, mom_statistic
from ..data.dataset import Dataset
from ..exceptions import InvalidInputError
from ..solver.saddle import SolverConfig
from .fixed import fit_with_blocks
from .result import FitResult
from .tuning import TuningSchedule, schedule

logger = logging.getLogger(__name__)

FALLBACK_FLOOR = 1e-6
# variances this small relative to MOM(y^2) are rounding residue of a constant response
ZERO_VARIANCE_RTOL = 1e3 * float(np.finfo(float).eps)


def mom_moments(y, partition: BlockPartition) -> Tuple[float, float]:
    """(MOM(y^2), MOM(y)) over an existing partition."""
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("y must be finite")
    return mom_statistic(arr**2, partition, MEDIAN), mom_statistic(arr, partition, MEDIAN)


def variance_bound_on(y, partition: BlockPartition) -> float:
    """max(0, MOM(y^2) - MOM(y)^2) over an existing partition."""
    second, first = mom_moments(y, partition)
    return max(0.0, second - first * first)


def is_numerically_zero(variance: float, second_moment: float) -> bool:
    return variance <= ZERO_VARIANCE_RTOL * abs(second_moment)


def mom_variance_bound(y, k: int, seed: int) -> float:
    """MOM estimate of Var[Y]; its square root serves as sigma_plus."""
    arr = np.asarray(y, dtype=float)
    return variance_bound_on(arr, make_partition(arr.size, k, seed))


def split_halves(n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded split of range(n): first floor(n/2) permuted indices, then the rest."""
    if n < 2:
        raise InvalidInputError(f"need n >= 2 to split, got {n}")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    half = n // 2
    return perm[:half], perm[half:]


class SigmaPlusEstimate(NamedTuple):
    sigma_plus: float
    estimate: float
    fallback: bool


def estimate_sigma_plus(y, k: int, seed: int) -> SigmaPlusEstimate:
    """sqrt of the MOM variance on ``k`` blocks (clamped to len(y)), or the spread fallback.

    A variance that is zero up to rounding (constant responses) falls back to
    max(FALLBACK_FLOOR, ptp(y) / 2).
    """
    arr = np.asarray(y, dtype=float)
    k_used = min(k, arr.size)
    if k_used < k:
        logger.debug(f"variance stage uses K={k_used} ({arr.size} samples)")
    second, first = mom_moments(arr, make_partition(arr.size, k_used, seed))
    variance = max(0.0, second - first * first)
    if is_numerically_zero(variance, second):
        sigma_plus = max(FALLBACK_FLOOR, float(np.ptp(arr)) / 2)
        logger.warning(
            f"MOM variance estimate {variance:.3g} is numerically 0; falling back to sigma_plus={sigma_plus:.4g}"
        )
        return SigmaPlusEstimate(sigma_plus, math.sqrt(variance), True)
    return SigmaPlusEstimate(math.sqrt(variance), math.sqrt(variance), False)


def fit_estimated_sigma_plus(
    data: Dataset,
    s: int,
    t: TuningSchedule = TuningSchedule(),
    solver_cfg: SolverConfig = SolverConfig(),
    seed: Optional[int] = None,
    c: float = DEFAULT_C,
) -> FitResult:
    """Estimate sigma_plus on one half of the sample, fit on the other half."""
    seed = solver_cfg.seed if seed is None else seed
    variance_idx, fit_idx = split_halves(data.n, seed)
    fit_data = data.subset(fit_idx)
    k, mu = schedule(fit_data.n, fit_data.d, s, t, strict=True)
    bound = estimate_sigma_plus(data.y[variance_idx], k, seed)

    result = fit_with_blocks(fit_data, k, mu, bound.sigma_plus, solver_cfg, seed, c)
    result.diagnostics.update(
        {
            "sparsity": s,
            "sigma_plus_estimate": bound.estimate,
            "sigma_plus_fallback": bound.fallback,
            "variance_samples": int(variance_idx.size),
            "fit_samples": int(fit_idx.size),
        }
    )
    return result

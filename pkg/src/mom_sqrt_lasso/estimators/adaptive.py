"""Adaptation to unknown sparsity by a dyadic Lepski sweep.

Levels m = 1..M+1 with M = ceil(log2 s_plus) are fitted at s = 2^m. A level m
(1 <= m <= M) is admissible when every consecutive pair of levels from
max(m, 2) - 1 upwards agrees within C * sigma_ref * rate(2^k). The selected
level is the smallest admissible one, or M+1 if none is.

With sigma_plus unknown, one seeded half of the sample bounds the noise by its
MOM variance and the sweep runs on the other half.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.criterion import DEFAULT_C
from ..data.dataset import Dataset
from ..exceptions import AggregationError, InvalidInputError, MomLassoError
from ..solver.saddle import SolverConfig
from .fixed import fit_fixed_s
from .result import FitResult
from .tuning import TuningSchedule, rate, schedule
from .variance import estimate_sigma_plus, split_halves

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdaptiveConfig:
    s_plus: int
    agg_c1: float = 2.0
    agg_c2: float = 2.0
    agg_c3: float = 2.0

    def __post_init__(self) -> None:
        if self.s_plus < 1:
            raise InvalidInputError(f"s_plus must be >= 1, got {self.s_plus}")
        if min(self.agg_c1, self.agg_c2, self.agg_c3) <= 0:
            raise InvalidInputError("agg_c1, agg_c2 and agg_c3 must be > 0")

    @property
    def top_level(self) -> int:
        """M = ceil(log2 s_plus)."""
        return math.ceil(math.log2(self.s_plus))


def _levels_close(
    lower: FitResult,
    upper: FitResult,
    level: int,
    sigma_ref: float,
    cfg: AdaptiveConfig,
    d: int,
    n: int,
) -> bool:
    diff = lower.beta_hat - upper.beta_hat
    u = 2**level
    r1 = rate(u, d, n, 1)
    r2 = rate(u, d, n, 2)
    return bool(
        np.abs(diff).sum() <= cfg.agg_c1 * sigma_ref * r1
        and np.linalg.norm(diff) <= cfg.agg_c2 * sigma_ref * r2
        and abs(lower.sigma_hat - upper.sigma_hat) <= cfg.agg_c3 * sigma_ref * r2
    )


def admissible_levels(
    fits: Dict[int, FitResult],
    top: int,
    sigma_ref: float,
    cfg: AdaptiveConfig,
    d: int,
    n: int,
) -> List[int]:
    """Levels m in 1..top whose consecutive comparisons k = max(m, 2)..top+1 all pass.

    A comparison involving a level missing from ``fits`` fails.
    """
    close: Dict[int, bool] = {}
    for k in range(2, top + 2):
        if k - 1 in fits and k in fits:
            close[k] = _levels_close(fits[k - 1], fits[k], k, sigma_ref, cfg, d, n)
        else:
            close[k] = False
    admissible = []
    for m in range(1, top + 1):
        if m in fits and all(close[k] for k in range(max(m, 2), top + 2)):
            admissible.append(m)
    return admissible


def fit_adaptive(
    data: Dataset,
    cfg: AdaptiveConfig,
    sigma_plus: Optional[float],
    t: TuningSchedule = TuningSchedule(),
    solver_cfg: SolverConfig = SolverConfig(),
    seed: Optional[int] = None,
    c: float = DEFAULT_C,
) -> FitResult:
    """Fit every dyadic level and return the one chosen by the stopping rule.

    ``sigma_plus=None`` estimates the noise bound on a held-out half first.
    """
    seed = solver_cfg.seed if seed is None else seed
    if cfg.s_plus > data.d:
        raise InvalidInputError(f"s_plus={cfg.s_plus} exceeds d={data.d}")
    if cfg.s_plus > data.d / (2 * math.e):
        logger.warning(
            f"s_plus={cfg.s_plus} is above the recommended bound d/(2e)={data.d / (2 * math.e):.1f}"
        )
    top = cfg.top_level

    estimated: Dict[str, Any] = {}
    if sigma_plus is None:
        variance_idx, fit_idx = split_halves(data.n, seed)
        variance_y = data.y[variance_idx]
        data = data.subset(fit_idx)
        k_top, _ = schedule(data.n, data.d, min(2 ** (top + 1), data.d), t)
        bound = estimate_sigma_plus(variance_y, k_top, seed)
        sigma_plus = bound.sigma_plus
        estimated = {
            "sigma_plus_estimate": bound.estimate,
            "sigma_plus_fallback": bound.fallback,
            "variance_samples": int(variance_idx.size),
            "fit_samples": int(fit_idx.size),
        }
        logger.info(f"estimated sigma_plus={sigma_plus:.4g} on {variance_idx.size} held-out samples")

    fits: Dict[int, FitResult] = {}
    failures: Dict[int, Exception] = {}
    for m in range(1, top + 2):
        s = 2**m
        if s > data.d:
            logger.warning(f"level m={m}: s={s} exceeds d={data.d}, fitting with s=d")
            s = data.d
        try:
            fits[m] = fit_fixed_s(data, s, sigma_plus, t, solver_cfg, seed, c)
        except (MomLassoError, ArithmeticError) as exc:
            logger.warning(f"level m={m} (s={s}) failed: {exc}")
            failures[2**m] = exc
    if not fits:
        raise AggregationError(failures)

    reference_level = top + 1 if top + 1 in fits else max(fits)
    sigma_ref = fits[reference_level].sigma_hat
    admissible = admissible_levels(fits, top, sigma_ref, cfg, data.d, data.n)

    selected = min(admissible) if admissible else top + 1
    if selected not in fits:
        logger.warning(f"selected level m={selected} failed; using level m={max(fits)}")
        selected = max(fits)
    chosen = fits[selected]

    diagnostics = dict(chosen.diagnostics)
    diagnostics.update(estimated)
    diagnostics.update(
        {
            "selected_level": selected,
            "admissible_levels": admissible,
            "sigma_ref": sigma_ref,
            "levels": [
                {
                    "m": m,
                    "s": 2**m,
                    "status": "ok" if m in fits else f"error:{type(failures[2**m]).__name__}",
                    "sigma_hat": fits[m].sigma_hat if m in fits else None,
                }
                for m in range(1, top + 2)
            ],
        }
    )
    logger.info(f"adaptive sweep selected s={2**selected} (admissible levels {admissible})")
    return FitResult(
        beta_hat=chosen.beta_hat,
        sigma_hat=chosen.sigma_hat,
        k_used=chosen.k_used,
        mu_used=chosen.mu_used,
        s_selected=2**selected,
        diagnostics=diagnostics,
    )

"""Median-block gradient descent-ascent for the MOM square-root LASSO saddle point.

Each outer iteration evaluates every block criterion at the current pair of
players, picks the block realising the median, and takes one proximal descent
step for (beta, sigma) and one proximal ascent step for (gamma, chi) using the
gradients on that block only. The estimate is the average of the trailing
fraction of iterates.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..core.criterion import (
    CriterionParams,
    PlayerPoint,
    block_criteria,
    block_criterion_gradients,
    loss_coefficients,
    penalty,
)
from ..core.partition import BlockPartition, median_block
from ..data.dataset import Dataset
from ..exceptions import InvalidInputError, MissingTraceError, SolverDivergedError
from .prox import fista_lasso, soft_threshold, spectral_sq_norm

logger = logging.getLogger(__name__)


class StepDecay(str, Enum):
    CONSTANT = "constant"
    INVERSE_SQRT = "inverse-sqrt"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the GDA loop.

    ``step_size`` is dimensionless: coefficient steps are divided by the
    block's Lipschitz constant. Scale steps move sigma and chi by at most
    ``step_size * (sigma + chi) / 2`` per iteration (``scale_step_size``
    replaces ``step_size`` there when given). The ascent player (gamma, chi)
    moves ``ascent_ratio`` times as far as the descent player; with a ratio of 1
    both players start equal and stay equal, so every block criterion is 0.
    ``seed`` draws the block partition and sample split of estimators called
    without an explicit seed.
    """

    max_iters: int = 2000
    step_size: float = 0.5
    step_decay: StepDecay = StepDecay.INVERSE_SQRT
    tol: float = 1e-4
    averaging_window: float = 0.5
    seed: int = 0
    trace: bool = False
    warm_start: bool = False
    scale_step_size: Optional[float] = None
    ascent_ratio: float = 1.5
    check_every: int = 50
    history_length: int = 32

    def __post_init__(self) -> None:
        object.__setattr__(self, "step_decay", StepDecay(self.step_decay))
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.step_size > 0:
            raise InvalidInputError(f"step_size must be > 0, got {self.step_size}")
        if not self.tol > 0:
            raise InvalidInputError(f"tol must be > 0, got {self.tol}")
        if not 0 < self.averaging_window <= 1:
            raise InvalidInputError(
                f"averaging_window must lie in (0, 1], got {self.averaging_window}"
            )
        if self.scale_step_size is not None and not self.scale_step_size > 0:
            raise InvalidInputError("scale_step_size must be > 0")
        if not self.ascent_ratio > 0:
            raise InvalidInputError(f"ascent_ratio must be > 0, got {self.ascent_ratio}")
        if self.check_every < 1:
            raise InvalidInputError("check_every must be >= 1")

    def decay(self, iteration: int) -> float:
        if self.step_decay is StepDecay.CONSTANT:
            return 1.0
        return 1.0 / math.sqrt(iteration)


class TraceEntry(NamedTuple):
    iteration: int
    value: float
    median_block: int


@dataclass(frozen=True)
class SaddleState:
    """Final iterates of both players plus the trailing averages.

    ``running_average`` is the estimate (beta_hat, sigma_hat); ``min_player``
    and ``max_player`` are the last iterates.
    """

    min_player: PlayerPoint
    max_player: PlayerPoint
    iter: int
    median_block_history: Tuple[int, ...]
    running_average: PlayerPoint
    avg_max_player: PlayerPoint
    converged: bool
    averaged_over: int
    trace: Optional[Tuple[TraceEntry, ...]] = None


def objective_trace(state: SaddleState) -> List[TraceEntry]:
    """Per-iteration (iteration, T value, median block) recorded by :func:`solve`."""
    if state.trace is None:
        raise MissingTraceError("solve() was run without trace=True")
    return list(state.trace)


def _unit_clip(value: float) -> float:
    return min(max(value, -1.0), 1.0)


def _window_start(iteration: int, fraction: float) -> int:
    return iteration - max(1, math.ceil(fraction * iteration))


def _initial_coefficients(data: Dataset, params: CriterionParams, cfg: SolverConfig) -> np.ndarray:
    if not cfg.warm_start:
        return np.zeros(data.d)
    # penalty of the sigma-fixed problem at sigma = chi = sigma_plus
    lam = params.mu * params.sigma_plus / (2 * params.c)
    solution = fista_lasso(data.x, data.y, lam)
    logger.debug(f"warm start from lasso: {solution.iterations} iterations")
    return solution.beta


def solve(
    data: Dataset,
    partition: BlockPartition,
    params: CriterionParams,
    cfg: SolverConfig = SolverConfig(),
) -> SaddleState:
    """Approximate argmin over (beta, sigma), argmax over (gamma, chi) of T_{K,mu}."""
    if partition.n != data.n:
        raise InvalidInputError(f"partition built for n={partition.n}, data has n={data.n}")

    beta = _initial_coefficients(data, params, cfg)
    gamma = beta.copy()
    sigma = chi = params.sigma_plus

    lipschitz = np.array([spectral_sq_norm(data.x[block]) for block in partition.blocks])
    lipschitz = np.where(lipschitz > 0, lipschitz, 1.0)
    scale_step = cfg.scale_step_size or cfg.step_size

    betas = np.empty((cfg.max_iters, data.d))
    gammas = np.empty((cfg.max_iters, data.d))
    sigmas = np.empty(cfg.max_iters)
    chis = np.empty(cfg.max_iters)
    recent_blocks: deque = deque(maxlen=cfg.history_length)
    trace: Optional[List[TraceEntry]] = [] if cfg.trace else None

    previous_avg: Optional[np.ndarray] = None
    converged = False
    t = 0
    for t in range(1, cfg.max_iters + 1):
        min_player = PlayerPoint(beta, sigma)
        max_player = PlayerPoint(gamma, chi)

        criteria = block_criteria(data, partition, min_player, max_player, params)
        if not np.all(np.isfinite(criteria)):
            raise SolverDivergedError(t, "non-finite block criterion")
        k_star = median_block(criteria)
        recent_blocks.append(k_star)
        if trace is not None:
            value = float(criteria[k_star]) + penalty(min_player, max_player, params.mu)
            trace.append(TraceEntry(t, value, k_star))

        grads = block_criterion_gradients(
            partition.block(k_star), data, min_player, max_player, params
        )
        if not (
            np.all(np.isfinite(grads.grad_beta))
            and np.all(np.isfinite(grads.grad_gamma))
            and math.isfinite(grads.grad_sigma)
            and math.isfinite(grads.grad_chi)
        ):
            raise SolverDivergedError(t)

        eta = cfg.step_size * cfg.decay(t)
        a_f, a_g = loss_coefficients(sigma, chi, params.c)
        step_beta = eta / (2 * a_f * lipschitz[k_star])
        step_gamma = eta * cfg.ascent_ratio / (2 * a_g * lipschitz[k_star])
        beta = soft_threshold(beta - step_beta * grads.grad_beta, params.mu * step_beta)
        gamma = soft_threshold(gamma + step_gamma * grads.grad_gamma, params.mu * step_gamma)

        scale_eta = scale_step * cfg.decay(t) * (sigma + chi) / 2
        sigma, chi = (
            params.clip_scale(sigma - scale_eta * _unit_clip(grads.grad_sigma)),
            params.clip_scale(chi + scale_eta * cfg.ascent_ratio * _unit_clip(grads.grad_chi)),
        )
        if not (np.all(np.isfinite(beta)) and np.all(np.isfinite(gamma))):
            raise SolverDivergedError(t, "non-finite iterate")

        betas[t - 1], gammas[t - 1] = beta, gamma
        sigmas[t - 1], chis[t - 1] = sigma, chi

        if t % cfg.check_every == 0 and t >= 2 * cfg.check_every:
            start = _window_start(t, cfg.averaging_window)
            current = np.append(betas[start:t].mean(axis=0), sigmas[start:t].mean())
            if previous_avg is not None:
                change = float(np.linalg.norm(current - previous_avg))
                if change <= cfg.tol * max(float(np.linalg.norm(current)), 1e-12):
                    converged = True
                    logger.debug(f"solver converged at iteration {t} (change={change:.3e})")
                    break
            previous_avg = current
        elif t == cfg.check_every:
            start = _window_start(t, cfg.averaging_window)
            previous_avg = np.append(betas[start:t].mean(axis=0), sigmas[start:t].mean())

    start = _window_start(t, cfg.averaging_window)
    # rounding in the mean can step just outside the box
    avg_min = PlayerPoint(betas[start:t].mean(axis=0), params.clip_scale(sigmas[start:t].mean()))
    avg_max = PlayerPoint(gammas[start:t].mean(axis=0), params.clip_scale(chis[start:t].mean()))
    if not converged:
        logger.info(f"solver reached max_iters={cfg.max_iters} before tol={cfg.tol}")
    return SaddleState(
        min_player=PlayerPoint(beta, sigma),
        max_player=PlayerPoint(gamma, chi),
        iter=t,
        median_block_history=tuple(recent_blocks),
        running_average=avg_min,
        avg_max_player=avg_max,
        converged=converged,
        averaged_over=t - start,
        trace=tuple(trace) if trace is not None else None,
    )

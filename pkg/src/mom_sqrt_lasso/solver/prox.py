"""Proximal operators and a FISTA lasso solver shared by the saddle solver and baselines."""

import logging
from typing import NamedTuple, Optional

import numpy as np

logger = logging.getLogger(__name__)


def soft_threshold(x, t):
    """Componentwise sign(x) * max(|x| - t, 0), the prox of t |.|_1."""
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def spectral_sq_norm(x: np.ndarray) -> float:
    """||x||_op^2 / rows, the Lipschitz constant of the gradient of (1/2 rows)||y - x b||^2."""
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, ord=2) ** 2 / x.shape[0])


class LassoSolution(NamedTuple):
    beta: np.ndarray
    iterations: int
    converged: bool


def fista_lasso(
    x: np.ndarray,
    y: np.ndarray,
    lam: float,
    max_iters: int = 1000,
    tol: float = 1e-8,
    beta0: Optional[np.ndarray] = None,
) -> LassoSolution:
    """Minimise (1/2n)||y - x beta||^2 + lam |beta|_1 with accelerated proximal gradient."""
    n, d = x.shape
    beta = np.zeros(d) if beta0 is None else np.array(beta0, dtype=float)
    lipschitz = spectral_sq_norm(x)
    if lipschitz == 0.0:
        return LassoSolution(np.zeros(d), 0, True)

    z = beta.copy()
    t_k = 1.0
    for it in range(1, max_iters + 1):
        grad = -(x.T @ (y - x @ z)) / n
        beta_new = soft_threshold(z - grad / lipschitz, lam / lipschitz)
        t_new = (1 + np.sqrt(1 + 4 * t_k**2)) / 2
        z = beta_new + ((t_k - 1) / t_new) * (beta_new - beta)
        delta = float(np.linalg.norm(beta_new - beta))
        beta, t_k = beta_new, t_new
        if delta <= tol * max(float(np.linalg.norm(beta)), 1.0):
            return LassoSolution(beta, it, True)
    logger.debug(f"fista_lasso stopped at max_iters={max_iters} without converging")
    return LassoSolution(beta, max_iters, False)

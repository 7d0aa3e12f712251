"""Non-robust comparators: the square-root LASSO and the LASSO."""

import logging
import math

import numpy as np

from ..data.dataset import Dataset
from ..exceptions import InvalidInputError
from ..solver.prox import fista_lasso, soft_threshold, spectral_sq_norm
from .result import FitResult

logger = logging.getLogger(__name__)

SCALE_FLOOR_RATIO = 1e-10


def sqrt_lasso_baseline(
    data: Dataset,
    mu: float,
    max_iters: int = 5000,
    tol: float = 1e-8,
) -> FitResult:
    """Minimise sqrt(mean squared residual) + mu |beta|_1 by the concomitant scheme.

    Alternates a proximal-gradient step in beta at the current scale with the
    closed-form scale update sigma = ||r||_2 / sqrt(n).
    """
    if mu < 0:
        raise InvalidInputError(f"mu must be >= 0, got {mu}")
    n, d = data.x.shape
    root_n = math.sqrt(n)
    scale = float(np.linalg.norm(data.y)) / root_n
    floor = SCALE_FLOOR_RATIO * (scale if scale > 0 else 1.0)
    lipschitz = spectral_sq_norm(data.x)

    beta = np.zeros(d)
    sigma = max(scale, floor)
    if lipschitz == 0.0:
        return FitResult(np.zeros(d), sigma, 0, mu, diagnostics={"iterations": 0, "converged": True})

    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        r = data.y - data.x @ beta
        beta_new = soft_threshold(beta + (data.x.T @ r) / (n * lipschitz), mu * sigma / lipschitz)
        sigma_new = max(float(np.linalg.norm(data.y - data.x @ beta_new)) / root_n, floor)
        delta_beta = float(np.linalg.norm(beta_new - beta))
        delta_sigma = abs(sigma_new - sigma)
        beta, sigma = beta_new, sigma_new
        if delta_beta <= tol * max(float(np.linalg.norm(beta)), 1.0) and delta_sigma <= tol * max(sigma, floor):
            converged = True
            break
    if not converged:
        logger.warning(f"sqrt-lasso did not converge in {max_iters} iterations")
    return FitResult(
        beta_hat=beta,
        sigma_hat=sigma,
        k_used=0,
        mu_used=mu,
        diagnostics={"iterations": it, "converged": converged},
    )


def lasso_baseline(
    data: Dataset,
    lam: float,
    max_iters: int = 5000,
    tol: float = 1e-10,
) -> FitResult:
    """FISTA on (1/2n)||y - X beta||^2 + lam |beta|_1; sigma_hat is the residual RMS."""
    if lam < 0:
        raise InvalidInputError(f"lambda must be >= 0, got {lam}")
    solution = fista_lasso(data.x, data.y, lam, max_iters=max_iters, tol=tol)
    if not solution.converged:
        logger.warning(f"lasso did not converge in {max_iters} iterations")
    residual = data.y - data.x @ solution.beta
    return FitResult(
        beta_hat=solution.beta,
        sigma_hat=float(np.linalg.norm(residual)) / math.sqrt(data.n),
        k_used=0,
        mu_used=lam,
        diagnostics={"iterations": solution.iterations, "converged": solution.converged},
    )

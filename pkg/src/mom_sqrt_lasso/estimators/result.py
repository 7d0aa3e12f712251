from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..exceptions import InvalidInputError


@dataclass(frozen=True)
class FitResult:
    """Estimated (beta_hat, sigma_hat) together with the tuning actually used.

    ``k_used`` is 0 and ``mu_used`` is the penalty for the non-MOM baselines.
    ``diagnostics`` is a plain dict so it can be printed or serialised as-is.
    """

    beta_hat: np.ndarray
    sigma_hat: float
    k_used: int
    mu_used: float
    s_selected: Optional[int] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        beta = np.array(self.beta_hat, dtype=float)
        if beta.ndim != 1:
            raise InvalidInputError(f"beta_hat must be 1-d, got shape {beta.shape}")
        if not self.sigma_hat >= 0:
            raise InvalidInputError(f"sigma_hat must be >= 0, got {self.sigma_hat}")
        beta.setflags(write=False)
        object.__setattr__(self, "beta_hat", beta)
        object.__setattr__(self, "sigma_hat", float(self.sigma_hat))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.beta_hat)

    def error_lp(self, beta_star: np.ndarray, p: float) -> float:
        return float(np.linalg.norm(self.beta_hat - np.asarray(beta_star, dtype=float), ord=p))

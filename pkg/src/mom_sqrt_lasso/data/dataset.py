from dataclasses import dataclass, field
from typing import FrozenSet, Optional

import numpy as np

from ..exceptions import InvalidInputError


@dataclass(frozen=True)
class GroundTruth:
    """What generated a synthetic dataset: beta* and sigma*, plus the noise law name."""

    beta_star: np.ndarray
    sigma_star: float
    noise: str = ""

    def __post_init__(self) -> None:
        beta = np.array(self.beta_star, dtype=float)
        if beta.ndim != 1:
            raise InvalidInputError(f"beta_star must be 1-d, got shape {beta.shape}")
        beta.setflags(write=False)
        object.__setattr__(self, "beta_star", beta)
        if not self.sigma_star >= 0:
            raise InvalidInputError(f"sigma_star must be >= 0, got {self.sigma_star}")

    @property
    def sparsity(self) -> int:
        return int(np.count_nonzero(self.beta_star))


@dataclass(frozen=True)
class Dataset:
    """Observation matrix ``x`` (n x d), responses ``y``, optional truth and the outlier set.

    ``outliers`` holds the 0-based rows known to be corrupted; it is empty for
    data read from disk unless a truth sidecar says otherwise.
    """

    x: np.ndarray
    y: np.ndarray
    truth: Optional[GroundTruth] = None
    outliers: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.ndim != 2:
            raise InvalidInputError(f"x must be 2-d, got shape {x.shape}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise InvalidInputError(f"y must have shape ({x.shape[0]},), got {y.shape}")
        if self.truth is not None and self.truth.beta_star.shape != (x.shape[1],):
            raise InvalidInputError("beta_star dimension does not match x")
        outliers = frozenset(int(i) for i in self.outliers)
        if any(i < 0 or i >= x.shape[0] for i in outliers):
            raise InvalidInputError("outlier index out of range")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "outliers", outliers)

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def d(self) -> int:
        return int(self.x.shape[1])

    def subset(self, indices) -> "Dataset":
        """Rows ``indices`` in the given order; outlier indices are re-numbered."""
        idx = np.asarray(indices, dtype=np.intp)
        position = {int(old): new for new, old in enumerate(idx)}
        kept = frozenset(position[i] for i in self.outliers if i in position)
        return Dataset(x=self.x[idx], y=self.y[idx], truth=self.truth, outliers=kept)

    def snr(self) -> Optional[float]:
        """Var(X^T beta*) / sigma*^2 for isotropic designs (|beta*|_2^2 / sigma*^2)."""
        if self.truth is None or self.truth.sigma_star == 0:
            return None
        return float(np.dot(self.truth.beta_star, self.truth.beta_star) / self.truth.sigma_star**2)

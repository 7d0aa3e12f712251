"""Squared losses, the pairing functional R_c and the penalised MOM objective.

R_c(l_g, chi, l_f, sigma) compares a candidate (f, sigma) with an adversary
(g, chi). It is antisymmetric under swapping the two players, concave in chi
near the diagonal, and affine in both losses, which is what lets the block
gradients below be written in closed form.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..data.dataset import Dataset
from ..exceptions import InvalidInputError
from .partition import MEDIAN, BlockPartition
from .quantile import quantile

DEFAULT_C = 3.0
DEFAULT_FLOOR_RATIO = 1e-6


@dataclass(frozen=True)
class CriterionParams:
    """Constants of the objective: c in R_c, penalty mu, and the scale box [floor, sigma_plus]."""

    c: float = DEFAULT_C
    mu: float = 0.0
    sigma_plus: float = 1.0
    sigma_floor: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.c > 2:
            raise InvalidInputError(f"c must be > 2, got {self.c}")
        if not self.mu >= 0:
            raise InvalidInputError(f"mu must be >= 0, got {self.mu}")
        if not (np.isfinite(self.sigma_plus) and self.sigma_plus > 0):
            raise InvalidInputError(f"sigma_plus must be > 0, got {self.sigma_plus}")
        if self.sigma_floor is None:
            object.__setattr__(self, "sigma_floor", DEFAULT_FLOOR_RATIO * self.sigma_plus)
        if not 0 < self.sigma_floor < self.sigma_plus:
            raise InvalidInputError(
                f"need 0 < sigma_floor < sigma_plus, got {self.sigma_floor} and {self.sigma_plus}"
            )

    def clip_scale(self, value: float) -> float:
        return float(min(max(value, self.sigma_floor), self.sigma_plus))

    def contains(self, player: "PlayerPoint") -> bool:
        return self.sigma_floor <= player.sigma <= self.sigma_plus


@dataclass(frozen=True)
class PlayerPoint:
    """One player of the game: linear coefficients and a noise scale."""

    beta: np.ndarray
    sigma: float

    def __post_init__(self) -> None:
        beta = np.array(self.beta, dtype=float)
        if beta.ndim != 1:
            raise InvalidInputError(f"beta must be 1-d, got shape {beta.shape}")
        if not np.all(np.isfinite(beta)):
            raise InvalidInputError("beta must be finite")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInputError(f"sigma must be finite and > 0, got {self.sigma}")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "sigma", float(self.sigma))

    @classmethod
    def zeros(cls, d: int, sigma: float) -> "PlayerPoint":
        return cls(np.zeros(d), sigma)

    def scaled(self, factor: float) -> "PlayerPoint":
        return PlayerPoint(self.beta * factor, self.sigma * factor)


class CriterionGradients(NamedTuple):
    grad_beta: np.ndarray
    grad_sigma: float
    grad_gamma: np.ndarray
    grad_chi: float


def squared_loss(beta, x, y: float) -> float:
    """(y - x^T beta)^2 for a single observation."""
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    if beta.shape != x.shape:
        raise InvalidInputError(f"dimension mismatch: beta {beta.shape} vs x {x.shape}")
    residual = float(y) - float(np.dot(x, beta))
    return residual * residual


def residuals(data: Dataset, beta: np.ndarray) -> np.ndarray:
    if beta.shape != (data.d,):
        raise InvalidInputError(f"beta has shape {beta.shape}, data has d={data.d}")
    return data.y - data.x @ beta


def _check_scales(chi, sigma) -> None:
    if np.any(np.asarray(chi) <= 0) or np.any(np.asarray(sigma) <= 0):
        raise InvalidInputError("chi and sigma must be > 0")


def r_c(l_g, chi, l_f, sigma, c: float = DEFAULT_C):
    """R_c(l_g, chi, l_f, sigma); broadcasts over array arguments."""
    _check_scales(chi, sigma)
    total = sigma + chi
    return (sigma - chi) * (1 - 2 * (l_f + l_g) / total**2) + 2 * c * (l_f - l_g) / total


def r_c_naive(l_g, chi, l_f, sigma):
    """l_f/sigma + sigma - l_g/chi - chi, the unstable pairing kept for comparison."""
    _check_scales(chi, sigma)
    return l_f / sigma + sigma - l_g / chi - chi


def delta_c(chi: float, sigma: float, c: float = DEFAULT_C) -> float:
    """c + (sigma - chi)/(sigma + chi); lies in [c - 1, c + 1]."""
    _check_scales(chi, sigma)
    return c + (sigma - chi) / (sigma + chi)


def loss_coefficients(sigma: float, chi: float, c: float = DEFAULT_C):
    """Return (dR/dl_f, -dR/dl_g); both are positive for c > 1."""
    _check_scales(chi, sigma)
    total = sigma + chi
    ratio = (sigma - chi) / total
    return 2 * (c - ratio) / total, 2 * (c + ratio) / total


def _block_rows(data: Dataset, block) -> np.ndarray:
    idx = np.asarray(block, dtype=np.intp)
    if idx.ndim != 1 or idx.size == 0:
        raise InvalidInputError("block must be a non-empty 1-d index set")
    if idx.min() < 0 or idx.max() >= data.n:
        raise InvalidInputError("block index out of range")
    return idx


def block_criterion(
    block,
    data: Dataset,
    min_player: PlayerPoint,
    max_player: PlayerPoint,
    params: CriterionParams,
) -> float:
    """Mean of R_c over one block; (beta, sigma) plays against (gamma, chi)."""
    idx = _block_rows(data, block)
    x, y = data.x[idx], data.y[idx]
    l_f = (y - x @ min_player.beta) ** 2
    l_g = (y - x @ max_player.beta) ** 2
    values = r_c(l_g, max_player.sigma, l_f, min_player.sigma, params.c)
    return float(values.sum() / idx.size)


def block_criteria(
    data: Dataset,
    partition: BlockPartition,
    min_player: PlayerPoint,
    max_player: PlayerPoint,
    params: CriterionParams,
) -> np.ndarray:
    """All K local criteria, in block order."""
    if partition.n != data.n:
        raise InvalidInputError(f"partition built for n={partition.n}, data has n={data.n}")
    l_f = residuals(data, min_player.beta) ** 2
    l_g = residuals(data, max_player.beta) ** 2
    values = r_c(l_g, max_player.sigma, l_f, min_player.sigma, params.c)
    return values[partition.blocks].sum(axis=1) / partition.block_size


def penalty(min_player: PlayerPoint, max_player: PlayerPoint, mu: float) -> float:
    return mu * (float(np.abs(min_player.beta).sum()) - float(np.abs(max_player.beta).sum()))


def t_k_mu(
    data: Dataset,
    partition: BlockPartition,
    min_player: PlayerPoint,
    max_player: PlayerPoint,
    params: CriterionParams,
) -> float:
    """Median of the block criteria plus mu (|beta|_1 - |gamma|_1)."""
    crit = block_criteria(data, partition, min_player, max_player, params)
    return quantile(crit, MEDIAN) + penalty(min_player, max_player, params.mu)


def block_criterion_gradients(
    block,
    data: Dataset,
    min_player: PlayerPoint,
    max_player: PlayerPoint,
    params: CriterionParams,
) -> CriterionGradients:
    """Exact gradients of :func:`block_criterion` in beta, sigma, gamma and chi.

    R_c is affine in the losses, so the scale derivatives only need the block
    means of l_f and l_g.
    """
    sigma, chi = min_player.sigma, max_player.sigma
    if sigma < params.sigma_floor or chi < params.sigma_floor:
        raise InvalidInputError("sigma and chi must be >= sigma_floor")
    idx = _block_rows(data, block)
    x, y = data.x[idx], data.y[idx]
    m = idx.size
    res_f = y - x @ min_player.beta
    res_g = y - x @ max_player.beta
    mean_lf = float((res_f**2).sum() / m)
    mean_lg = float((res_g**2).sum() / m)

    a_f, a_g = loss_coefficients(sigma, chi, params.c)
    grad_beta = -2 * a_f * (x.T @ res_f) / m
    grad_gamma = 2 * a_g * (x.T @ res_g) / m

    total = sigma + chi
    diff = sigma - chi
    both = mean_lf + mean_lg
    level = 1 - 2 * both / total**2
    curvature = 4 * diff * both / total**3
    cross = 2 * params.c * (mean_lf - mean_lg) / total**2
    grad_sigma = level + curvature - cross
    grad_chi = -level + curvature - cross
    return CriterionGradients(grad_beta, float(grad_sigma), grad_gamma, float(grad_chi))

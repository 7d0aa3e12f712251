"""Seeded block partitions and median-of-means statistics over them."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..exceptions import InvalidInputError
from .quantile import Alpha, quantile, quantile_position

logger = logging.getLogger(__name__)

MEDIAN = Fraction(1, 2)


@dataclass(frozen=True)
class BlockPartition:
    """K disjoint blocks of equal size drawn from ``range(n)``.

    ``blocks`` has shape ``(k, n_used // k)``; each row is sorted ascending so
    block sums always run in increasing sample order. ``seed`` is ``None`` for
    partitions built by hand.
    """

    n: int
    k: int
    blocks: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        blocks = np.asarray(self.blocks, dtype=np.intp)
        if blocks.ndim != 2 or blocks.shape[0] != self.k or blocks.shape[1] < 1:
            raise InvalidInputError(
                f"blocks must have shape ({self.k}, m>=1), got {blocks.shape}"
            )
        flat = blocks.ravel()
        if flat.min() < 0 or flat.max() >= self.n:
            raise InvalidInputError("block index out of range")
        if np.unique(flat).size != flat.size:
            raise InvalidInputError("blocks must be pairwise disjoint")
        blocks = np.sort(blocks, axis=1)
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "BlockPartition":
        """Explicit partition, e.g. ``from_blocks(6, [[0, 1], [2, 3], [4, 5]])``."""
        return cls(n=n, k=len(blocks), blocks=np.asarray(blocks, dtype=np.intp))

    @property
    def block_size(self) -> int:
        return int(self.blocks.shape[1])

    @property
    def n_used(self) -> int:
        return self.k * self.block_size

    @property
    def used_indices(self) -> np.ndarray:
        return np.sort(self.blocks.ravel())

    def block(self, index: int) -> np.ndarray:
        return self.blocks[index]


def make_partition(n: int, k: int, seed: int) -> BlockPartition:
    """Permute ``range(n)`` with PCG64(seed) and cut the first K*floor(n/K) into K runs."""
    if k < 1 or k > n:
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(n)
    size = n // k
    dropped = n - k * size
    if dropped:
        logger.debug(f"partition n={n} k={k}: dropping {dropped} samples")
    return BlockPartition(n=n, k=k, blocks=perm[: k * size].reshape(k, size), seed=seed)


def block_means(values, partition: BlockPartition) -> np.ndarray:
    """Empirical mean of ``values`` over each block."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"values must be 1-d, got shape {arr.shape}")
    if arr.size < partition.n_used or arr.size <= int(partition.blocks.max()):
        raise InvalidInputError(
            f"values has length {arr.size}, partition needs {partition.n}"
        )
    return arr[partition.blocks].sum(axis=1) / partition.block_size


def mom_statistic(values, partition: BlockPartition, alpha: Alpha = MEDIAN) -> float:
    """alpha-quantile of the block means; alpha = 1/2 is the MOM_K operator."""
    return quantile(block_means(values, partition), alpha)


def median_block(block_values) -> int:
    """Block realising the lower median; the smallest block index wins ties."""
    return quantile_position(block_values, MEDIAN)

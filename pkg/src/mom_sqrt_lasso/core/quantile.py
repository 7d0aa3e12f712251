"""Order-statistic quantiles with the set-valued semantics of MOM estimators.

For ``x`` in R^K and ``alpha`` in (0, 1), any ``u`` such that at least
``(1 - alpha) K`` components are ``>= u`` and at least ``alpha K`` components
are ``<= u`` is an alpha-quantile. :func:`quantile` always returns the lower
representative ``x_(ceil(alpha K))``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ..exceptions import InvalidInputError

Alpha = Union[float, int, Fraction]


def as_fraction(alpha: Alpha) -> Fraction:
    """Convert ``alpha`` to an exact rational, validating ``0 < alpha < 1``."""
    if isinstance(alpha, Fraction):
        frac = alpha
    elif isinstance(alpha, (int, np.integer)):
        frac = Fraction(int(alpha))
    else:
        value = float(alpha)
        if not math.isfinite(value):
            raise InvalidInputError(f"alpha must be finite, got {alpha!r}")
        # str() gives the shortest decimal, so 0.1 becomes exactly 1/10
        frac = Fraction(str(value))
    if not 0 < frac < 1:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha!r}")
    return frac


def order_index(k: int, alpha: Alpha) -> int:
    """0-based position of ``x_(ceil(alpha K))`` in the ascending sort."""
    if k < 1:
        raise InvalidInputError("quantile of an empty vector is undefined")
    rank = math.ceil(as_fraction(alpha) * k)
    return rank - 1


@dataclass(frozen=True)
class QuantileSpec:
    """An (alpha, K) pair; ``rank`` is ceil(alpha K) and always lies in [1, K]."""

    alpha: Fraction
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.k < 1:
            raise InvalidInputError(f"k must be >= 1, got {self.k}")

    @property
    def rank(self) -> int:
        return math.ceil(self.alpha * self.k)


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"expected a 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError("quantile of an empty vector is undefined")
    return arr


def quantile(x, alpha: Alpha) -> float:
    """Lower alpha-quantile ``x_(ceil(alpha K))`` of ``x``."""
    arr = _as_vector(x)
    idx = order_index(arr.size, alpha)
    return float(np.partition(arr, idx)[idx])


def quantile_position(x, alpha: Alpha) -> int:
    """Smallest index into ``x`` whose value equals :func:`quantile`.

    ``[2, 1, 2, 1]`` at alpha = 1/2 gives 1.
    """
    arr = _as_vector(x)
    hits = np.flatnonzero(arr == quantile(arr, alpha))
    if hits.size == 0:
        raise InvalidInputError("quantile position is undefined when x contains NaN")
    return int(hits[0])


def is_quantile(x, alpha: Alpha, u: float) -> bool:
    """True when ``u`` satisfies both cardinality conditions of an alpha-quantile."""
    arr = _as_vector(x)
    frac = as_fraction(alpha)
    k = arr.size
    n_above = int(np.count_nonzero(arr >= u))
    n_below = int(np.count_nonzero(arr <= u))
    return n_above >= (1 - frac) * k and n_below >= frac * k


def quantile_at_least(x, alpha: Alpha, t: float) -> bool:
    """``Q_alpha[x] >= t``: at least (1 - alpha) K components are ``>= t``."""
    arr = _as_vector(x)
    return int(np.count_nonzero(arr >= t)) >= (1 - as_fraction(alpha)) * arr.size


def quantile_at_most(x, alpha: Alpha, t: float) -> bool:
    """``Q_alpha[x] <= t``: at least alpha K components are ``<= t``."""
    arr = _as_vector(x)
    return int(np.count_nonzero(arr <= t)) >= as_fraction(alpha) * arr.size

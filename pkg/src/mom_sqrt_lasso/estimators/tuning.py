"""Block-count and penalty schedules driven by the sparsity level."""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from ..exceptions import InfeasibleConfigurationError, InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TuningSchedule:
    """Constants of K = ceil(iota_k c1 s log(ed/s)) and mu = iota_mu c2 sqrt(log(ed/s)/n)."""

    c1_tilde: float = 1.0
    c2_tilde: float = 1.0
    iota_k: float = 1.0
    iota_mu: float = 1.0

    def __post_init__(self) -> None:
        if not (self.c1_tilde > 0 and self.c2_tilde > 0):
            raise InvalidInputError("c1_tilde and c2_tilde must be > 0")
        for name in ("iota_k", "iota_mu"):
            value = getattr(self, name)
            if not 0.5 <= value <= 2:
                raise InvalidInputError(f"{name} must lie in [1/2, 2], got {value}")


def log_ratio(d: int, s: float) -> float:
    """log(e d / s)."""
    return 1.0 + math.log(d / s)


def schedule(n: int, d: int, s: int, t: TuningSchedule = TuningSchedule(), strict: bool = False) -> Tuple[int, float]:
    """Return (K, mu) for sparsity ``s``.

    K is clamped to [1, n]; with ``strict=True`` a raw K above n raises
    :class:`InfeasibleConfigurationError` instead.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if not 1 <= s <= d:
        raise InvalidInputError(f"need 1 <= s <= d, got s={s}, d={d}")
    log_term = log_ratio(d, s)
    raw_k = math.ceil(t.iota_k * t.c1_tilde * s * log_term)
    if raw_k > n:
        if strict:
            raise InfeasibleConfigurationError(
                f"schedule asks for K={raw_k} blocks but only n={n} samples are available"
            )
        logger.debug(f"schedule K={raw_k} clamped to n={n}")
    k = min(max(raw_k, 1), n)
    mu = t.iota_mu * t.c2_tilde * math.sqrt(log_term / n)
    return k, mu


def rate(u: float, d: int, n: int, p: float) -> float:
    """u^(1/p) sqrt(log(ed/u)/n), with the log clamped below at 1."""
    if u <= 0 or n < 1 or p < 1:
        raise InvalidInputError(f"rate needs u > 0, n >= 1, p >= 1; got u={u}, n={n}, p={p}")
    log_term = log_ratio(d, u)
    if log_term < 1:
        logger.warning(f"log(ed/u) = {log_term:.4f} < 1 for u={u}, d={d}; clamping to 1")
        log_term = 1.0
    return u ** (1.0 / p) * math.sqrt(log_term / n)

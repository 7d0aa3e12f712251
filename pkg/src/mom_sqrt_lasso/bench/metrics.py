"""Coefficient error norms and the norm-ordering checks every record must satisfy."""

import logging
import math
from typing import Dict, Iterable

import numpy as np

from .records import TrialRecord

logger = logging.getLogger(__name__)

INTERPOLATION_SLACK = 1e-9
CHECKED_NORMS = (1.25, 1.5, 2.0)


def lp_error(beta_hat, beta_star, p: float) -> float:
    diff = np.asarray(beta_hat, dtype=float) - np.asarray(beta_star, dtype=float)
    return float(np.linalg.norm(diff, ord=p))


def interpolation_bound(err_l1: float, err_l2: float, p: float) -> float:
    """|v|_1^(2/p - 1) |v|_2^(2 - 2/p), an upper bound on |v|_p for p in [1, 2]."""
    return err_l1 ** (2 / p - 1) * err_l2 ** (2 - 2 / p)


def interpolation_holds(err_l1: float, err_l2: float, err_lp: Dict[float, float]) -> bool:
    return all(
        value <= interpolation_bound(err_l1, err_l2, p) * (1 + INTERPOLATION_SLACK)
        for p, value in err_lp.items()
    )


def norm_ordering_holds(err_l1: float, err_l2: float, d: int) -> bool:
    """err_l2 <= err_l1 <= sqrt(d) err_l2, up to rounding."""
    tol = 1 + INTERPOLATION_SLACK
    return err_l2 <= err_l1 * tol and err_l1 <= math.sqrt(d) * err_l2 * tol


def error_norms(diff: np.ndarray, norms: Iterable[float] = CHECKED_NORMS) -> Dict[float, float]:
    return {float(p): float(np.linalg.norm(diff, ord=p)) for p in norms}


def check_record(record: TrialRecord) -> bool:
    """Norm ordering plus interpolation for whatever lp errors the record carries."""
    if record.err_l1 is None or record.err_l2 is None:
        return True
    ok = norm_ordering_holds(record.err_l1, record.err_l2, record.d) and interpolation_holds(
        record.err_l1, record.err_l2, {**record.err_lp, 2.0: record.err_l2}
    )
    if not ok:
        logger.warning(
            f"norm check failed for cell={record.cell_id} estimator={record.estimator} trial={record.trial}"
        )
    return ok

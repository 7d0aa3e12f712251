"""Empirical convergence rates: log-log least squares of median error against a grid variable."""

import csv
import logging
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, TextIO, Tuple

from scipy import stats

from ..exceptions import InsufficientDataError, InvalidInputError
from .records import BENCH_COLUMNS, TrialRecord

logger = logging.getLogger(__name__)

RATE_COLUMNS = ("group", "metric", "x_var", "slope", "intercept", "r_squared", "points")
MIN_POINTS = 3


@dataclass(frozen=True)
class RateFit:
    group: str
    metric: str
    x_var: str
    slope: float
    intercept: float
    r_squared: float
    points: int


def _group_label(record: TrialRecord, group_by: Sequence[str]) -> str:
    return "/".join(str(record.value(key)) for key in group_by)


def median_curve(records: Iterable[TrialRecord], x_var: str, metric: str) -> List[Tuple[float, float]]:
    """(x, median metric) over ok rows, sorted by x."""
    buckets: Dict[float, List[float]] = defaultdict(list)
    for record in records:
        value = record.value(metric)
        if record.ok and value is not None:
            buckets[float(record.value(x_var))].append(float(value))
    return [(x, statistics.median(buckets[x])) for x in sorted(buckets)]


def fit_rate(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Slope, intercept and R^2 of log(y) on log(x)."""
    if len(points) < MIN_POINTS:
        raise InsufficientDataError(f"need at least {MIN_POINTS} distinct x values, got {len(points)}")
    if any(x <= 0 or y <= 0 for x, y in points):
        raise InvalidInputError("log-log fit needs strictly positive x and median error")
    fit = stats.linregress([math.log(x) for x, _ in points], [math.log(y) for _, y in points])
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


def compute_rates(
    records: Sequence[TrialRecord],
    group_by: Sequence[str] = ("estimator",),
    x_var: str = "n",
    metric: str = "err_l2",
) -> List[RateFit]:
    known = set(BENCH_COLUMNS)
    for column in (*group_by, x_var):
        if column not in known:
            raise InvalidInputError(f"unknown bench column {column!r}")
    if metric not in known and not metric.startswith("err_lp"):
        raise InvalidInputError(f"unknown metric {metric!r}")

    groups: Dict[str, List[TrialRecord]] = defaultdict(list)
    for record in records:
        groups[_group_label(record, group_by)].append(record)

    fits = []
    for label in sorted(groups):
        points = median_curve(groups[label], x_var, metric)
        slope, intercept, r_squared = fit_rate(points)
        logger.info(f"rate {label}: {metric} ~ {x_var}^{slope:.3f} (R^2={r_squared:.3f})")
        fits.append(RateFit(label, metric, x_var, slope, intercept, r_squared, len(points)))
    return fits


def write_rates(fits: Iterable[RateFit], handle: TextIO) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(RATE_COLUMNS)
    for fit in fits:
        writer.writerow(
            [fit.group, fit.metric, fit.x_var, repr(fit.slope), repr(fit.intercept), repr(fit.r_squared), fit.points]
        )

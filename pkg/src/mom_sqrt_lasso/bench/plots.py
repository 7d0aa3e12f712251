"""Error curves and convergence traces as deterministic SVG or gnuplot columns.

Each plotted series is a matplotlib line whose gid is ``series-<name>``, so
the SVG wraps its markers in ``<g id="series-<name>">``.
"""

import logging
from collections import defaultdict
from enum import Enum
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from ..solver.saddle import TraceEntry  # noqa: E402
from .rates import median_curve  # noqa: E402
from .records import TrialRecord  # noqa: E402

logger = logging.getLogger(__name__)

Series = Dict[str, List[Tuple[float, float]]]

SVG_RC = {"svg.hashsalt": "mom-sqrt-lasso", "svg.fonttype": "none"}


class PlotKind(str, Enum):
    ERROR_VS_N = "error-vs-n"
    BREAKDOWN = "breakdown"
    TRACE = "trace"


class PlotFormat(str, Enum):
    SVG = "svg"
    DAT = "dat"


def _by_estimator(records: Sequence[TrialRecord], x_var: str, metric: str) -> Series:
    grouped: Dict[str, List[TrialRecord]] = defaultdict(list)
    for record in records:
        grouped[record.estimator].append(record)
    return {name: median_curve(rows, x_var, metric) for name, rows in grouped.items()}


def error_vs_n_series(records: Sequence[TrialRecord], metric: str = "err_l2") -> Series:
    return _by_estimator(records, "n", metric)


def breakdown_series(records: Sequence[TrialRecord], metric: str = "err_l2") -> Series:
    return _by_estimator(records, "n_outliers", metric)


def trace_series(trace: Sequence[TraceEntry]) -> Series:
    return {"trace": [(float(e.iteration), float(e.value)) for e in sorted(trace, key=lambda e: e.iteration)]}


def write_dat(series: Series, path: Union[str, Path], x_label: str, y_label: str) -> None:
    """Whitespace-separated columns, one block per series separated by blank lines."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# series {x_label} {y_label}\n")
        for i, name in enumerate(sorted(series)):
            if i:
                handle.write("\n\n")
            for x, y in series[name]:
                handle.write(f"{name} {x!r} {y!r}\n")


def write_svg(
    series: Series,
    path: Union[str, Path],
    x_label: str,
    y_label: str,
    log_x: bool,
    log_y: bool,
) -> None:
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6, 4))
        ax = fig.add_subplot()
        for name in sorted(series):
            points = series[name]
            (line,) = ax.plot([x for x, _ in points], [y for _, y in points], marker="o", label=name)
            line.set_gid(f"series-{name}")
        if log_x:
            ax.set_xscale("log")
        if log_y:
            ax.set_yscale("log")
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        if len(series) > 1:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})


def render(
    kind: PlotKind,
    series: Series,
    out: Union[str, Path],
    fmt: PlotFormat = PlotFormat.SVG,
    metric: str = "err_l2",
) -> Path:
    kind, fmt = PlotKind(kind), PlotFormat(fmt)
    x_label, log_x, log_y = {
        PlotKind.ERROR_VS_N: ("n", True, True),
        PlotKind.BREAKDOWN: ("n_outliers", False, True),
        PlotKind.TRACE: ("iteration", False, False),
    }[kind]
    y_label = "objective" if kind is PlotKind.TRACE else f"median {metric}"
    if fmt is PlotFormat.DAT:
        write_dat(series, out, x_label, y_label.replace(" ", "_"))
    else:
        write_svg(series, out, x_label, y_label, log_x, log_y)
    logger.info(f"wrote {kind.value} plot with {len(series)} series to {out}")
    return Path(out)

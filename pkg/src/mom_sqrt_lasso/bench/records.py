"""Bench CSV rows, the cell sidecar and objective-trace CSVs."""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from ..exceptions import DatasetParseError
from ..solver.saddle import TraceEntry
from .config import GRID_KEYS, CellSpec

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

BENCH_COLUMNS = (
    "cell_id",
    "estimator",
    "trial",
    "n",
    "d",
    "s",
    "sigma_star",
    "n_outliers",
    "err_l1",
    "err_l2",
    "sigma_err",
    "s_selected",
    "runtime_ms",
    "status",
    "seed",
)
TRACE_COLUMNS = ("iteration", "value", "median_block")
LP_PREFIX = "err_lp"

STATUS_OK = "ok"


@dataclass(frozen=True)
class TrialRecord:
    cell_id: int
    estimator: str
    trial: int
    n: int
    d: int
    s: int
    sigma_star: float
    n_outliers: int
    err_l1: Optional[float]
    err_l2: Optional[float]
    sigma_err: Optional[float]
    s_selected: Optional[int]
    runtime_ms: Optional[float]
    status: str
    seed: int
    err_lp: Dict[float, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def value(self, column: str):
        if column.startswith(LP_PREFIX):
            return self.err_lp.get(float(column[len(LP_PREFIX):]))
        return getattr(self, column)


def lp_column(p: float) -> str:
    return f"{LP_PREFIX}{p:g}"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _opt(text: str, kind):
    return None if text == "" else kind(text)


def write_records(records: Iterable[TrialRecord], path: PathLike, lp_norms: Sequence[float] = ()) -> None:
    columns = list(BENCH_COLUMNS) + [lp_column(p) for p in lp_norms]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for record in records:
            row = {name: _fmt(getattr(record, name)) for name in BENCH_COLUMNS}
            for p in lp_norms:
                row[lp_column(p)] = _fmt(record.err_lp.get(float(p)))
            writer.writerow(row)


def read_records(path: PathLike) -> List[TrialRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = [c for c in BENCH_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise DatasetParseError(f"bench CSV lacks columns {', '.join(missing)}", line=1)
        lp_columns = [c for c in reader.fieldnames if c.startswith(LP_PREFIX)]
        for row in reader:
            try:
                err_lp = {
                    float(c[len(LP_PREFIX):]): float(row[c]) for c in lp_columns if row[c] != ""
                }
                records.append(
                    TrialRecord(
                        cell_id=int(row["cell_id"]),
                        estimator=row["estimator"],
                        trial=int(row["trial"]),
                        n=int(row["n"]),
                        d=int(row["d"]),
                        s=int(row["s"]),
                        sigma_star=float(row["sigma_star"]),
                        n_outliers=int(row["n_outliers"]),
                        err_l1=_opt(row["err_l1"], float),
                        err_l2=_opt(row["err_l2"], float),
                        sigma_err=_opt(row["sigma_err"], float),
                        s_selected=_opt(row["s_selected"], int),
                        runtime_ms=_opt(row["runtime_ms"], float),
                        status=row["status"],
                        seed=int(row["seed"]),
                        err_lp=err_lp,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise DatasetParseError(str(exc), line=reader.line_num) from None
    return records


def write_cells(cells: Iterable[CellSpec], path: PathLike, sigma_plus: Dict[int, float]) -> None:
    columns = ["cell_id", *GRID_KEYS, "sigma_plus"]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for cell in cells:
            row = {key: _fmt(value) for key, value in cell.as_row().items()}
            row["sigma_plus"] = _fmt(sigma_plus[cell.cell_id])
            writer.writerow(row)


def write_trace(trace: Iterable[TraceEntry], path: PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for entry in trace:
            writer.writerow([entry.iteration, repr(float(entry.value)), entry.median_block])


def read_trace(path: PathLike) -> List[TraceEntry]:
    entries = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != TRACE_COLUMNS:
            raise DatasetParseError(f"trace CSV header must be {','.join(TRACE_COLUMNS)}", line=1)
        for row in reader:
            try:
                entries.append(
                    TraceEntry(int(row["iteration"]), float(row["value"]), int(row["median_block"]))
                )
            except (TypeError, ValueError) as exc:
                raise DatasetParseError(str(exc), line=reader.line_num) from None
    return entries

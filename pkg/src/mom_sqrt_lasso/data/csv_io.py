"""Dataset CSV (``y,x1,...,xd``) and the JSON truth sidecar written by ``simulate``."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ..exceptions import DatasetParseError, InvalidInputError
from .dataset import Dataset, GroundTruth

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def dataset_header(d: int):
    return ["y"] + [f"x{j}" for j in range(1, d + 1)]


def write_dataset_csv(data: Dataset, path: PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(dataset_header(data.d))
        for yi, xi in zip(data.y, data.x):
            writer.writerow([repr(float(yi))] + [repr(float(v)) for v in xi])


def read_dataset_csv(path: PathLike, truth_path: Optional[PathLike] = None) -> Dataset:
    """Parse a dataset CSV; errors carry the 1-based line number."""
    rows = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetParseError("empty file", line=1) from None
        header = [h.strip() for h in header]
        if not header or header[0] != "y" or len(header) < 2:
            raise DatasetParseError("header must be y,x1,...,xd", line=1)
        if header != dataset_header(len(header) - 1):
            raise DatasetParseError(f"unexpected header {','.join(header)}", line=1)
        width = len(header)
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != width:
                raise DatasetParseError(f"expected {width} fields, got {len(row)}", line=line)
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise DatasetParseError(str(exc), line=line) from None
            if not all(math.isfinite(v) for v in values):
                raise DatasetParseError("non-finite value", line=line)
            rows.append(values)
    if not rows:
        raise DatasetParseError("no data rows", line=2)

    table = np.array(rows, dtype=float)
    truth, outliers = (None, frozenset()) if truth_path is None else read_truth_json(truth_path)
    logger.debug(f"read {table.shape[0]} rows x {table.shape[1] - 1} features from {path}")
    return Dataset(x=table[:, 1:], y=table[:, 0], truth=truth, outliers=outliers)


def truth_payload(data: Dataset) -> Dict[str, Any]:
    if data.truth is None:
        raise InvalidInputError("dataset carries no ground truth")
    return {
        "beta_star": [float(v) for v in data.truth.beta_star],
        "sigma_star": float(data.truth.sigma_star),
        "noise": data.truth.noise,
        "outliers": sorted(data.outliers),
    }


def write_truth_json(data: Dataset, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(truth_payload(data), handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_truth_json(path: PathLike):
    """Return (GroundTruth, outlier set) from a sidecar file."""
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DatasetParseError(exc.msg, line=exc.lineno) from None
    try:
        truth = GroundTruth(
            beta_star=np.asarray(payload["beta_star"], dtype=float),
            sigma_star=float(payload["sigma_star"]),
            noise=str(payload.get("noise", "")),
        )
        outliers = frozenset(int(i) for i in payload.get("outliers", []))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed truth file {path}: {exc}") from None
    return truth, outliers

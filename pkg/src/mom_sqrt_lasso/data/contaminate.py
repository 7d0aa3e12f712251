"""Replace m rows of a dataset by corrupted observations."""

import logging
from dataclasses import replace
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import InvalidInputError
from .dataset import Dataset

logger = logging.getLogger(__name__)


class ContaminationModel(str, Enum):
    NONE = "none"
    RESPONSE = "response"
    LEVERAGE = "leverage"
    FLIP = "flip"


DEFAULT_MAGNITUDE = {
    ContaminationModel.NONE: 0.0,
    ContaminationModel.RESPONSE: 1e6,
    ContaminationModel.LEVERAGE: 10.0,
    ContaminationModel.FLIP: 1.0,
}


def contamination_rng(seed) -> np.random.Generator:
    """Philox stream used to pick and corrupt rows; ``seed`` is an int or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def contaminate(
    data: Dataset,
    model: ContaminationModel,
    m: int,
    seed,
    magnitude: Optional[float] = None,
) -> Dataset:
    """Corrupt ``m`` seeded rows and add them to ``data.outliers``.

    * response: y_i <- +-magnitude (random sign)
    * leverage: x_i <- magnitude * x_i
    * flip:     y_i <- -magnitude * y_i
    """
    model = ContaminationModel(model)
    if m < 0 or m > data.n:
        raise InvalidInputError(f"need 0 <= m <= n, got m={m}, n={data.n}")
    if m == 0 or model is ContaminationModel.NONE:
        return data
    if magnitude is None:
        magnitude = DEFAULT_MAGNITUDE[model]

    rng = contamination_rng(seed)
    rows = np.sort(rng.choice(data.n, size=m, replace=False))
    x = data.x.copy()
    y = data.y.copy()
    if model is ContaminationModel.RESPONSE:
        signs = rng.choice(np.array([-1.0, 1.0]), size=m)
        y[rows] = signs * magnitude
    elif model is ContaminationModel.LEVERAGE:
        x[rows] = x[rows] * magnitude
    else:
        y[rows] = -magnitude * y[rows]
    logger.debug(f"contaminated {m} rows with {model.value} (magnitude={magnitude})")
    return replace(data, x=x, y=y, outliers=data.outliers | frozenset(int(i) for i in rows))

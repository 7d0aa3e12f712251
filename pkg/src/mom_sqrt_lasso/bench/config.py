"""TOML experiment configuration and grid expansion.

A config file is flat ``key = value`` TOML. Grid keys take a list (a scalar
is read as a one-element list) and the grid is their Cartesian product in the
order of :data:`GRID_KEYS`; every other key is a scalar.
"""

import itertools
import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..core.criterion import DEFAULT_C
from ..data.generate import BetaPattern, GenSpec
from ..estimators.tuning import TuningSchedule
from ..exceptions import InvalidInputError
from ..solver.saddle import SolverConfig

logger = logging.getLogger(__name__)


class EstimatorName(str, Enum):
    MOM_FIXED = "mom-fixed"
    MOM_EST_SIGMA = "mom-est-sigma"
    MOM_ADAPTIVE = "mom-adaptive"
    SQRT_LASSO = "sqrt-lasso"
    LASSO = "lasso"


GRID_KEYS: Tuple[str, ...] = (
    "n",
    "d",
    "s",
    "sigma_star",
    "design",
    "noise",
    "contamination",
    "n_outliers",
    "magnitude",
    "c1_tilde",
    "c2_tilde",
)

GRID_DEFAULTS: Dict[str, List[Any]] = {
    "n": [400],
    "d": [200],
    "s": [4],
    "sigma_star": [0.5],
    "design": ["gaussian"],
    "noise": ["gaussian"],
    "contamination": ["none"],
    "n_outliers": [0],
    "magnitude": [None],
    "c1_tilde": [1.0],
    "c2_tilde": [1.0],
}

SCALAR_KEYS = {
    "trials",
    "estimators",
    "seed",
    "sigma_plus",
    "s_plus",
    "iota_k",
    "iota_mu",
    "c",
    "max_iters",
    "step_size",
    "tol",
    "averaging_window",
    "lp_norms",
    "lasso_lambda",
    "sqrt_lasso_mu",
    "nu",
    "beta_pattern",
}


@dataclass(frozen=True)
class CellSpec:
    """One point of the grid."""

    cell_id: int
    n: int
    d: int
    s: int
    sigma_star: float
    design: str
    noise: str
    contamination: str
    n_outliers: int
    magnitude: Optional[float]
    c1_tilde: float
    c2_tilde: float

    def as_row(self) -> Dict[str, Any]:
        return {
            "cell_id": self.cell_id,
            **{key: getattr(self, key) for key in GRID_KEYS},
        }


@dataclass(frozen=True)
class ExperimentConfig:
    grid: Dict[str, List[Any]]
    trials: int = 1
    estimators: Tuple[EstimatorName, ...] = (EstimatorName.MOM_FIXED, EstimatorName.SQRT_LASSO)
    seed: int = 0
    sigma_plus: Optional[float] = None
    s_plus: Optional[int] = None
    iota_k: float = 1.0
    iota_mu: float = 1.0
    c: float = DEFAULT_C
    max_iters: int = 2000
    step_size: float = 0.5
    tol: float = 1e-4
    averaging_window: float = 0.5
    lp_norms: Tuple[float, ...] = ()
    lasso_lambda: Optional[float] = None
    sqrt_lasso_mu: Optional[float] = None
    nu: float = 5.0
    beta_pattern: str = BetaPattern.FIRST_S_ONES.value
    source: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        grid = {key: list(self.grid.get(key, GRID_DEFAULTS[key])) for key in GRID_KEYS}
        for key, values in grid.items():
            if not values:
                raise InvalidInputError(f"grid key {key!r} is empty")
        object.__setattr__(self, "grid", grid)
        try:
            object.__setattr__(
                self, "estimators", tuple(EstimatorName(e) for e in self.estimators)
            )
        except ValueError as exc:
            raise InvalidInputError(str(exc)) from None
        if not self.estimators:
            raise InvalidInputError("at least one estimator is required")
        if self.trials < 1:
            raise InvalidInputError(f"trials must be >= 1, got {self.trials}")
        for p in self.lp_norms:
            if not 1 <= p <= 2:
                raise InvalidInputError(f"lp_norms entries must lie in [1, 2], got {p}")
        object.__setattr__(self, "lp_norms", tuple(float(p) for p in self.lp_norms))
        # fail fast on values the trial workers would reject
        for cell in self.cells():
            self.gen_spec(cell, seed=0)
            self.tuning(cell)
        self.solver_config()

    def cells(self) -> List[CellSpec]:
        combos = itertools.product(*(self.grid[key] for key in GRID_KEYS))
        return [
            CellSpec(cell_id, **dict(zip(GRID_KEYS, combo)))
            for cell_id, combo in enumerate(combos)
        ]

    def tuning(self, cell: CellSpec) -> TuningSchedule:
        return TuningSchedule(
            c1_tilde=float(cell.c1_tilde),
            c2_tilde=float(cell.c2_tilde),
            iota_k=self.iota_k,
            iota_mu=self.iota_mu,
        )

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            max_iters=self.max_iters,
            step_size=self.step_size,
            tol=self.tol,
            averaging_window=self.averaging_window,
        )

    def cell_sigma_plus(self, cell: CellSpec) -> float:
        """sigma_plus if configured, else 2 sigma* (1 for noiseless cells)."""
        if self.sigma_plus is not None:
            return float(self.sigma_plus)
        return 2.0 * cell.sigma_star if cell.sigma_star > 0 else 1.0

    def cell_s_plus(self, cell: CellSpec) -> int:
        if self.s_plus is not None:
            return min(int(self.s_plus), cell.d)
        return min(max(2 * cell.s, 2), cell.d)

    def gen_spec(self, cell: CellSpec, seed: int) -> GenSpec:
        return GenSpec(
            n=cell.n,
            d=cell.d,
            s=cell.s,
            sigma_star=cell.sigma_star,
            design=cell.design,
            noise=cell.noise,
            noise_nu=self.nu,
            beta_pattern=self.beta_pattern,
            contamination=cell.contamination,
            n_outliers=cell.n_outliers,
            contamination_magnitude=cell.magnitude,
            seed=seed,
        )


def _as_list(value: Any) -> List[Any]:
    return list(value) if isinstance(value, list) else [value]


def config_from_mapping(raw: Dict[str, Any], source: Optional[str] = None) -> ExperimentConfig:
    unknown = sorted(set(raw) - set(GRID_KEYS) - SCALAR_KEYS)
    if unknown:
        raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}")
    grid = {key: _as_list(raw[key]) for key in GRID_KEYS if key in raw}
    scalars = {key: raw[key] for key in SCALAR_KEYS if key in raw}
    for key in ("estimators", "lp_norms"):
        if key in scalars:
            scalars[key] = tuple(_as_list(scalars[key]))
    for key, value in scalars.items():
        if isinstance(value, list):
            raise InvalidInputError(f"{key!r} must be a scalar")
    try:
        return ExperimentConfig(grid=grid, source=source, **scalars)
    except TypeError as exc:
        raise InvalidInputError(f"bad config value: {exc}") from None


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    with open(path, "rb") as handle:
        try:
            raw = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise InvalidInputError(f"{path}: {exc}") from None
    config = config_from_mapping(raw, source=str(path))
    n_cells = math.prod(len(v) for v in config.grid.values())
    logger.info(f"loaded {path}: {n_cells} cells x {config.trials} trials x {len(config.estimators)} estimators")
    return config

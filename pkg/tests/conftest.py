import sys
from pathlib import Path

import numpy as np
import pytest  # type: ignore

PROJECT_ROOT = Path(__file__).resolve().parents[1]
SRC_PATH = PROJECT_ROOT / "src"
if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))

from mom_sqrt_lasso.data.dataset import Dataset, GroundTruth  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def make_linear_data(n: int, d: int, s: int, sigma: float, seed: int, scale: float = 1.0) -> Dataset:
    """y = X beta* + sigma * noise with beta* = first s ones, Gaussian everything."""
    gen = np.random.default_rng(seed)
    x = gen.standard_normal((n, d))
    beta = np.zeros(d)
    beta[:s] = scale
    y = x @ beta + sigma * gen.standard_normal(n)
    return Dataset(x=x, y=y, truth=GroundTruth(beta_star=beta, sigma_star=sigma))


@pytest.fixture
def linear_data():
    return make_linear_data


def make_record(**overrides):
    from mom_sqrt_lasso.bench.records import TrialRecord

    fields = dict(
        cell_id=0,
        estimator="mom-fixed",
        trial=0,
        n=100,
        d=20,
        s=2,
        sigma_star=0.5,
        n_outliers=0,
        err_l1=0.4,
        err_l2=0.3,
        sigma_err=0.05,
        s_selected=None,
        runtime_ms=None,
        status="ok",
        seed=1,
    )
    fields.update(overrides)
    return TrialRecord(**fields)


@pytest.fixture
def record_factory():
    return make_record

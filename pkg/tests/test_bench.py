import csv

import pytest  # type: ignore

from mom_sqrt_lasso.bench.config import GRID_KEYS, EstimatorName, config_from_mapping, load_config
from mom_sqrt_lasso.bench.metrics import (
    check_record,
    interpolation_bound,
    interpolation_holds,
    lp_error,
    norm_ordering_holds,
)
from mom_sqrt_lasso.bench.records import (
    BENCH_COLUMNS,
    lp_column,
    read_records,
    read_trace,
    write_records,
    write_trace,
)
from mom_sqrt_lasso.bench.runner import cells_path, run_bench, trial_seed, write_bench
from mom_sqrt_lasso.exceptions import DatasetParseError, InvalidInputError
from mom_sqrt_lasso.solver.saddle import TraceEntry

SMALL = {
    "n": 100,
    "d": 20,
    "s": 2,
    "sigma_star": 0.5,
    "trials": 1,
    "estimators": ["mom-fixed", "sqrt-lasso", "lasso"],
    "max_iters": 200,
    "seed": 11,
}


# ----------------------------------------------------------------------
# Config
# ----------------------------------------------------------------------


def test_scalar_grid_values_become_lists() -> None:
    config = config_from_mapping({"n": 50, "d": [10, 20], "s": 1})
    assert config.grid["n"] == [50]
    assert config.grid["d"] == [10, 20]
    assert set(config.grid) == set(GRID_KEYS)
    assert [cell.d for cell in config.cells()] == [10, 20]
    assert [cell.cell_id for cell in config.cells()] == [0, 1]


def test_grid_is_cartesian_product() -> None:
    config = config_from_mapping({"n": [50, 100, 200], "d": 10, "s": [1, 2]})
    cells = config.cells()
    assert len(cells) == 6
    assert [(c.n, c.s) for c in cells[:2]] == [(50, 1), (50, 2)]


@pytest.mark.parametrize(
    "raw",
    [
        {"n": 50, "d": 10, "s": 1, "colour": "red"},
        {"n": 50, "d": 10, "s": 1, "estimators": ["ridge"]},
        {"n": 50, "d": 10, "s": 1, "lp_norms": [0.5]},
        {"n": 50, "d": 10, "s": 1, "lp_norms": [3]},
        {"n": 50, "d": 10, "s": 1, "trials": 0},
        {"n": 50, "d": 10, "s": 1, "seed": [1, 2]},
        {"n": [], "d": 10, "s": 1},
        {"n": 50, "d": 10, "s": 11},
    ],
)
def test_bad_config_rejected(raw) -> None:
    with pytest.raises(InvalidInputError):
        config_from_mapping(raw)


def test_load_config_from_toml(tmp_path) -> None:
    path = tmp_path / "grid.toml"
    path.write_text('n = [100, 200]\nd = 20\ns = 2\ntrials = 3\nestimators = ["mom-fixed", "lasso"]\n')
    config = load_config(path)
    assert config.trials == 3
    assert config.estimators == (EstimatorName.MOM_FIXED, EstimatorName.LASSO)
    assert config.source == str(path)
    assert len(config.cells()) == 2


def test_load_config_reports_bad_toml(tmp_path) -> None:
    path = tmp_path / "bad.toml"
    path.write_text("n = [100,\n")
    with pytest.raises(InvalidInputError):
        load_config(path)


def test_cell_defaults_for_scale_and_sparsity_bounds() -> None:
    config = config_from_mapping({"n": 50, "d": 3, "s": [1, 2], "sigma_star": [0.0, 0.4]})
    cells = {(c.s, c.sigma_star): c for c in config.cells()}
    assert config.cell_sigma_plus(cells[(1, 0.0)]) == 1.0
    assert config.cell_sigma_plus(cells[(1, 0.4)]) == 0.8
    assert config.cell_s_plus(cells[(1, 0.4)]) == 2
    assert config.cell_s_plus(cells[(2, 0.4)]) == 3


# ----------------------------------------------------------------------
# Seeds and runner
# ----------------------------------------------------------------------


def test_trial_seed_is_stable_and_distinct() -> None:
    assert trial_seed(0, 0, 0) == trial_seed(0, 0, 0)
    seeds = {trial_seed(master, cell, trial) for master in range(3) for cell in range(4) for trial in range(5)}
    assert len(seeds) == 60
    assert all(0 <= seed < 2**63 for seed in seeds)
    assert trial_seed(1, 2, 3) != trial_seed(1, 3, 2)


def test_small_grid_writes_one_row_per_estimator(tmp_path) -> None:
    config = config_from_mapping(SMALL)
    records = run_bench(config)
    assert [r.estimator for r in records] == ["mom-fixed", "sqrt-lasso", "lasso"]
    assert all(r.ok for r in records)
    assert all(r.runtime_ms is None for r in records)
    assert all(check_record(r) for r in records)

    out = tmp_path / "bench.csv"
    sidecar = write_bench(config, records, out)
    assert sidecar == cells_path(out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(BENCH_COLUMNS)
    assert len(lines) == 1 + 3
    with open(sidecar, newline="") as handle:
        (cell,) = list(csv.DictReader(handle))
    assert cell["n"] == "100" and cell["sigma_plus"] == "1.0"


def test_bench_rerun_is_byte_identical(tmp_path) -> None:
    config = config_from_mapping(SMALL)
    write_bench(config, run_bench(config), tmp_path / "a.csv")
    write_bench(config, run_bench(config), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_parallel_run_matches_serial() -> None:
    config = config_from_mapping({**SMALL, "n": [80, 120], "trials": 2, "estimators": ["mom-fixed", "lasso"]})
    assert run_bench(config, jobs=2) == run_bench(config, jobs=1)


def test_infeasible_cell_becomes_error_row() -> None:
    config = config_from_mapping(
        {"n": 20, "d": 50, "s": 10, "max_iters": 50, "estimators": ["mom-fixed", "lasso"]}
    )
    fixed, lasso = run_bench(config)
    assert fixed.status == "error:InfeasibleConfigurationError"
    assert fixed.err_l2 is None and not fixed.ok
    assert lasso.ok


def test_jobs_must_be_positive() -> None:
    with pytest.raises(InvalidInputError):
        run_bench(config_from_mapping(SMALL), jobs=0)


def test_lp_norm_columns(tmp_path) -> None:
    config = config_from_mapping({**SMALL, "estimators": ["lasso"], "lp_norms": [1.5]})
    (record,) = run_bench(config)
    assert set(record.err_lp) == {1.5}
    write_bench(config, [record], tmp_path / "lp.csv")
    header = (tmp_path / "lp.csv").read_text().splitlines()[0]
    assert header.endswith(",err_lp1.5")


# ----------------------------------------------------------------------
# Records
# ----------------------------------------------------------------------


def test_records_round_trip(tmp_path, record_factory) -> None:
    records = [
        record_factory(err_lp={1.5: 0.35}),
        record_factory(estimator="lasso", status="error:SolverDivergedError", err_l1=None, err_l2=None, sigma_err=None),
        record_factory(estimator="mom-adaptive", s_selected=4, runtime_ms=12.5),
    ]
    write_records(records, tmp_path / "r.csv", lp_norms=[1.5])
    back = read_records(tmp_path / "r.csv")
    assert back[1] == records[1]
    assert back[2] == records[2]
    assert back[0].err_lp == {1.5: 0.35}


def test_read_records_requires_columns(tmp_path) -> None:
    path = tmp_path / "short.csv"
    path.write_text("cell_id,estimator\n0,lasso\n")
    with pytest.raises(DatasetParseError) as excinfo:
        read_records(path)
    assert excinfo.value.line == 1


def test_read_records_reports_bad_row(tmp_path, record_factory) -> None:
    path = tmp_path / "r.csv"
    write_records([record_factory(), record_factory()], path)
    lines = path.read_text().splitlines()
    lines[2] = lines[2].replace("mom-fixed,0,100", "mom-fixed,zero,100")
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetParseError) as excinfo:
        read_records(path)
    assert excinfo.value.line == 3


def test_trace_round_trip(tmp_path) -> None:
    trace = [TraceEntry(1, 0.5, 2), TraceEntry(2, -0.125, 0)]
    write_trace(trace, tmp_path / "t.csv")
    assert read_trace(tmp_path / "t.csv") == trace
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "iteration,value,median_block"


def test_lp_column_name() -> None:
    assert lp_column(1.5) == "err_lp1.5"
    assert lp_column(2.0) == "err_lp2"


# ----------------------------------------------------------------------
# Metrics
# ----------------------------------------------------------------------


def test_lp_error_examples() -> None:
    assert lp_error([1.0, 0.0], [0.0, 1.0], 1) == 2.0
    assert lp_error([3.0, 4.0], [0.0, 0.0], 2) == 5.0


def test_interpolation_bound_endpoints() -> None:
    assert interpolation_bound(4.0, 3.0, 1.0) == 4.0
    assert interpolation_bound(4.0, 3.0, 2.0) == 3.0


def test_interpolation_holds_for_real_vectors(rng) -> None:
    for _ in range(200):
        v = rng.standard_normal(15) * rng.exponential(size=15)
        l1, l2 = lp_error(v, 0 * v, 1), lp_error(v, 0 * v, 2)
        lp = {p: lp_error(v, 0 * v, p) for p in (1.25, 1.5, 1.75)}
        assert norm_ordering_holds(l1, l2, 15)
        assert interpolation_holds(l1, l2, lp)


def test_check_record_flags_violations(record_factory, caplog) -> None:
    assert check_record(record_factory())
    assert check_record(record_factory(err_l1=None, err_l2=None, status="error:X"))
    with caplog.at_level("WARNING"):
        assert not check_record(record_factory(err_l1=0.1, err_l2=0.3))
    assert "norm check failed" in caplog.text
    assert not check_record(record_factory(err_l1=0.4, err_l2=0.3, err_lp={1.5: 10.0}))

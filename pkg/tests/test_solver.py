import numpy as np
import pytest  # type: ignore

from mom_sqrt_lasso.core.criterion import (
    CriterionParams,
    PlayerPoint,
    block_criterion,
    block_criterion_gradients,
)
from mom_sqrt_lasso.core.partition import BlockPartition, make_partition
from mom_sqrt_lasso.data.dataset import Dataset
from mom_sqrt_lasso.exceptions import InvalidInputError, MissingTraceError, SolverDivergedError
from mom_sqrt_lasso.solver.prox import fista_lasso, soft_threshold, spectral_sq_norm
from mom_sqrt_lasso.solver.saddle import SolverConfig, StepDecay, objective_trace, solve


# ----------------------------------------------------------------------
# Proximal helpers
# ----------------------------------------------------------------------


def test_soft_threshold() -> None:
    out = soft_threshold(np.array([-3.0, -0.5, 0.0, 0.5, 2.0]), 1.0)
    assert np.array_equal(out, [-2.0, 0.0, 0.0, 0.0, 1.0])


def test_spectral_sq_norm_of_identity_block() -> None:
    assert spectral_sq_norm(np.eye(4) * 2.0) == pytest.approx(1.0)
    assert spectral_sq_norm(np.empty((0, 3))) == 0.0


def test_fista_recovers_least_squares_without_penalty(linear_data) -> None:
    data = linear_data(n=100, d=5, s=2, sigma=0.0, seed=1)
    sol = fista_lasso(data.x, data.y, lam=0.0, max_iters=5000, tol=1e-12)
    assert sol.converged
    assert np.allclose(sol.beta, data.truth.beta_star, atol=1e-6)


def test_fista_with_zero_design_returns_zeros() -> None:
    sol = fista_lasso(np.zeros((3, 2)), np.ones(3), lam=0.1)
    assert np.array_equal(sol.beta, np.zeros(2))
    assert sol.iterations == 0


# ----------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_iters": 0},
        {"step_size": 0.0},
        {"tol": 0.0},
        {"averaging_window": 0.0},
        {"averaging_window": 1.5},
        {"scale_step_size": -1.0},
        {"check_every": 0},
        {"ascent_ratio": 0.0},
        {"step_decay": "linear"},
    ],
)
def test_solver_config_rejects(kwargs) -> None:
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_step_decay_coerced_from_string() -> None:
    cfg = SolverConfig(step_decay="constant")
    assert cfg.step_decay is StepDecay.CONSTANT
    assert cfg.decay(100) == 1.0
    assert SolverConfig().decay(4) == 0.5


# ----------------------------------------------------------------------
# solve()
# ----------------------------------------------------------------------


def test_zero_response_drives_scale_to_floor(rng) -> None:
    data = Dataset(x=rng.standard_normal((40, 3)), y=np.zeros(40))
    part = make_partition(40, 4, seed=0)
    params = CriterionParams(mu=0.1, sigma_plus=1.0)
    state = solve(data, part, params, SolverConfig(max_iters=1000))
    assert np.array_equal(state.running_average.beta, np.zeros(3))
    assert state.running_average.sigma == pytest.approx(params.sigma_floor)
    assert state.converged


def test_noiseless_sparse_recovery(linear_data) -> None:
    data = linear_data(n=400, d=20, s=3, sigma=0.0, seed=4)
    part = make_partition(data.n, 5, seed=1)
    params = CriterionParams(mu=1e-3, sigma_plus=1.0)
    cfg = SolverConfig(max_iters=2000, step_decay="constant", tol=1e-6)
    state = solve(data, part, params, cfg)
    error = np.linalg.norm(state.running_average.beta - data.truth.beta_star)
    assert error <= 1e-2


def test_solve_is_deterministic(linear_data) -> None:
    data = linear_data(n=120, d=8, s=2, sigma=0.5, seed=9)
    part = make_partition(data.n, 6, seed=3)
    params = CriterionParams(mu=0.2, sigma_plus=1.0)
    cfg = SolverConfig(max_iters=150, trace=True)
    a = solve(data, part, params, cfg)
    b = solve(data, part, params, cfg)
    assert np.array_equal(a.running_average.beta, b.running_average.beta)
    assert a.running_average.sigma == b.running_average.sigma
    assert a.trace == b.trace
    assert a.median_block_history == b.median_block_history


@pytest.mark.parametrize("max_iters", [1, 2, 5, 17, 60])
def test_every_stopping_point_is_feasible(linear_data, max_iters) -> None:
    data = linear_data(n=60, d=6, s=2, sigma=1.0, seed=2)
    part = make_partition(data.n, 5, seed=5)
    params = CriterionParams(mu=0.1, sigma_plus=0.7)
    state = solve(data, part, params, SolverConfig(max_iters=max_iters))
    for player in (state.min_player, state.max_player, state.running_average, state.avg_max_player):
        assert params.contains(player)
    assert 1 <= state.averaged_over <= state.iter == max_iters


def test_trace_has_one_entry_per_iteration(linear_data) -> None:
    data = linear_data(n=80, d=5, s=1, sigma=0.5, seed=3)
    part = make_partition(data.n, 4, seed=0)
    params = CriterionParams(mu=0.1, sigma_plus=1.0)
    state = solve(data, part, params, SolverConfig(max_iters=73, trace=True))
    trace = objective_trace(state)
    assert len(trace) == state.iter
    assert [entry.iteration for entry in trace] == list(range(1, state.iter + 1))
    assert all(0 <= entry.median_block < part.k for entry in trace)


def test_trace_missing_when_disabled(linear_data) -> None:
    data = linear_data(n=40, d=3, s=1, sigma=0.5, seed=3)
    state = solve(data, make_partition(40, 4, seed=0), CriterionParams(sigma_plus=1.0), SolverConfig(max_iters=5))
    with pytest.raises(MissingTraceError):
        objective_trace(state)


def test_median_block_switches_on_clean_data(linear_data) -> None:
    data = linear_data(n=200, d=10, s=2, sigma=1.0, seed=12)
    part = make_partition(data.n, 10, seed=6)
    params = CriterionParams(mu=0.1, sigma_plus=2.0)
    state = solve(data, part, params, SolverConfig(max_iters=500, tol=1e-12, trace=True))
    assert len({entry.median_block for entry in objective_trace(state)}) >= 2


@pytest.mark.parametrize("lam", [0.5, 2.0, 4.0])
def test_scaling_responses_scales_the_estimate(linear_data, lam) -> None:
    data = linear_data(n=90, d=6, s=2, sigma=0.5, seed=21)
    part = make_partition(data.n, 5, seed=2)
    cfg = SolverConfig(max_iters=200)
    base = solve(data, part, CriterionParams(mu=0.2, sigma_plus=1.0), cfg)
    scaled = solve(
        Dataset(x=data.x, y=lam * data.y), part, CriterionParams(mu=0.2, sigma_plus=lam), cfg
    )
    assert scaled.iter == base.iter
    assert np.array_equal(scaled.running_average.beta, lam * base.running_average.beta)
    assert scaled.running_average.sigma == lam * base.running_average.sigma


def test_warm_start_stays_feasible(linear_data) -> None:
    data = linear_data(n=100, d=8, s=2, sigma=0.5, seed=8)
    part = make_partition(data.n, 5, seed=1)
    params = CriterionParams(mu=0.2, sigma_plus=1.0)
    state = solve(data, part, params, SolverConfig(max_iters=100, warm_start=True))
    assert params.contains(state.running_average)


def test_small_descent_step_does_not_increase_block_criterion(linear_data) -> None:
    data = linear_data(n=60, d=4, s=2, sigma=0.5, seed=30)
    params = CriterionParams(sigma_plus=2.0)
    block = np.arange(12)
    f = PlayerPoint(np.full(4, 0.3), 1.1)
    g = PlayerPoint(np.full(4, -0.2), 0.6)
    grads = block_criterion_gradients(block, data, f, g, params)
    h = 1e-4
    moved = PlayerPoint(f.beta - h * grads.grad_beta, f.sigma - h * grads.grad_sigma)
    before = block_criterion(block, data, f, g, params)
    after = block_criterion(block, data, moved, g, params)
    assert after <= before + 1e-10


def test_partition_size_mismatch(linear_data) -> None:
    data = linear_data(n=30, d=3, s=1, sigma=0.5, seed=0)
    with pytest.raises(InvalidInputError):
        solve(data, make_partition(31, 3, seed=0), CriterionParams(sigma_plus=1.0))


def test_overflow_raises_diverged_with_iteration(rng) -> None:
    data = Dataset(x=rng.standard_normal((20, 2)), y=np.full(20, 1e300))
    part = make_partition(20, 4, seed=0)
    with np.errstate(all="ignore"):
        with pytest.raises(SolverDivergedError) as excinfo:
            solve(data, part, CriterionParams(sigma_plus=1.0), SolverConfig(max_iters=10))
    assert excinfo.value.iteration == 1


# ----------------------------------------------------------------------
# Median block selection
# ----------------------------------------------------------------------


def test_first_iteration_takes_block_zero(linear_data) -> None:
    # both players start at the same point, so every block criterion is 0
    data = linear_data(n=50, d=4, s=1, sigma=0.5, seed=2)
    part = make_partition(data.n, 5, seed=1)
    state = solve(data, part, CriterionParams(mu=0.1, sigma_plus=1.0), SolverConfig(max_iters=3, trace=True))
    first = objective_trace(state)[0]
    assert first.median_block == 0
    assert first.value == 0.0


def test_equal_step_sizes_keep_players_on_the_diagonal(linear_data) -> None:
    data = linear_data(n=100, d=6, s=2, sigma=0.5, seed=11)
    part = make_partition(data.n, 5, seed=2)
    cfg = SolverConfig(max_iters=60, ascent_ratio=1.0, trace=True)
    state = solve(data, part, CriterionParams(mu=0.1, sigma_plus=1.0), cfg)
    assert np.array_equal(state.min_player.beta, state.max_player.beta)
    assert state.min_player.sigma == state.max_player.sigma
    assert {entry.median_block for entry in objective_trace(state)} == {0}


def test_corrupted_minority_of_blocks_leaves_the_path_unchanged(rng) -> None:
    # five copies of the same 12 rows; corrupting two copies cannot move the median
    m, k, d = 12, 5, 4
    x_block = rng.standard_normal((m, d))
    y_block = x_block @ np.array([1.0, -1.0, 0.0, 0.0]) + 0.3 * rng.standard_normal(m)
    x = np.tile(x_block, (k, 1))
    y = np.tile(y_block, k)
    part = BlockPartition.from_blocks(m * k, np.arange(m * k).reshape(k, m))

    x_bad, y_bad = x.copy(), y.copy()
    for index in (3, 4):
        rows = part.block(index)
        y_bad[rows] = rng.uniform(-1e4, 1e4, size=m)
        x_bad[rows] *= 50.0

    params = CriterionParams(mu=0.05, sigma_plus=2.0)
    cfg = SolverConfig(max_iters=120, trace=True)
    clean = solve(Dataset(x=x, y=y), part, params, cfg)
    dirty = solve(Dataset(x=x_bad, y=y_bad), part, params, cfg)

    assert clean.iter == dirty.iter
    assert clean.trace == dirty.trace
    assert {entry.median_block for entry in objective_trace(dirty)} == {0}
    assert np.array_equal(clean.running_average.beta, dirty.running_average.beta)
    assert clean.running_average.sigma == dirty.running_average.sigma


def test_corrupted_block_is_never_the_median_once_started(linear_data) -> None:
    data = linear_data(n=330, d=5, s=2, sigma=0.5, seed=14)
    part = make_partition(data.n, 11, seed=4)
    y = data.y.copy()
    bad = part.block(7)
    y[bad] = np.where(np.arange(bad.size) % 2 == 0, 1e6, -1e6)
    corrupted = Dataset(x=data.x, y=y)

    cfg = SolverConfig(max_iters=400, tol=1e-12, trace=True)
    state = solve(corrupted, part, CriterionParams(mu=0.1, sigma_plus=1.0), cfg)
    late = [entry.median_block for entry in objective_trace(state) if entry.iteration > 100]
    assert state.iter > 100
    assert late
    assert 7 not in late

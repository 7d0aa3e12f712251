from fractions import Fraction

import numpy as np
import pytest  # type: ignore

from mom_sqrt_lasso.core.quantile import (
    QuantileSpec,
    as_fraction,
    is_quantile,
    quantile,
    quantile_at_least,
    quantile_at_most,
    quantile_position,
)
from mom_sqrt_lasso.exceptions import InvalidInputError

PROPERTY_CASES = [1000, pytest.param(10_000, marks=pytest.mark.slow)]


def _random_case(gen: np.random.Generator):
    k = int(gen.integers(1, 65))
    # small integers force ties, which is where representatives differ
    if gen.random() < 0.3:
        x = gen.integers(-3, 4, size=k).astype(float)
        y = gen.integers(-3, 4, size=k).astype(float)
    else:
        x = gen.standard_normal(k)
        y = gen.standard_normal(k)
    denominator = int(gen.choice([2, 3, 4, 5, 8, 10, 64, 100]))
    alpha = Fraction(int(gen.integers(1, denominator)), denominator)
    beta = Fraction(int(gen.integers(1, denominator)), denominator)
    return x, y, alpha, beta


@pytest.mark.parametrize(
    "x,alpha,expected",
    [
        ([3, 1, 2], Fraction(1, 2), 2.0),
        ([1, 2, 3, 4], Fraction(1, 2), 2.0),
        ([5, 5, 5, 5, 5], Fraction(3, 4), 5.0),
        ([4.0, 1.0, 3.0, 2.0, 0.0], 0.1, 0.0),
        ([4.0, 1.0, 3.0, 2.0, 0.0], 0.9, 4.0),
    ],
)
def test_quantile_examples(x, alpha, expected) -> None:
    assert quantile(x, alpha) == expected
    assert is_quantile(x, alpha, quantile(x, alpha))


def test_float_alpha_is_read_exactly() -> None:
    assert as_fraction(0.1) == Fraction(1, 10)
    # ceil(0.1 * 10) must be 1, not 2
    assert quantile(np.arange(10.0), 0.1) == 0.0


@pytest.mark.parametrize("alpha", [0, 1, 1.5, -0.2, float("nan")])
def test_alpha_outside_unit_interval_rejected(alpha) -> None:
    with pytest.raises(InvalidInputError):
        quantile([1.0, 2.0], alpha)


def test_empty_vector_rejected() -> None:
    with pytest.raises(InvalidInputError):
        quantile([], Fraction(1, 2))
    with pytest.raises(InvalidInputError):
        QuantileSpec(Fraction(1, 2), 0)


def test_quantile_spec_rank_in_range() -> None:
    for k in range(1, 30):
        for alpha in (Fraction(1, 7), Fraction(1, 2), Fraction(29, 30)):
            assert 1 <= QuantileSpec(alpha, k).rank <= k


def test_quantile_position_takes_smallest_index_on_ties() -> None:
    x = [2.0, 1.0, 2.0, 1.0]
    assert quantile_position(x, Fraction(1, 2)) == 1
    assert quantile_position(x, Fraction(3, 4)) == 0
    assert quantile_position([0.0] * 5, Fraction(1, 2)) == 0


def test_quantile_position_rejects_nan() -> None:
    with pytest.raises(InvalidInputError):
        quantile_position([np.nan, np.nan, 1.0], Fraction(1, 2))


def test_relational_helpers_match_definition() -> None:
    x = [1.0, 2.0]
    assert quantile_at_least(x, Fraction(1, 2), 2.0)
    assert quantile_at_most(x, Fraction(1, 2), 1.0)
    assert not quantile_at_most(x, Fraction(1, 2), 0.5)


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_membership_on_random_vectors(rng, cases) -> None:
    for _ in range(cases):
        x, _, alpha, _ = _random_case(rng)
        assert is_quantile(x, alpha, quantile(x, alpha))


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_monotonicity(rng, cases) -> None:
    for _ in range(cases):
        x, _, alpha, beta = _random_case(rng)
        lo, hi = sorted((alpha, beta))
        assert quantile(x, lo) <= quantile(x, hi)


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_opposite_relational_form(rng, cases) -> None:
    for _ in range(cases):
        x, _, alpha, _ = _random_case(rng)
        assert quantile_at_least(-x, 1 - alpha, -quantile(x, alpha))
        if (alpha * x.size).denominator != 1:
            assert quantile(x, alpha) >= -quantile(-x, 1 - alpha)


def test_opposite_fails_for_lower_representative_at_integer_rank() -> None:
    x = np.array([1.0, 2.0])
    half = Fraction(1, 2)
    assert quantile(x, half) == 1.0
    assert -quantile(-x, half) == 2.0


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_linearity(rng, cases) -> None:
    for _ in range(cases):
        x, _, alpha, _ = _random_case(rng)
        a = float(rng.choice([-1, 1]) * rng.uniform(0.1, 10))
        b = float(rng.uniform(-5, 5))
        lhs = quantile(a * x + b, alpha)
        rhs = abs(a) * quantile(np.sign(a) * x, alpha) + b
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_difference(rng, cases) -> None:
    checked = 0
    while checked < cases:
        x, y, alpha, beta = _random_case(rng)
        if alpha + beta >= 1:
            continue
        assert quantile(x - y, alpha) <= quantile(x, alpha + beta) - quantile(y, beta)
        checked += 1


@pytest.mark.parametrize("cases", PROPERTY_CASES)
def test_triangular(rng, cases) -> None:
    checked = 0
    while checked < cases:
        x, y, alpha, beta = _random_case(rng)
        if alpha + beta >= 1:
            continue
        assert quantile(x + y, alpha) <= quantile(x, alpha + beta) + quantile(y, 1 - beta)
        checked += 1

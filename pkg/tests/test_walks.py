import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausswalk.errors import DomainError
from gausswalk.theta import eval_p, eval_r_series
from gausswalk.walks import (
    StepProbabilities,
    decompose,
    jacobi_distribution,
    pick,
    ramanujan_distribution,
    sample_step,
    step_many,
    transition,
)

P0 = 0.48197262183243755
R0 = 0.036054756335124906


@pytest.mark.parametrize(
    "x, n, f",
    [(0.0, 0, 0.0), (2.5, 3, -0.5), (-1.3, -1, -0.3), (-0.5, 0, -0.5), (0.49999999999999994, 0, 0.49999999999999994)],
)
def test_decompose_examples(x, n, f):
    pos = decompose(x)
    assert pos.n == n
    assert pos.f == pytest.approx(f, abs=1e-15)


@given(st.floats(min_value=-1e6, max_value=1e6))
def test_decompose_half_open(x):
    pos = decompose(x)
    assert -0.5 <= pos.f < 0.5
    assert pos.n + pos.f == pytest.approx(x, abs=1e-9)


def test_decompose_rejects_nan():
    with pytest.raises(DomainError):
        decompose(float("nan"))


def test_jacobi_at_origin():
    d = jacobi_distribution(0.0, 1.0)
    assert d.support == (-1, 0, 1)
    assert d.prob(1) == pytest.approx(P0, abs=1e-12)
    assert d.prob(-1) == pytest.approx(P0, abs=1e-12)
    assert d.prob(0) == pytest.approx(R0, abs=1e-12)


def test_jacobi_away_from_origin_never_stays():
    d = jacobi_distribution(1.25, 1.0)
    assert d.prob(0) == 0.0
    assert d.prob(1) == pytest.approx(eval_p(1.25, 1.0).value, abs=1e-12)


def test_ramanujan_at_origin():
    d = ramanujan_distribution(0.0, 1.0)
    assert d.support == (-1, 1, 2)
    assert d.prob(1) == pytest.approx(P0, abs=1e-12)
    assert d.prob(-1) == pytest.approx(P0, abs=1e-12)
    assert d.prob(2) == pytest.approx(R0, abs=1e-12)


def test_ramanujan_negative_side_has_no_jump():
    d = ramanujan_distribution(-3.3, 1.0)
    assert d.prob(2) == 0.0
    assert d.prob(0) == 0.0


def test_ramanujan_climb_from_one():
    # 1.5 itself splits as 2 - 1/2, so approach it from the n = 1 side
    assert ramanujan_distribution(1.5, 1.0).prob(2) == 0.0
    d = ramanujan_distribution(1.5 - 1e-12, 1.0)
    expected = eval_p(1.5, 1.0).value - eval_r_series(0.5, 1.0).value * math.exp(1.0)
    assert expected >= 0
    assert d.prob(1) == pytest.approx(expected, abs=1e-9)


def test_ramanujan_needs_sigma_one():
    with pytest.raises(DomainError):
        ramanujan_distribution(0.0, 0.99)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(min_value=-40, max_value=40), sigma=st.floats(min_value=0.2, max_value=10))
def test_jacobi_sums_to_one(x, sigma):
    d = jacobi_distribution(x, sigma)
    assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-12)
    assert all(0 <= p <= 1 for p in d.probs)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(min_value=-40, max_value=40), sigma=st.floats(min_value=1.0, max_value=10))
def test_ramanujan_sums_to_one(x, sigma):
    d = ramanujan_distribution(x, sigma)
    assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-12)
    assert all(0 <= p <= 1 for p in d.probs)


def test_climb_probability_in_unit_interval_on_grid():
    for sigma in np.round(np.arange(1.0, 8.001, 0.05), 2).tolist():
        for f in np.round(np.arange(-0.5, 0.4999, 0.01), 2).tolist():
            support, probs = transition(1, f, sigma, "ramanujan")
            assert 0.0 <= probs[1] <= 1.0


def test_step_distribution_validation():
    with pytest.raises(DomainError):
        StepProbabilities((1, -1), (0.7, 0.7))
    with pytest.raises(DomainError):
        StepProbabilities((1,), (1.2,))
    with pytest.raises(DomainError):
        StepProbabilities((), ())


def test_degenerate_distribution_always_returns_its_point():
    d = StepProbabilities((1,), (1.0,))
    rng = np.random.default_rng(3)
    assert {sample_step(d, rng) for _ in range(1000)} == {1}


def test_pick_skips_zero_mass():
    assert pick((-1, 0, 1), (0.5, 0.0, 0.5), 0.5) == 1
    assert pick((-1, 0, 1), (0.0, 0.0, 1.0), 0.0) == 1
    assert pick((-1, 0, 1), (1.0, 0.0, 0.0), 0.999999) == -1


def test_sampling_is_reproducible():
    d = jacobi_distribution(0.3, 1.2)
    rng1, rng2 = np.random.default_rng(5), np.random.default_rng(5)
    a = [sample_step(d, rng1) for _ in range(500)]
    b = [sample_step(d, rng2) for _ in range(500)]
    assert a == b


def test_empirical_stay_fraction():
    rng = np.random.default_rng(2024)
    u = rng.random(10**6)
    d = jacobi_distribution(0.0, 1.0)
    # vectorized inverse CDF with the same ordering as pick
    down, stay, _ = d.probs
    frac = np.mean((u >= down) & (u < down + stay))
    assert abs(frac - 0.0361) <= 0.001


@pytest.mark.parametrize("walk", ["jacobi", "ramanujan"])
def test_step_many_matches_scalar_distribution(walk):
    rng = np.random.default_rng(9)
    sigma = 1.3
    for x0 in (-2.2, -0.4, 0.0, 0.3, 0.7, 1.1, 1.45, 3.6):
        steps = step_many(np.full(200_000, x0), sigma, walk, rng)
        dist = jacobi_distribution(x0, sigma) if walk == "jacobi" else ramanujan_distribution(x0, sigma)
        for s, p in zip(dist.support, dist.probs):
            assert abs(np.mean(steps == s) - p) <= 5 * math.sqrt(p * (1 - p) / 200_000) + 1e-9


@pytest.mark.parametrize("walk, sigma", [("jacobi", 0.8), ("ramanujan", 1.0)])
def test_trajectory_stays_on_coset(walk, sigma):
    rng = np.random.default_rng(1)
    x0 = rng.normal(0, sigma, 1000)
    x = x0.copy()
    for _ in range(50):
        step = step_many(x, sigma, walk, rng)
        assert np.all(step == np.round(step))
        x += step
    assert np.allclose(np.round(x - x0), x - x0, atol=1e-9)


def test_step_many_domain_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(DomainError):
        step_many([0.0], 0.5, "ramanujan", rng)
    with pytest.raises(DomainError):
        step_many([0.0], 1.0, "lazy", rng)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import random_dataset
from puretrees.core import Dataset
from puretrees.criteria import (best_cart_split, cell_mean, impurity_decrease, max_partition_score_oracle,
                                variance_criterion)


def test_cell_mean_examples(line4):
    assert cell_mean([0, 1, 2, 3], line4) == 1.0
    assert cell_mean([2], line4) == 2.0
    d = Dataset.from_arrays(np.zeros(3), [1.0, 2.0, 4.0])
    assert cell_mean([0, 2], d) == 2.5
    with pytest.raises(ValueError, match="empty cell"):
        cell_mean([], d)


def test_impurity_decrease_examples(line4):
    assert impurity_decrease([0, 1, 2, 3], [[0, 1], [2, 3]], line4) == 1.0
    assert impurity_decrease([0, 1, 2, 3], [[0, 1, 2, 3]], line4) == 0.0
    flat = Dataset.from_arrays(np.arange(4.0), np.full(4, 3.0))
    assert impurity_decrease(range(4), [[0, 3], [1], [2]], flat) == 0.0


def test_impurity_decrease_rejects_bad_partitions(line4):
    with pytest.raises(ValueError):
        impurity_decrease([0, 1, 2, 3], [[0, 1], []], line4)
    with pytest.raises(ValueError):
        impurity_decrease([0, 1, 2, 3], [[0, 1], [2]], line4)
    with pytest.raises(ValueError):
        impurity_decrease([0, 1, 2, 3], [[0, 1, 2], [2, 3]], line4)


def test_variance_criterion_examples(line4):
    assert variance_criterion(range(4), 0, 2.0, line4) == 0.0
    assert variance_criterion(range(4), 0, 1.0, line4) == pytest.approx(8 / 3, rel=1e-15)
    flat = Dataset.from_arrays(np.arange(4.0), np.ones(4))
    assert all(variance_criterion(range(4), 0, s, flat) == 0.0 for s in (0.0, 1.0, 2.0))
    with pytest.raises(ValueError, match="degenerate"):
        variance_criterion(range(4), 0, 4.0, line4)


def test_best_cart_split_examples(line4):
    c = best_cart_split(range(4), {0}, line4)
    assert (c.j, c.s, c.v_score) == (0, 2.0, 0.0)
    const = Dataset.from_arrays(np.ones((5, 2)), np.arange(5.0))
    assert best_cart_split(range(5), {0, 1}, const) is None


def test_best_cart_split_min_child():
    d = Dataset.from_arrays(np.arange(6.0), [9.0, 0, 0, 0, 0, 0])
    assert best_cart_split(range(6), {0}, d).s == 0.0
    c = best_cart_split(range(6), {0}, d, min_child=2)
    assert c.s == 1.0
    assert best_cart_split(range(6), {0}, d, min_child=4) is None


def test_tie_break_smallest_coordinate_then_value():
    # two identical columns and a symmetric response give exact ties
    X = np.array([[0, 0], [1, 1], [2, 2], [3, 3]], dtype=float)
    d = Dataset.from_arrays(X, [0.0, 1.0, 1.0, 0.0])
    c = best_cart_split(range(4), {0, 1}, d)
    assert (c.j, c.s) == (0, 0.0)
    assert (c.j, c.s) == oracles.exact_cart(X, d.response, np.arange(4), [0, 1])


def test_restricted_coordinates():
    rng = np.random.default_rng(3)
    X = rng.random((30, 4))
    y = X[:, 2] * 5 + rng.normal(size=30) * 0.1
    d = Dataset.from_arrays(X, y)
    assert best_cart_split(range(30), {0, 1, 2, 3}, d).j == 2
    assert best_cart_split(range(30), {1, 3}, d).j in (1, 3)
    with pytest.raises(ValueError):
        best_cart_split(range(30), set(), d)


@given(st.integers(0, 2**31), st.integers(2, 30), st.integers(1, 4), st.booleans())
def test_best_cart_split_matches_brute_force(seed, n, dims, discrete):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, dims, discrete)
    rows = np.sort(rng.choice(n, size=n, replace=True))
    got = best_cart_split(rows, range(dims), data)
    want = oracles.brute_cart(data.features, data.response, rows, range(dims))
    if want is None:
        assert got is None
        return
    assert (got.j, got.s) == want[:2]
    assert got.v_score == pytest.approx(want[2], rel=1e-9, abs=1e-9)
    assert got.v_score >= 0


def test_oracle_examples(line4):
    cands = [[[0], [1, 2, 3]], [[0, 1], [2, 3]], [[0, 1, 2], [3]]]
    assert max_partition_score_oracle(range(4), cands, line4) == (1, 1, 1)
    flat = Dataset.from_arrays(np.arange(4.0), np.zeros(4))
    assert max_partition_score_oracle(range(4), cands, flat) == (0, 0, 0)


@given(st.integers(0, 2**31), st.integers(2, 8))
def test_oracle_agreement_small(seed, n):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, 2, discrete=True)
    cands = []
    for j in range(2):
        for s in oracles.split_values(data.features[:, j]):
            m = data.features[:, j] <= s
            cands.append([np.flatnonzero(m), np.flatnonzero(~m)])
    if not cands:
        return
    a, b, c = max_partition_score_oracle(range(n), cands, data)
    assert a == b == c


@given(st.integers(0, 2**31), st.integers(2, 25))
def test_refinement_monotone(seed, n):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, 2)
    rows = np.arange(n)
    coarse_mask = data.features[:, 0] <= np.median(data.features[:, 0])
    coarse = [rows[coarse_mask], rows[~coarse_mask]]
    coarse = [c for c in coarse if c.size]
    fine = []
    for c in coarse:
        m = data.features[c, 1] <= np.median(data.features[c, 1])
        fine += [p for p in (c[m], c[~m]) if p.size]
    assert impurity_decrease(rows, fine, data) >= impurity_decrease(rows, coarse, data) - 1e-12


def test_identities_hold_exactly():
    y = [Fraction(v) for v in (1, 3, 4, 8)]
    left, right = y[:2], y[2:]
    M = sum(left) ** 2 / 2 + sum(right) ** 2 / 2
    V = sum((v - sum(left) / 2) ** 2 for v in left) + sum((v - sum(right) / 2) ** 2 for v in right)
    assert V + M == sum(v * v for v in y)

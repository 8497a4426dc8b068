import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from puretrees import EtConfig
from puretrees.core import LEAF, Dataset, partition_indices
from puretrees.criteria import best_cart_split, variance_criterion
from puretrees.growers.et import et_split, grow_et_tree
from puretrees.rng import RngStream


def test_constant_columns_give_leaf():
    data = Dataset.from_arrays(np.ones((10, 3)), np.arange(10.0))
    tree = grow_et_tree(data, np.arange(10), EtConfig(min_node_size=1), RngStream(0))
    assert tree.n_nodes == 1
    assert et_split(np.arange(10), data, EtConfig(), RngStream(0)) is None


def test_many_points_find_zero_error_split(line4):
    # whenever a drawn point lands in [2, 3) the best split is there
    for seed in range(200):
        j, s, gain = et_split(np.arange(4), line4, EtConfig(mtry=1, num_random_splits=1000), RngStream(seed))
        assert 2.0 <= s < 3.0
        assert gain == pytest.approx(1.0)


def test_single_random_split_frequency(line4):
    # one draw: the chosen point is uniform on (1, 4), so it lands in [2, 3) a third of the time
    pts = np.array([et_split(np.arange(4), line4, EtConfig(mtry=1), RngStream(s))[1] for s in range(3000)])
    assert abs(np.mean((pts >= 2) & (pts < 3)) - 1 / 3) < 0.03


@given(seed=st.integers(0, 2**31), n=st.integers(2, 30), nrs=st.integers(1, 5))
def test_split_point_strictly_inside_range(seed, n, nrs):
    rng = np.random.default_rng(seed)
    data = Dataset.from_arrays(rng.integers(0, 3, size=(n, 3)).astype(float), rng.normal(size=n))
    tree = grow_et_tree(data, np.arange(n), EtConfig(num_random_splits=nrs, min_node_size=1), RngStream(seed))
    members = {0: tree.resample}
    for i in range(tree.n_nodes):
        if tree.kind[i] == LEAF:
            continue
        rule = tree.node(i).rule
        x = data.features[members[i], rule.j]
        assert x.min() < rule.s < x.max()
        members[tree.left[i]], members[tree.right[i]] = partition_indices(members[i], rule, data)


@given(seed=st.integers(0, 2**31), n=st.integers(2, 20))
def test_et_gain_never_beats_cart(seed, n):
    rng = np.random.default_rng(seed)
    data = Dataset.from_arrays(rng.random((n, 3)), rng.normal(size=n))
    got = et_split(np.arange(n), data, EtConfig(num_random_splits=3), RngStream(seed))
    cart = best_cart_split(np.arange(n), range(3), data)
    sst = oracles.within_ss(data.response)
    if got is not None:
        assert got[2] * n <= sst - cart.v_score + 1e-9


def test_many_random_points_approach_cart():
    close = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 21))
        data = Dataset.from_arrays(rng.random((n, 3)), rng.normal(size=n))
        j, s, _ = et_split(np.arange(n), data, EtConfig(num_random_splits=100 * n), RngStream(seed))
        left = data.features[:, j] <= s
        v = variance_criterion(np.arange(n), j, s, data)
        close += abs(v - best_cart_split(np.arange(n), range(3), data).v_score) <= 1e-9
        assert left.any() and (~left).any()
    assert close >= 95

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from puretrees import RsrfConfig
from puretrees.core import LEAF, Axis, Dataset, partition_indices
from puretrees.criteria import impurity_decrease
from puretrees.growers.rsrf import (cart_cart_step, draw_random_split, grow_rsrf_tree, node_candidates,
                                   random_cart_step)
from puretrees.rng import RngStream


def test_random_split_value_frequencies():
    data = Dataset.from_arrays(np.array([1.0, 2.0, 3.0, 4.0]), np.zeros(4))
    rng = RngStream(0)
    c = np.array([draw_random_split(range(4), data, rng)[1] for _ in range(10000)])
    for v in (1.0, 2.0, 3.0):
        assert abs(np.mean(c == v) - 1 / 3) < 0.02


def test_random_split_constant_column():
    data = Dataset.from_arrays(np.full(5, 2.0), np.arange(5.0))
    assert draw_random_split(range(5), data, RngStream(0)) is None


def test_random_split_allowed_coordinate():
    data = Dataset.from_arrays(np.random.default_rng(0).random((10, 4)), np.zeros(10))
    rng = RngStream(4)
    assert all(draw_random_split(range(10), data, rng, allowed={2})[0] == 2 for _ in range(50))


def test_hand_trace_three_cells(line4):
    cfg = RsrfConfig()
    for seed in range(100):
        step = random_cart_step(range(4), line4, RngStream(seed), cfg)
        if step.splits[0] == (1, 0, 1.0):
            break
    else:
        pytest.fail("no seed drew c = 1")
    assert [c.tolist() for c in step.cells] == [[0], [1], [2, 3]]
    assert step.splits[1:] == ((3, 0, 2.0),)
    assert step.score == pytest.approx(1.0)


def test_cart_cart_trace(line4):
    step = cart_cart_step(range(4), line4, RngStream(0), RsrfConfig(include_cartcart=True))
    assert step.kind == "cart_cart"
    assert [c.tolist() for c in step.cells] == [[0, 1], [2, 3]]
    assert step.score == pytest.approx(1.0)


def test_depth_three_has_at_most_eight_cells():
    rng = np.random.default_rng(0)
    data = Dataset.from_arrays(rng.random((100, 3)), rng.normal(size=100))
    sizes = set()
    for seed in range(30):
        step = random_cart_step(range(100), data, RngStream(seed), RsrfConfig(depth=3))
        sizes.add(len(step.cells))
        assert np.array_equal(np.sort(np.concatenate(step.cells)), np.arange(100))
    assert max(sizes) == 8


def test_min_node_size_above_n(line4):
    tree = grow_rsrf_tree(line4, np.arange(4), RsrfConfig(min_node_size=5), RngStream(0))
    assert tree.n_nodes == 1 and tree.value[0] == 1.0


def _leaf_cells(tree, data):
    members = {0: tree.resample}
    out = []
    for i in range(tree.n_nodes):
        if tree.kind[i] == LEAF:
            out.append(np.sort(members[i]))
            continue
        members[tree.left[i]], members[tree.right[i]] = partition_indices(members[i], tree.node(i).rule, data)
    return sorted(c.tolist() for c in out)


@pytest.mark.parametrize("mode", ["not_fixed", "fixed"])
@given(seed=st.integers(0, 2**31), n=st.integers(4, 30), width=st.integers(1, 6), cc=st.booleans(),
       depth=st.integers(2, 3))
def test_installed_subtree_is_winner(mode, seed, n, width, cc, depth):
    rng = np.random.default_rng(seed)
    data = Dataset.from_arrays(rng.random((n, 3)), rng.normal(size=n))
    cfg = RsrfConfig(width=width, include_cartcart=cc, mtry_mode=mode, mtry_random_cart=2, min_node_size=n,
                     depth=depth)
    rows = np.arange(n)
    choice = node_candidates(rows, data, RngStream(seed), cfg)
    tree = grow_rsrf_tree(data, rows, cfg, RngStream(seed))
    if choice.winner is None:
        assert tree.n_nodes == 1
        return
    win = choice.candidates[choice.winner]
    assert _leaf_cells(tree, data) == sorted(c.tolist() for c in win.cells)
    for c in choice.candidates:
        if c is not None:
            assert c.score <= win.score + 1e-12
            assert c.score == pytest.approx(impurity_decrease(rows, c.cells, data), rel=1e-9, abs=1e-12)


def test_fixed_mode_shares_subsets_and_draw_counts():
    rng = np.random.default_rng(1)
    d, mr, mrc, W = 6, 3, 2, 7
    data = Dataset.from_arrays(rng.random((40, d)), rng.normal(size=40))
    cfg = RsrfConfig(width=W, mtry_mode="fixed", mtry_random=mr, mtry_random_cart=mrc)
    stream = RngStream(9)
    choice = node_candidates(range(40), data, stream, cfg)
    subsets = [tuple(map(tuple, c.subsets)) for c in choice.candidates]
    assert len(set(subsets)) == 1
    firsts = {c.splits[0][1] for c in choice.candidates}
    assert len(firsts) <= mr
    assert stream.draws() == mr + 2 * mrc + 2 * W


def test_not_fixed_mode_draws_fresh_subsets():
    rng = np.random.default_rng(1)
    d, mrc, W = 6, 2, 30
    data = Dataset.from_arrays(rng.random((40, d)), rng.normal(size=40))
    cfg = RsrfConfig(width=W, mtry_random_cart=mrc)
    stream = RngStream(9)
    choice = node_candidates(range(40), data, stream, cfg)
    subsets = {tuple(map(tuple, c.subsets)) for c in choice.candidates}
    assert len(subsets) > 1
    assert stream.draws() == W * (2 + 2 * mrc)


@given(seed=st.integers(0, 2**31), n=st.integers(4, 30))
def test_cart_refinement_never_lowers_score(seed, n):
    rng = np.random.default_rng(seed)
    data = Dataset.from_arrays(rng.random((n, 2)), rng.normal(size=n))
    step = random_cart_step(range(n), data, RngStream(seed), RsrfConfig())
    _, j, c = step.splits[0]
    left, right = partition_indices(range(n), Axis(j, c), data)
    assert step.score >= impurity_decrease(range(n), [left, right], data) - 1e-12


def test_wide_search_reaches_two_level_optimum_small():
    rng = np.random.default_rng(5)
    X = rng.integers(0, 4, size=(10, 2)).astype(float)
    y = rng.normal(size=10)
    data = Dataset.from_arrays(X, y)
    choice = node_candidates(range(10), data, RngStream(0), RsrfConfig(width=2000))
    best = choice.candidates[choice.winner].score
    assert best == pytest.approx(oracles.two_level_max(X, y), rel=1e-9, abs=1e-12)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from puretrees import RfConfig
from puretrees.core import (AXIS, LEAF, Axis, Dataset, Forest, IntfBivariate, decode_rule, partition_indices,
                            predict_forest, predict_tree, tree_from_buffers)
from puretrees.ensemble import fit_forest
from puretrees.growers.rf import grow_rf_tree
from puretrees.rng import RngStream


def leaf_tree(v):
    buf = [np.array([LEAF]), np.array([-1]), np.array([-1]), np.zeros(1), np.zeros(1),
           np.array([-1]), np.array([-1]), np.array([v]), np.array([1])]
    return tree_from_buffers(buf, [0])


def stump(j, s, a, b):
    buf = [np.array([AXIS, LEAF, LEAF]), np.array([j, -1, -1]), np.array([-1, -1, -1]),
           np.array([s, 0.0, 0.0]), np.zeros(3), np.array([1, -1, -1]), np.array([2, -1, -1]),
           np.array([0.0, a, b]), np.array([2, 1, 1])]
    return tree_from_buffers(buf, [0, 1, 2, 3])


def test_partition_axis_example(line4):
    left, right = partition_indices([0, 1, 2, 3], Axis(0, 2.0), line4)
    assert left.tolist() == [0, 1] and right.tolist() == [2, 3]


def test_partition_at_max_leaves_right_empty(line4):
    left, right = partition_indices([0, 1, 2, 3], Axis(0, 4.0), line4)
    assert right.size == 0 and left.size == 4


def test_partition_singleton(grid4):
    left, right = partition_indices([0], IntfBivariate("Checker", 0, 1, 0.5, 0.5), grid4)
    assert sorted([left.size, right.size]) == [0, 1]


@given(st.sampled_from(["LL", "LG", "GL", "GG", "Checker", "Single1", "Single2"]),
       st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**31))
def test_bivariate_partition_complete(variant, c1, c2, seed):
    rng = np.random.default_rng(seed)
    data = Dataset.from_arrays(rng.random((20, 3)), rng.random(20))
    cell = np.arange(0, 20, 2)
    left, right = partition_indices(cell, IntfBivariate(variant, 0, 2, c1, c2), data)
    assert np.array_equal(np.sort(np.concatenate([left, right])), cell)
    assert not set(left.tolist()) & set(right.tolist())


def test_bivariate_rejects_equal_coordinates():
    with pytest.raises(ValueError):
        IntfBivariate("LL", 1, 1, 0.0, 0.0)


def test_rule_encode_roundtrip():
    for rule in (Axis(2, 0.25), IntfBivariate("GL", 0, 3, 0.1, 0.9), IntfBivariate("Single2", 1, 0, 0.2, 0.4)):
        assert decode_rule(*rule.encode()) == rule


def test_predict_single_leaf():
    assert predict_tree(leaf_tree(3.5), [10.0, -4.0]) == 3.5


def test_predict_stump_routing():
    t = stump(0, 0.5, 1.0, 2.0)
    assert predict_tree(t, [0.2, 0.9]) == 1.0
    assert predict_tree(t, [0.7, 0.9]) == 2.0


def test_predict_rejects_nonfinite():
    with pytest.raises(ValueError):
        predict_tree(leaf_tree(1.0), [np.nan])


def test_fit_on_four_points(line4):
    tree = grow_rf_tree(line4, np.arange(4), RfConfig(mtry=1, min_node_size=2), RngStream(0))
    assert tree.predict(np.array([[1.0], [2.0], [3.0], [4.0], [2.5]])).tolist() == [0, 0, 2, 2, 2]


def test_forest_mean_of_trees():
    f = Forest([leaf_tree(1.0), leaf_tree(3.0)], RfConfig(), 0, 1)
    assert predict_forest(f, [0.0]) == 2.0
    g = Forest([stump(0, 0.5, 1.0, 2.0)] * 4, RfConfig(), 0, 1)
    assert predict_forest(g, [0.9]) == 2.0


def test_forest_rejects_wrong_width():
    f = Forest([leaf_tree(1.0)], RfConfig(), 0, 2)
    with pytest.raises(ValueError):
        f.predict(np.zeros((1, 3)))


def test_forest_prediction_is_mean_of_tree_predictions():
    rng = np.random.default_rng(0)
    X = rng.random((200, 6))
    y = X[:, 0] + rng.normal(size=200)
    f = fit_forest(Dataset.from_arrays(X, y), RfConfig(mtry=3), seed=1, num_trees=100, threads=1)
    x = rng.random(6)
    manual = np.mean([predict_tree(t, x) for t in f.trees])
    assert predict_forest(f, x) == pytest.approx(manual, rel=1e-14, abs=1e-14)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset.from_arrays(np.zeros((3, 2)), np.zeros(2))
    with pytest.raises(ValueError):
        Dataset.from_arrays(np.array([[np.inf]]), [0.0])
    d = Dataset.from_arrays(np.array([3.0, 1.0, 2.0]), [0, 1, 2])
    assert d.features.flags.f_contiguous and not d.features.flags.writeable
    assert d.column_sort_index[0].tolist() == [1, 2, 0]


def _check_structure(tree, data):
    rows = tree.resample
    # every internal node's children partition its rows; leaves hold the row mean
    members = {0: rows}
    for i in range(tree.n_nodes):
        cell = members[i]
        assert cell.size >= 1
        if tree.kind[i] == LEAF:
            assert tree.count[i] == cell.size
            assert tree.value[i] == pytest.approx(data.response[cell].mean(), rel=1e-12, abs=1e-12)
            continue
        left, right = partition_indices(cell, tree.node(i).rule, data)
        members[tree.left[i]], members[tree.right[i]] = left, right
    assert len(members) == tree.n_nodes
    leaves = tree.apply(data.features[rows])
    assert np.all(tree.kind[leaves] == LEAF)


@pytest.mark.parametrize("algo", ["rf", "et", "intf", "rsrf"])
@given(seed=st.integers(0, 2**31), n=st.integers(1, 40), discrete=st.booleans())
def test_fit_structure_invariants(algo, seed, n, discrete):
    from puretrees.config import build_config
    from conftest import random_dataset

    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, 3, discrete)
    cfg = build_config(algo, {"num_trees": 2, "min_node_size": 2})
    forest = fit_forest(data, cfg, seed=seed, threads=1)
    for tree in forest.trees:
        _check_structure(tree, data)

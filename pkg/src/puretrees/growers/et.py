"""Extremely Randomized Trees.

At each node ``mtry`` coordinates are drawn; each non-constant one receives
``num_random_splits`` split points drawn uniformly on the open interval
between the node minimum and maximum of that coordinate.  The best point by
impurity decrease is used.
"""
import numpy as np
from numba import njit

from ..core import AXIS, Dataset, Tree, make_workspace, tree_from_buffers
from ..criteria import TIE_RTOL, cell_stats, two_cell_gain
from ..rng import RngStream, draw_subset, uniform
from ._common import alloc_tree, axis_split_segment, set_leaf, set_split, trim_tree


@njit(cache=True, nogil=True)
def _open_interval_point(state, lo, hi):
    u = uniform(state)
    while u == 0.0:
        u = uniform(state)
    s = lo + u * (hi - lo)
    if s >= hi:
        s = np.nextafter(hi, lo)
    if s <= lo:
        s = np.nextafter(lo, hi)
    return s


@njit(cache=True, nogil=True)
def et_node_split(Xt, y, order, start, end, mtry, num_random_splits, label, state, perm):
    """Returns ``(j, s, gain, sst)``; ``j == -1`` if every drawn coordinate is constant."""
    d = Xt.shape[0]
    n, mu, sst, sc = cell_stats(y, order[0], start, end, label, 0)
    tol = TIE_RTOL * sst
    coords = draw_subset(state, d, mtry, perm)
    best_j = -1
    best_s = 0.0
    best_gain = -np.inf
    for j in coords:
        row = order[j]
        lo = Xt[j, row[start]]
        hi = Xt[j, row[end - 1]]
        if not lo < hi:
            continue
        for _ in range(num_random_splits):
            s = _open_interval_point(state, lo, hi)
            nl = 0
            sl = 0.0
            for k in range(start, end):
                p = row[k]
                if Xt[j, p] > s:
                    break
                nl += 1
                sl += y[p] - mu
            g = two_cell_gain(n, sc, nl, sl)
            if g > best_gain + tol:
                best_gain = g
                best_j = j
                best_s = s
    return best_j, best_s, best_gain, sst


@njit(cache=True, nogil=True)
def grow_et_kernel(Xt, y, order, mtry, num_random_splits, min_node_size, state):
    d, m = Xt.shape
    bufs = alloc_tree(m)
    label = np.zeros(m, dtype=np.int64)
    flag = np.zeros(m, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
    perm = np.empty(d, dtype=np.int64)
    st_start = np.empty(2 * m + 1, dtype=np.int64)
    st_end = np.empty(2 * m + 1, dtype=np.int64)
    st_node = np.empty(2 * m + 1, dtype=np.int64)
    st_start[0], st_end[0], st_node[0] = 0, m, 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        start, end, nid = st_start[top], st_end[top], st_node[top]
        if end - start < min_node_size or end - start < 2:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        j, s, gain, sst = et_node_split(Xt, y, order, start, end, mtry, num_random_splits, label, state, perm)
        if j < 0 or gain <= TIE_RTOL * sst:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        mid = axis_split_segment(Xt, order, start, end, j, s, flag, buf)
        lid, rid = n_nodes, n_nodes + 1
        n_nodes += 2
        set_split(bufs, nid, AXIS, j, -1, s, 0.0, lid, rid)
        st_start[top], st_end[top], st_node[top] = mid, end, rid
        st_start[top + 1], st_end[top + 1], st_node[top + 1] = start, mid, lid
        top += 2
    return trim_tree(bufs, n_nodes)


def et_split(cell, data: Dataset, cfg, rng: RngStream):
    """Split chosen by ET at a single node: ``(j, s, impurity decrease)`` or None."""
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, cell)
    label = np.zeros(ws.m, dtype=np.int64)
    perm = np.empty(data.d, dtype=np.int64)
    j, s, gain, _ = et_node_split(ws.Xt, ws.y, ws.order, 0, ws.m, cfg.mtry, cfg.num_random_splits,
                                  label, rng.state, perm)
    if j < 0:
        return None
    return int(j), float(s), float(gain) / ws.m


def grow_et_tree(data: Dataset, resample, cfg, rng: RngStream) -> Tree:
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, resample)
    bufs = grow_et_kernel(ws.Xt, ws.y, ws.order, cfg.mtry, cfg.num_random_splits,
                          cfg.min_node_size, rng.state)
    return tree_from_buffers(bufs, ws.rows)

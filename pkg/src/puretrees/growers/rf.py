"""Random Forest trees: recursive Sample-CART splits over a random
coordinate subset of size ``mtry`` redrawn at every node."""
import numpy as np
from numba import njit

from ..core import AXIS, Dataset, Tree, make_workspace, tree_from_buffers
from ..criteria import TIE_RTOL, best_split_in
from ..rng import RngStream, draw_subset
from ._common import alloc_tree, axis_split_segment, set_leaf, set_split, trim_tree


@njit(cache=True, nogil=True)
def grow_rf_kernel(Xt, y, order, mtry, min_node_size, min_child, state):
    d, m = Xt.shape
    bufs = alloc_tree(m)
    label = np.zeros(m, dtype=np.int64)
    flag = np.zeros(m, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
    perm = np.empty(d, dtype=np.int64)
    st_start = np.empty(2 * m + 1, dtype=np.int64)
    st_end = np.empty(2 * m + 1, dtype=np.int64)
    st_node = np.empty(2 * m + 1, dtype=np.int64)
    top = 0
    st_start[0], st_end[0], st_node[0] = 0, m, 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        start, end, nid = st_start[top], st_end[top], st_node[top]
        if end - start < min_node_size:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        coords = draw_subset(state, d, mtry, perm)
        j, s, gain, n, sst = best_split_in(Xt, y, order, coords, start, end, label, 0, min_child)
        # zero-gain stop: constant (or unsplittable) nodes become leaves
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


def grow_rf_tree(data: Dataset, resample, cfg, rng: RngStream, min_child: int = 1) -> Tree:
    """Grow one RF tree on the rows ``resample`` (a multiset)."""
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, resample)
    bufs = grow_rf_kernel(ws.Xt, ws.y, ws.order, cfg.mtry, cfg.min_node_size, min_child, rng.state)
    return tree_from_buffers(bufs, ws.rows)

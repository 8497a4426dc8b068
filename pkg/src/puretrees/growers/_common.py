"""Node buffers and segment bookkeeping shared by the growing kernels.

A node under construction owns the segment ``[start, end)`` of every row of
the ``order`` matrix; installing a split stably partitions each row so the
children own contiguous sub-segments that stay sorted per coordinate.
"""
import numpy as np
from numba import njit

from ..core import AXIS, LEAF, goes_left


@njit(cache=True, nogil=True)
def alloc_tree(m):
    cap = 2 * m + 1
    kind = np.zeros(cap, dtype=np.int64)
    j1 = np.full(cap, -1, dtype=np.int64)
    j2 = np.full(cap, -1, dtype=np.int64)
    c1 = np.zeros(cap, dtype=np.float64)
    c2 = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap, dtype=np.float64)
    count = np.zeros(cap, dtype=np.int64)
    return kind, j1, j2, c1, c2, left, right, value, count


@njit(cache=True, nogil=True)
def trim_tree(bufs, n_nodes):
    kind, j1, j2, c1, c2, left, right, value, count = bufs
    return (
        kind[:n_nodes].copy(), j1[:n_nodes].copy(), j2[:n_nodes].copy(),
        c1[:n_nodes].copy(), c2[:n_nodes].copy(), left[:n_nodes].copy(),
        right[:n_nodes].copy(), value[:n_nodes].copy(), count[:n_nodes].copy(),
    )


@njit(cache=True, nogil=True)
def set_leaf(bufs, nid, y, order, start, end):
    kind, j1, j2, c1, c2, left, right, value, count = bufs
    total = 0.0
    for k in range(start, end):
        total += y[order[0, k]]
    kind[nid] = LEAF
    value[nid] = total / (end - start)
    count[nid] = end - start


@njit(cache=True, nogil=True)
def set_split(bufs, nid, rule_kind, a, b, ca, cb, left_id, right_id):
    kind, j1, j2, c1, c2, left, right, value, count = bufs
    kind[nid] = rule_kind
    j1[nid] = a
    j2[nid] = b
    c1[nid] = ca
    c2[nid] = cb
    left[nid] = left_id
    right[nid] = right_id


@njit(cache=True, nogil=True)
def split_segment(Xt, order, start, end, rule_kind, a, b, ca, cb, flag, buf):
    """Stable-partition every row of ``order[:, start:end]`` by a split rule.

    Returns the boundary ``mid``: positions routed left occupy
    ``[start, mid)``.
    """
    for k in range(start, end):
        p = order[0, k]
        x2 = Xt[b, p] if b >= 0 else 0.0
        flag[p] = 1 if goes_left(rule_kind, a, b, ca, cb, Xt[a, p], x2) else 0
    mid = start
    for j in range(order.shape[0]):
        nl = 0
        nr = 0
        for k in range(start, end):
            p = order[j, k]
            if flag[p] == 1:
                order[j, start + nl] = p
                nl += 1
            else:
                buf[nr] = p
                nr += 1
        for k in range(nr):
            order[j, start + nl + k] = buf[k]
        mid = start + nl
    return mid


@njit(cache=True, nogil=True)
def axis_split_segment(Xt, order, start, end, j, s, flag, buf):
    return split_segment(Xt, order, start, end, AXIS, j, -1, s, 0.0, flag, buf)

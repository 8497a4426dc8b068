"""Interaction Forests.

Each node draws ``npairs`` coordinate pairs.  A pair ``(j1, j2)`` with split
values ``(cA1, cA2)`` and ``(cC1, cC2)`` yields seven two-cell partitions:
the four quadrants cut out by ``(cA1, cA2)`` against their complements, the
checkerboard ``LL u GG`` against ``LG u GL``, and the two univariate splits
at ``cC1`` on ``j1`` and ``cC2`` on ``j2``.  The candidate with the largest
impurity decrease is used.

Split values are drawn uniformly from the distinct in-node values of the
coordinate excluding its maximum.  A coordinate that is constant in the node
gets its single value as split value, which makes every candidate that would
separate on it empty on one side, so those candidates drop out.
"""
import numpy as np
from numba import njit

from ..core import (INTF_VARIANTS, LL, Dataset, IntfBivariate, Tree,
                    as_index_set, make_workspace, partition_indices, tree_from_buffers)
from ..criteria import TIE_RTOL, cell_stats, two_cell_gain
from ..rng import RngStream, draw_subset, randbelow
from ._common import alloc_tree, set_leaf, set_split, split_segment, trim_tree


def seven_partitions(cell, j1, j2, cA1, cA2, cC1, cC2, data: Dataset):
    """The non-degenerate candidates of one pair, as ``(rule, (t1, t2))``."""
    if j1 == j2:
        raise ValueError("j1 and j2 must differ")
    if not np.isfinite([cA1, cA2, cC1, cC2]).all():
        raise ValueError("split values must be finite")
    rows = as_index_set(cell, data.n)
    out = []
    for variant in INTF_VARIANTS:
        if variant.startswith("Single"):
            rule = IntfBivariate(variant, j1, j2, cC1, cC2)
        else:
            rule = IntfBivariate(variant, j1, j2, cA1, cA2)
        t1, t2 = partition_indices(rows, rule, data)
        if t1.size and t2.size:
            out.append((rule, (t1, t2)))
    return out


@njit(cache=True, nogil=True)
def _node_values(Xt, order, j, start, end, uniq):
    """Write the distinct values of coordinate ``j`` in the node to ``uniq``; return their number."""
    row = order[j]
    cnt = 0
    for k in range(start, end):
        x = Xt[j, row[k]]
        if cnt == 0 or x > uniq[cnt - 1]:
            uniq[cnt] = x
            cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def _draw_value(state, uniq, cnt):
    if cnt < 2:
        return uniq[0]
    return uniq[randbelow(state, cnt - 1)]


@njit(cache=True, nogil=True)
def intf_node_split(Xt, y, order, start, end, npairs, state, perm, uniq, nuniq, seen, label):
    """Best candidate over ``npairs`` random pairs.

    Returns ``(kind, j1, j2, c1, c2, gain, sst)`` with ``kind == -1`` when no
    candidate separates the node.  ``uniq``/``nuniq``/``seen`` are scratch
    caches of the per-coordinate value lists.
    """
    d = Xt.shape[0]
    n, mu, sst, sc = cell_stats(y, order[0], start, end, label, 0)
    tol = TIE_RTOL * sst
    for j in range(d):
        seen[j] = False
    best_kind = -1
    best = (-1, -1, 0.0, 0.0)
    best_gain = -np.inf
    qn = np.zeros(4, dtype=np.int64)
    qs = np.zeros(4)
    row0 = order[0]
    for _ in range(npairs):
        pair = draw_subset(state, d, 2, perm)
        j1, j2 = pair[0], pair[1]
        for j in (j1, j2):
            if not seen[j]:
                nuniq[j] = _node_values(Xt, order, j, start, end, uniq[j])
                seen[j] = True
        cA1 = _draw_value(state, uniq[j1], nuniq[j1])
        cA2 = _draw_value(state, uniq[j2], nuniq[j2])
        cC1 = _draw_value(state, uniq[j1], nuniq[j1])
        cC2 = _draw_value(state, uniq[j2], nuniq[j2])
        qn[:] = 0
        qs[:] = 0.0
        n1 = 0
        s1 = 0.0
        n2 = 0
        s2 = 0.0
        for k in range(start, end):
            p = row0[k]
            x1 = Xt[j1, p]
            x2 = Xt[j2, p]
            r = y[p] - mu
            q = (0 if x1 <= cA1 else 2) + (0 if x2 <= cA2 else 1)
            qn[q] += 1
            qs[q] += r
            if x1 <= cC1:
                n1 += 1
                s1 += r
            if x2 <= cC2:
                n2 += 1
                s2 += r
        # candidates in INTF_VARIANTS order: LL, LG, GL, GG, Checker, Single1, Single2
        for v in range(7):
            if v < 4:
                cn, cs = qn[v], qs[v]
            elif v == 4:
                cn, cs = qn[0] + qn[3], qs[0] + qs[3]
            elif v == 5:
                cn, cs = n1, s1
            else:
                cn, cs = n2, s2
            if cn == 0 or cn == n:
                continue
            g = two_cell_gain(n, sc, cn, cs)
            if g > best_gain + tol:
                best_gain = g
                best_kind = LL + v
                if v < 5:
                    best = (j1, j2, cA1, cA2)
                else:
                    best = (j1, j2, cC1, cC2)
    return best_kind, best[0], best[1], best[2], best[3], best_gain, sst


def _scratch(d, m):
    return (np.empty(d, dtype=np.int64), np.empty((d, m)), np.zeros(d, dtype=np.int64),
            np.zeros(d, dtype=np.bool_), np.zeros(m, dtype=np.int64))


@njit(cache=True, nogil=True)
def grow_intf_kernel(Xt, y, order, npairs, min_node_size, state, perm, uniq, nuniq, seen, label):
    d, m = Xt.shape
    bufs = alloc_tree(m)
    flag = np.zeros(m, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
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
        kind, j1, j2, c1, c2, gain, sst = intf_node_split(Xt, y, order, start, end, npairs, state, perm,
                                                          uniq, nuniq, seen, label)
        if kind < 0 or gain <= TIE_RTOL * sst:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        mid = split_segment(Xt, order, start, end, kind, j1, j2, c1, c2, flag, buf)
        lid, rid = n_nodes, n_nodes + 1
        n_nodes += 2
        set_split(bufs, nid, kind, j1, j2, c1, c2, lid, rid)
        st_start[top], st_end[top], st_node[top] = mid, end, rid
        st_start[top + 1], st_end[top + 1], st_node[top + 1] = start, mid, lid
        top += 2
    return trim_tree(bufs, n_nodes)


def intf_split(cell, data: Dataset, cfg, rng: RngStream):
    """Split chosen by INTF at one node: ``(IntfBivariate, impurity decrease)`` or None."""
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, cell)
    kind, j1, j2, c1, c2, gain, _ = intf_node_split(ws.Xt, ws.y, ws.order, 0, ws.m, cfg.npairs, rng.state,
                                                    *_scratch(data.d, ws.m))
    if kind < 0:
        return None
    rule = IntfBivariate(INTF_VARIANTS[kind - LL], int(j1), int(j2), float(c1), float(c2))
    return rule, float(gain) / ws.m


def grow_intf_tree(data: Dataset, resample, cfg, rng: RngStream) -> Tree:
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, resample)
    bufs = grow_intf_kernel(ws.Xt, ws.y, ws.order, cfg.npairs, cfg.min_node_size, rng.state,
                            *_scratch(data.d, ws.m))
    return tree_from_buffers(bufs, ws.rows)


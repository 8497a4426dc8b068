"""Random Split Random Forests.

At every node ``width`` candidate partitions are generated.  A Random-CART
candidate is a complete binary tree of depth ``D`` laid out heap-style in
slots ``1 .. 2**D - 1``: the first ``D - 1`` levels are random splits (a
coordinate drawn uniformly, a split value drawn uniformly from the distinct
in-cell values excluding the maximum), the last level splits each cell by
Sample-CART over a random coordinate subset.  An optional CART-CART
candidate (index 0) uses Sample-CART on every level.  The candidate with the
largest impurity decrease over its ``<= 2**D`` end cells is installed as a
subtree of axis splits and growth continues from the end cells.

A slot whose cell cannot be split stays unsplit and hands its cell on to its
left child slot, so the end cells always partition the node.

In ``fixed`` mtry mode the coordinate set ``J`` of the random levels and the
subsets ``J_a`` of the CART slots are drawn once per node and shared by all
candidates; in ``not_fixed`` mode the random coordinate is uniform over all
coordinates and every CART split draws a fresh subset.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..core import AXIS, Dataset, Tree, as_index_set, make_workspace, tree_from_buffers
from ..criteria import TIE_RTOL, best_split_in, cell_stats
from ..rng import RngStream, draw_subset, randbelow
from ._common import alloc_tree, axis_split_segment, set_leaf, set_split, trim_tree


@dataclass(frozen=True)
class CandidateStep:
    """A scored candidate partition of a node.

    ``splits`` lists ``(slot, j, s)`` for every split slot; ``subsets`` holds
    the coordinate subsets offered to the last-level CART slots (empty arrays
    for slots whose cell was empty).
    """

    kind: str
    cells: tuple
    score: float
    splits: tuple
    subsets: tuple


@dataclass(frozen=True)
class NodeChoice:
    candidates: tuple
    winner: int | None


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True, nogil=True)
def _count_values(Xt, row, start, end, label, lab, j):
    """Number of distinct values of ``x_j`` in sub-cell ``lab``, minus one for the maximum."""
    cnt = 0
    prev = 0.0
    for k in range(start, end):
        p = row[k]
        if label[p] != lab:
            continue
        x = Xt[j, p]
        if cnt == 0 or x > prev:
            cnt += 1
            prev = x
    return cnt - 1 if cnt > 0 else 0


@njit(cache=True, nogil=True)
def _kth_value(Xt, row, start, end, label, lab, j, kk):
    idx = -1
    prev = 0.0
    for k in range(start, end):
        p = row[k]
        if label[p] != lab:
            continue
        x = Xt[j, p]
        if idx < 0 or x > prev:
            idx += 1
            prev = x
            if idx == kk:
                return x
    return prev


@njit(cache=True, nogil=True)
def random_split_kernel(Xt, order, start, end, label, lab, coords, state):
    """Random split of a sub-cell: ``(j, c)`` or ``(-1, 0.0)`` if ``x_j`` is constant there."""
    j = coords[randbelow(state, coords.shape[0])]
    row = order[j]
    cnt = _count_values(Xt, row, start, end, label, lab, j)
    if cnt == 0:
        return -1, 0.0
    kk = randbelow(state, cnt)
    return j, _kth_value(Xt, row, start, end, label, lab, j, kk)


@njit(cache=True, nogil=True)
def _relabel(Xt, row, start, end, label, lab, j, c):
    for k in range(start, end):
        p = row[k]
        if label[p] == lab:
            if j < 0 or Xt[j, p] <= c:
                label[p] = 2 * lab
            else:
                label[p] = 2 * lab + 1


@njit(cache=True, nogil=True)
def eval_candidate(Xt, y, order, start, end, label, cart_cart, depth, fixed, J, slot_sub, mrc, mcc,
                   all_coords, state, perm, slot_j, slot_c, used_sub, used_k, mu, sc):
    """Generate one candidate on the node ``[start, end)`` and return its gain.

    The gain is ``#t * S`` over the end cells, or ``-1.0`` if the top split
    fails.  On return ``label`` holds the end-cell slot (``2**D ..``) of every
    node position, and ``slot_j`` / ``slot_c`` describe the splits
    (``slot_j[s] == -1`` for unsplit slots).
    """
    d = Xt.shape[0]
    row0 = order[0]
    for k in range(start, end):
        label[row0[k]] = 1
    slot_j[:] = -1
    used_k[:] = 0
    for level in range(depth):
        lo = 1 << level
        last = level == depth - 1
        for s in range(lo, 2 * lo):
            if cart_cart or last:
                n_s, mu_s, sst_s, sc_s = cell_stats(y, row0, start, end, label, s)
                if n_s == 0:
                    continue
                if last:
                    if fixed:
                        coords = slot_sub[s - lo]
                    else:
                        coords = draw_subset(state, d, mcc if cart_cart else mrc, perm)
                    used_k[s - lo] = coords.shape[0]
                    used_sub[s - lo, :coords.shape[0]] = coords
                else:
                    coords = J if fixed else draw_subset(state, d, mcc, perm)
                j, c, g, _, sst_c = best_split_in(Xt, y, order, coords, start, end, label, s, 1)
                if j < 0 or g <= TIE_RTOL * sst_c:
                    j = -1
            else:
                if _count_cell(row0, start, end, label, s) == 0:
                    continue
                j, c = random_split_kernel(Xt, order, start, end, label, s, J if fixed else all_coords, state)
            if j < 0 and level == 0:
                return -1.0
            slot_j[s] = j
            slot_c[s] = c
            _relabel(Xt, row0, start, end, label, s, j, c)
    base = 1 << depth
    cn = np.zeros(base, dtype=np.int64)
    cs = np.zeros(base)
    for k in range(start, end):
        p = row0[k]
        cn[label[p] - base] += 1
        cs[label[p] - base] += y[p] - mu
    gain = -sc * sc / (end - start)
    for i in range(base):
        if cn[i] > 0:
            gain += cs[i] * cs[i] / cn[i]
    return max(gain, 0.0)


@njit(cache=True, nogil=True)
def _count_cell(row, start, end, label, lab):
    n = 0
    for k in range(start, end):
        if label[row[k]] == lab:
            n += 1
    return n


@njit(cache=True, nogil=True)
def draw_fixed_subsets(state, d, mr, mrc, depth, perm, slot_sub):
    J = draw_subset(state, d, mr, perm)
    for a in range(slot_sub.shape[0]):
        slot_sub[a] = draw_subset(state, d, mrc, perm)
    return J


@njit(cache=True, nogil=True)
def grow_rsrf_kernel(Xt, y, order, width, include_cc, fixed, mr, mrc, mcc, depth, min_node_size, state):
    d, m = Xt.shape
    bufs = alloc_tree(m)
    label = np.zeros(m, dtype=np.int64)
    flag = np.zeros(m, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
    perm = np.empty(d, dtype=np.int64)
    all_coords = np.arange(d)
    n_slots = 1 << depth
    n_last = n_slots >> 1
    slot_sub = np.zeros((n_last, mrc), dtype=np.int64)
    used_sub = np.zeros((n_last, d), dtype=np.int64)
    used_k = np.zeros(n_last, dtype=np.int64)
    slot_j = np.full(n_slots, -1, dtype=np.int64)
    slot_c = np.zeros(n_slots)
    best_j = np.full(n_slots, -1, dtype=np.int64)
    best_c = np.zeros(n_slots)
    J = all_coords
    st_start = np.empty(2 * m + 1, dtype=np.int64)
    st_end = np.empty(2 * m + 1, dtype=np.int64)
    st_node = np.empty(2 * m + 1, dtype=np.int64)
    in_slot = np.empty(n_slots, dtype=np.int64)
    in_start = np.empty(n_slots, dtype=np.int64)
    in_end = np.empty(n_slots, dtype=np.int64)
    in_node = np.empty(n_slots, dtype=np.int64)
    st_start[0], st_end[0], st_node[0] = 0, m, 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        start, end, nid = st_start[top], st_end[top], st_node[top]
        if end - start < min_node_size or end - start < 2:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        for k in range(start, end):
            label[order[0, k]] = 0
        n, mu, sst, sc = cell_stats(y, order[0], start, end, label, 0)
        tol = TIE_RTOL * sst
        if fixed:
            J = draw_fixed_subsets(state, d, mr, mrc, depth, perm, slot_sub)
        best = -np.inf
        found = False
        n_cand = width + (1 if include_cc else 0)
        for w in range(n_cand):
            cc = include_cc and w == 0
            g = eval_candidate(Xt, y, order, start, end, label, cc, depth, fixed, J, slot_sub, mrc, mcc,
                               all_coords, state, perm, slot_j, slot_c, used_sub, used_k, mu, sc)
            if g >= 0.0 and g > best + tol:
                best = g
                found = True
                best_j[:] = slot_j
                best_c[:] = slot_c
        if not found or best <= tol:
            set_leaf(bufs, nid, y, order, start, end)
            continue
        # install the winning slot tree; end cells go back on the growth stack
        in_slot[0], in_start[0], in_end[0], in_node[0] = 1, start, end, nid
        itop = 1
        while itop > 0:
            itop -= 1
            s, a, b, node = in_slot[itop], in_start[itop], in_end[itop], in_node[itop]
            if s >= n_slots:
                st_start[top], st_end[top], st_node[top] = a, b, node
                top += 1
                continue
            if best_j[s] < 0:
                in_slot[itop], in_start[itop], in_end[itop], in_node[itop] = 2 * s, a, b, node
                itop += 1
                continue
            mid = axis_split_segment(Xt, order, a, b, best_j[s], best_c[s], flag, buf)
            lid, rid = n_nodes, n_nodes + 1
            n_nodes += 2
            set_split(bufs, node, AXIS, best_j[s], -1, best_c[s], 0.0, lid, rid)
            in_slot[itop], in_start[itop], in_end[itop], in_node[itop] = 2 * s + 1, mid, b, rid
            in_slot[itop + 1], in_start[itop + 1], in_end[itop + 1], in_node[itop + 1] = 2 * s, a, mid, lid
            itop += 2
    return trim_tree(bufs, n_nodes)


# ---------------------------------------------------------------------------
# Python API


class _NodeContext:
    """Kernel arguments for examining a single cell outside of tree growth."""

    def __init__(self, cell, data: Dataset, cfg):
        self.cfg = cfg.validate(data.d)
        self.ws = make_workspace(data, cell)
        d, m = data.d, self.ws.m
        depth = self.cfg.depth
        self.depth = depth
        self.fixed = self.cfg.mtry_mode == "fixed"
        self.mrc = self.cfg.mtry_random_cart
        self.mcc = self.cfg.mtry_cart_cart if self.cfg.mtry_cart_cart is not None else d
        self.label = np.zeros(m, dtype=np.int64)
        self.perm = np.empty(d, dtype=np.int64)
        self.all_coords = np.arange(d)
        self.slot_sub = np.zeros((1 << (depth - 1), self.mrc), dtype=np.int64)
        self.J = self.all_coords
        n, self.mu, _, self.sc = cell_stats(self.ws.y, self.ws.order[0], 0, m, self.label, 0)

    def draw_fixed(self, rng: RngStream):
        if self.fixed:
            self.J = draw_fixed_subsets(rng.state, self.ws.Xt.shape[0], self.cfg.mtry_random, self.mrc,
                                        self.depth, self.perm, self.slot_sub)

    def candidate(self, cart_cart: bool, rng: RngStream) -> CandidateStep | None:
        ws = self.ws
        d = ws.Xt.shape[0]
        n_slots = 1 << self.depth
        slot_j = np.full(n_slots, -1, dtype=np.int64)
        slot_c = np.zeros(n_slots)
        used_sub = np.zeros((n_slots >> 1, d), dtype=np.int64)
        used_k = np.zeros(n_slots >> 1, dtype=np.int64)
        g = eval_candidate(ws.Xt, ws.y, ws.order, 0, ws.m, self.label, cart_cart, self.depth, self.fixed,
                           self.J, self.slot_sub, self.mrc, self.mcc, self.all_coords, rng.state, self.perm,
                           slot_j, slot_c, used_sub, used_k, self.mu, self.sc)
        if g < 0:
            return None
        cells = tuple(ws.rows[self.label == lab] for lab in range(n_slots, 2 * n_slots)
                      if np.any(self.label == lab))
        splits = tuple((s, int(slot_j[s]), float(slot_c[s])) for s in range(1, n_slots) if slot_j[s] >= 0)
        subsets = tuple(used_sub[a, :used_k[a]].copy() for a in range(n_slots >> 1))
        return CandidateStep("cart_cart" if cart_cart else "random_cart", cells, g / ws.m, splits, subsets)


def draw_random_split(cell, data: Dataset, rng: RngStream, allowed=None):
    """Random split of ``cell``: ``(j, c)`` with ``j`` uniform over ``allowed``
    and ``c`` uniform over the distinct in-cell values of ``x_j`` except the
    largest, or None when ``x_j`` is constant on the cell."""
    ws = make_workspace(data, cell)
    coords = np.arange(data.d) if allowed is None else np.unique(as_index_set(allowed, data.d))
    if coords.size == 0:
        raise ValueError("allowed coordinate set is empty")
    label = np.zeros(ws.m, dtype=np.int64)
    j, c = random_split_kernel(ws.Xt, ws.order, 0, ws.m, label, 0, coords, rng.state)
    if j < 0:
        return None
    return int(j), float(c)


def random_cart_step(cell, data: Dataset, rng: RngStream, cfg) -> CandidateStep | None:
    """One Random-CART candidate; in fixed mode the node subsets are drawn first."""
    ctx = _NodeContext(cell, data, cfg)
    ctx.draw_fixed(rng)
    return ctx.candidate(False, rng)


def cart_cart_step(cell, data: Dataset, rng: RngStream, cfg) -> CandidateStep | None:
    ctx = _NodeContext(cell, data, cfg)
    ctx.draw_fixed(rng)
    return ctx.candidate(True, rng)


def node_candidates(cell, data: Dataset, rng: RngStream, cfg) -> NodeChoice:
    """All candidates generated at a node, in the order and with the draws of tree growth."""
    ctx = _NodeContext(cell, data, cfg)
    ctx.draw_fixed(rng)
    cands = []
    if ctx.cfg.include_cartcart:
        cands.append(ctx.candidate(True, rng))
    for _ in range(ctx.cfg.width):
        cands.append(ctx.candidate(False, rng))
    y = ctx.ws.y
    tol = TIE_RTOL * float(((y - y.mean()) ** 2).sum()) / ctx.ws.m
    winner, best = None, -np.inf
    for i, c in enumerate(cands):
        if c is not None and c.score > best + tol:
            winner, best = i, c.score
    if winner is not None and best <= tol:
        winner = None
    return NodeChoice(tuple(cands), winner)


def grow_rsrf_tree(data: Dataset, resample, cfg, rng: RngStream) -> Tree:
    cfg = cfg.validate(data.d)
    ws = make_workspace(data, resample)
    mcc = cfg.mtry_cart_cart if cfg.mtry_cart_cart is not None else data.d
    mr = cfg.mtry_random if cfg.mtry_random is not None else data.d
    bufs = grow_rsrf_kernel(ws.Xt, ws.y, ws.order, cfg.width, cfg.include_cartcart, cfg.mtry_mode == "fixed",
                            mr, cfg.mtry_random_cart, mcc, cfg.depth, cfg.min_node_size, rng.state)
    return tree_from_buffers(bufs, ws.rows)

"""Impurity scores and the Sample-CART split search.

All growers score a candidate partition ``P = {t_1, ..., t_L}`` of a cell
``t`` by the impurity decrease

    S(t; P) = sum_l (#t_l / #t) * (mean(t_l) - mean(t))**2 .

Kernels work with the unnormalised gain ``#t * S`` computed on responses
centred at the cell mean, so rounding scales with the cell's sum of squares.
Two candidates whose gains differ by at most ``TIE_RTOL * SST(t)`` are treated
as tied and the earlier one (smaller coordinate, then smaller split value)
is kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .core import Dataset, as_index_set, make_workspace

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SplitCandidate:
    j: int
    s: float
    v_score: float


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True, nogil=True)
def cell_stats(y, order_row, start, end, label, lab):
    """Count, mean, centred sum of squares and centred sum of a sub-cell.

    The centred sum is zero up to rounding; kernels carry it so that the
    complement of a left part is formed from the same floating values.
    """
    n = 0
    total = 0.0
    for k in range(start, end):
        p = order_row[k]
        if label[p] == lab:
            n += 1
            total += y[p]
    if n == 0:
        return 0, 0.0, 0.0, 0.0
    mu = total / n
    sst = 0.0
    sc = 0.0
    for k in range(start, end):
        p = order_row[k]
        if label[p] == lab:
            r = y[p] - mu
            sst += r * r
            sc += r
    return n, mu, sst, sc


@njit(cache=True, nogil=True, inline="always")
def two_cell_gain(n, sc, n1, s1):
    """``#t * S`` for the split of a cell with centred sum ``sc`` into a part
    with ``n1`` points / centred sum ``s1`` and its complement."""
    n2 = n - n1
    s2 = sc - s1
    return s1 * s1 / n1 + s2 * s2 / n2 - sc * sc / n


@njit(cache=True, nogil=True)
def cart_sweep(Xt, y, order, j, start, end, label, lab, n_cell, mu, sc, min_child, best_gain, tol):
    """Scan coordinate ``j`` of a sub-cell for the best ``x_j <= s`` split.

    Candidate values are the distinct observed values except the maximum,
    visited in ascending order.  Returns ``(improved, s, gain)`` where
    ``improved`` says whether some candidate beat ``best_gain + tol``.
    """
    row = order[j]
    xj = Xt[j]
    improved = False
    best_s = 0.0
    nl = 0
    sl = 0.0
    prev = 0.0
    for k in range(start, end):
        p = row[k]
        if label[p] != lab:
            continue
        x = xj[p]
        if nl > 0 and x > prev and nl >= min_child and n_cell - nl >= min_child:
            g = two_cell_gain(n_cell, sc, nl, sl)
            if g > best_gain + tol:
                best_gain = g
                best_s = prev
                improved = True
        nl += 1
        sl += y[p] - mu
        prev = x
    return improved, best_s, best_gain


@njit(cache=True, nogil=True)
def best_split_in(Xt, y, order, coords, start, end, label, lab, min_child):
    """Best CART split of a sub-cell over the sorted coordinate list ``coords``.

    Returns ``(j, s, gain, n_cell, sst)``; ``j == -1`` when no valid split
    exists.
    """
    n, mu, sst, sc = cell_stats(y, order[0], start, end, label, lab)
    tol = TIE_RTOL * sst
    best_j = -1
    best_s = 0.0
    best_gain = -np.inf
    for j in coords:
        ok, s, g = cart_sweep(Xt, y, order, j, start, end, label, lab, n, mu, sc, min_child, best_gain, tol)
        if ok:
            best_j = j
            best_s = s
            best_gain = g
    return best_j, best_s, best_gain, n, sst


# ---------------------------------------------------------------------------
# public scores


def cell_mean(cell, data: Dataset) -> float:
    rows = as_index_set(cell, data.n)
    if rows.size == 0:
        raise ValueError("empty cell")
    return float(data.response[rows].mean())


def _check_partition(parent: np.ndarray, cells) -> list:
    cells = [as_index_set(c) for c in cells]
    if not cells:
        raise ValueError("partition needs at least one cell")
    for c in cells:
        if c.size == 0:
            raise ValueError("empty cell in partition")
    joined = np.sort(np.concatenate(cells))
    if not np.array_equal(joined, np.sort(parent)):
        raise ValueError("cells do not partition the parent")
    return cells


def impurity_decrease(parent, partition, data: Dataset) -> float:
    """``S(t; P)``: weighted squared deviation of cell means from the parent mean."""
    rows = as_index_set(parent, data.n)
    cells = _check_partition(rows, partition)
    y = data.response
    mu = y[rows].mean()
    return float(sum(c.size * (y[c].mean() - mu) ** 2 for c in cells) / rows.size)


def variance_criterion(parent, j: int, s: float, data: Dataset) -> float:
    """Within-daughter sum of squared deviations for the split ``x_j <= s``."""
    rows = as_index_set(parent, data.n)
    mask = data.features[rows, j] <= s
    left, right = data.response[rows[mask]], data.response[rows[~mask]]
    if left.size == 0 or right.size == 0:
        raise ValueError("degenerate split")
    return float(((left - left.mean()) ** 2).sum() + ((right - right.mean()) ** 2).sum())


def best_cart_split(parent, allowed, data: Dataset, min_child: int = 1) -> SplitCandidate | None:
    """Sample-CART split of ``parent`` restricted to coordinates ``allowed``."""
    ws = make_workspace(data, parent)
    coords = np.unique(np.asarray(list(allowed), dtype=np.int64))
    if coords.size == 0:
        raise ValueError("allowed coordinate set is empty")
    if coords[0] < 0 or coords[-1] >= data.d:
        raise IndexError("coordinate out of range")
    label = np.zeros(ws.m, dtype=np.int64)
    j, s, gain, _, sst = best_split_in(ws.Xt, ws.y, ws.order, coords, 0, ws.m, label, 0, int(min_child))
    if j < 0:
        return None
    return SplitCandidate(int(j), float(s), max(float(sst - gain), 0.0))


# ---------------------------------------------------------------------------
# exact two-cell criteria (test oracle)


def _exact_scores(y_cells):
    """Exact ``(S, M, V)`` for a list of response groups, as Fractions."""
    groups = [[Fraction(float(v)) for v in g] for g in y_cells]
    T = sum(len(g) for g in groups)
    total = sum(sum(g) for g in groups)
    mu = total / T
    S = sum(len(g) * (sum(g) / len(g) - mu) ** 2 for g in groups) / T
    M = sum(sum(g) ** 2 / len(g) for g in groups)
    V = sum(sum((v - sum(g) / len(g)) ** 2 for v in g) for g in groups)
    return S, M, V


def _first_best(values, maximize: bool) -> int:
    best = 0
    for i, v in enumerate(values):
        if (v > values[best]) if maximize else (v < values[best]):
            best = i
    return best


def max_partition_score_oracle(parent, candidates, data: Dataset):
    """Best of a candidate set of two-cell partitions under S, M and V.

    Scores are computed in exact rational arithmetic; ties go to the earliest
    candidate.  Returns ``(argmax S, argmax M, argmin V)`` as candidate indices.
    """
    if not candidates:
        raise ValueError("candidate set is empty")
    rows = as_index_set(parent, data.n)
    scores = []
    for cand in candidates:
        cells = _check_partition(rows, cand)
        scores.append(_exact_scores([data.response[np.sort(c)] for c in cells]))
    S, M, V = zip(*scores)
    return _first_best(S, True), _first_best(M, True), _first_best(V, False)

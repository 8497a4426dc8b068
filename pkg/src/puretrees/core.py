"""Data representation, split rules, tree and forest structures.

Trees are stored as flat node arrays (one entry per node) so that growing and
prediction can run inside compiled kernels.  Node kinds:

====  ==========  =====================================================
code  name        goes left (to ``t1``) iff
====  ==========  =====================================================
0     leaf        --
1     axis        ``x[j1] <= c1``
2     LL          ``x[j1] <= c1 and x[j2] <= c2``
3     LG          ``x[j1] <= c1 and x[j2] >  c2``
4     GL          ``x[j1] >  c1 and x[j2] <= c2``
5     GG          ``x[j1] >  c1 and x[j2] >  c2``
6     Checker     ``LL or GG``
7     Single1     ``x[j1] <= c1``
8     Single2     ``x[j2] <= c2``
====  ==========  =====================================================

The bivariate kinds realise the seven Interaction Forest geometries with
``<= c`` / ``> c`` as the two half-lines, so ``t2`` is exactly the complement
of ``t1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numba import njit

LEAF, AXIS, LL, LG, GL, GG, CHECKER, SINGLE1, SINGLE2 = range(9)

INTF_VARIANTS = ("LL", "LG", "GL", "GG", "Checker", "Single1", "Single2")
_VARIANT_CODE = {name: LL + i for i, name in enumerate(INTF_VARIANTS)}


class ConfigError(ValueError):
    """Invalid grower / experiment configuration; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# Dataset


@dataclass(frozen=True, eq=False)
class Dataset:
    """Read-only training data with per-column sort permutations.

    ``features`` is stored column-major (``order='F'``); ``column_sort_index[j]``
    is a stable argsort of column ``j``.
    """

    features: np.ndarray
    response: np.ndarray
    column_sort_index: np.ndarray = field(repr=False)

    @classmethod
    def from_arrays(cls, features, response) -> "Dataset":
        X = np.asfortranarray(np.asarray(features, dtype=np.float64))
        if X.ndim == 1:
            X = X.reshape(-1, 1, order="F")
        y = np.ascontiguousarray(np.asarray(response, dtype=np.float64).ravel())
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("features must be a non-empty n x d matrix")
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"response has {y.shape[0]} rows, features have {X.shape[0]}")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("features and response must be finite")
        csi = np.argsort(X, axis=0, kind="stable").T.copy()
        X.setflags(write=False)
        y.setflags(write=False)
        csi.setflags(write=False)
        return cls(X, y, csi)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset.from_arrays(self.features[rows], self.response[rows])


def as_index_set(cell, n: int | None = None) -> np.ndarray:
    """Normalise an index collection to an int64 array, validating bounds."""
    if isinstance(cell, (set, frozenset)):
        cell = sorted(cell)
    rows = np.asarray(cell, dtype=np.int64).ravel()
    if n is not None and rows.size and (rows.min() < 0 or rows.max() >= n):
        raise IndexError("row index out of range")
    return rows


# ---------------------------------------------------------------------------
# Split rules


@dataclass(frozen=True)
class Axis:
    """Axis-aligned split: left iff ``x[j] <= s``."""

    j: int
    s: float

    def left_mask(self, X: np.ndarray) -> np.ndarray:
        return X[:, self.j] <= self.s

    def encode(self):
        return AXIS, self.j, -1, float(self.s), 0.0


@dataclass(frozen=True)
class IntfBivariate:
    """One of the seven Interaction Forest partitions of a cell."""

    variant: str
    j1: int
    j2: int
    c1: float
    c2: float

    def __post_init__(self):
        if self.variant not in _VARIANT_CODE:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.j1 == self.j2:
            raise ValueError("bivariate split needs two distinct coordinates")

    def left_mask(self, X: np.ndarray) -> np.ndarray:
        a = X[:, self.j1] <= self.c1
        b = X[:, self.j2] <= self.c2
        v = self.variant
        if v == "LL":
            return a & b
        if v == "LG":
            return a & ~b
        if v == "GL":
            return ~a & b
        if v == "GG":
            return ~a & ~b
        if v == "Checker":
            return (a & b) | (~a & ~b)
        if v == "Single1":
            return a
        return b

    def encode(self):
        return _VARIANT_CODE[self.variant], self.j1, self.j2, float(self.c1), float(self.c2)


SplitRule = Union[Axis, IntfBivariate]


def decode_rule(kind: int, j1: int, j2: int, c1: float, c2: float) -> SplitRule:
    if kind == AXIS:
        return Axis(int(j1), float(c1))
    return IntfBivariate(INTF_VARIANTS[kind - LL], int(j1), int(j2), float(c1), float(c2))


@njit(cache=True, nogil=True, inline="always")
def goes_left(kind, j1, j2, c1, c2, x1, x2):
    """Routing predicate on the (already gathered) coordinates ``x[j1], x[j2]``."""
    if kind == AXIS or kind == SINGLE1:
        return x1 <= c1
    if kind == SINGLE2:
        return x2 <= c2
    a = x1 <= c1
    b = x2 <= c2
    if kind == LL:
        return a and b
    if kind == LG:
        return a and not b
    if kind == GL:
        return (not a) and b
    if kind == GG:
        return (not a) and (not b)
    return a == b


def partition_indices(cell, rule: SplitRule, data: Dataset):
    """Split ``cell`` into the rows routed left and right by ``rule``."""
    rows = as_index_set(cell, data.n)
    mask = rule.left_mask(data.features[rows])
    return rows[mask], rows[~mask]


# ---------------------------------------------------------------------------
# Trees


@dataclass(frozen=True)
class Leaf:
    mean: float
    count: int


@dataclass(frozen=True)
class Internal:
    rule: SplitRule
    left: int
    right: int


TreeNode = Union[Leaf, Internal]


@dataclass(eq=False)
class Tree:
    """Flat-array regression tree; node 0 is the root."""

    kind: np.ndarray
    j1: np.ndarray
    j2: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    count: np.ndarray
    resample: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.kind.shape[0]

    def node(self, i: int) -> TreeNode:
        if self.kind[i] == LEAF:
            return Leaf(float(self.value[i]), int(self.count[i]))
        rule = decode_rule(self.kind[i], self.j1[i], self.j2[i], self.c1[i], self.c2[i])
        return Internal(rule, int(self.left[i]), int(self.right[i]))

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.kind == LEAF)

    def apply(self, X) -> np.ndarray:
        """Leaf id reached by each row of ``X``."""
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        return _apply(self.kind, self.j1, self.j2, self.c1, self.c2, self.left, self.right, X)

    def predict(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.kind[i] != LEAF:
                depth[self.left[i]] = depth[i] + 1
                depth[self.right[i]] = depth[i] + 1
        return int(depth.max())


@njit(cache=True, nogil=True)
def _apply(kind, j1, j2, c1, c2, left, right, X):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        k = 0
        while kind[k] != LEAF:
            x2 = X[i, j2[k]] if j2[k] >= 0 else 0.0
            if goes_left(kind[k], j1[k], j2[k], c1[k], c2[k], X[i, j1[k]], x2):
                k = left[k]
            else:
                k = right[k]
        out[i] = k
    return out


def tree_from_buffers(buffers, resample) -> Tree:
    kind, j1, j2, c1, c2, left, right, value, count = buffers
    return Tree(kind, j1, j2, c1, c2, left, right, value, count, np.asarray(resample, dtype=np.int64))


def predict_tree(tree: Tree, x) -> float:
    """Prediction of a single tree at one point ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("x must be finite")
    return float(tree.predict(x.reshape(1, -1))[0])


# ---------------------------------------------------------------------------
# Forests


@dataclass(eq=False)
class Forest:
    trees: list
    config: object
    seed: int
    n_features: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.trees:
            raise ValueError("a forest needs at least one tree")

    @property
    def algorithm(self) -> str:
        return self.config.algorithm

    def predict_trees(self, X) -> np.ndarray:
        """``(B, m)`` matrix of per-tree predictions."""
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return np.stack([t.predict(X) for t in self.trees])

    def predict(self, X) -> np.ndarray:
        return self.predict_trees(X).mean(axis=0)


def predict_forest(forest: Forest, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("x must be finite")
    return float(forest.predict(x.reshape(1, -1))[0])


# ---------------------------------------------------------------------------
# Fit workspace


@dataclass(eq=False)
class Workspace:
    """Per-fit arrays handed to the growing kernels.

    Positions ``0..m-1`` index the (sorted) ``rows``; ``Xt`` is ``d x m`` and
    ``order[j]`` lists positions sorted by coordinate ``j``.
    """

    rows: np.ndarray
    Xt: np.ndarray
    y: np.ndarray
    order: np.ndarray

    @property
    def m(self) -> int:
        return self.rows.shape[0]


@njit(cache=True)
def _expand_sorted(csi, counts, first):
    d, n = csi.shape
    m = counts.sum()
    order = np.empty((d, m), dtype=np.int64)
    for j in range(d):
        k = 0
        for r in csi[j]:
            base = first[r]
            for c in range(counts[r]):
                order[j, k] = base + c
                k += 1
    return order


def make_workspace(data: Dataset, rows) -> Workspace:
    """Build a fit workspace from a row multiset, reusing the column sort index."""
    rows = np.sort(as_index_set(rows, data.n), kind="stable")
    if rows.size == 0:
        raise ValueError("empty cell")
    counts = np.bincount(rows, minlength=data.n).astype(np.int64)
    first = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
    order = _expand_sorted(np.ascontiguousarray(data.column_sort_index), counts, first)
    Xt = np.ascontiguousarray(data.features[rows].T)
    y = np.ascontiguousarray(data.response[rows])
    return Workspace(rows, Xt, y, order)

"""Brute-force reference implementations used as test oracles.

Nothing here touches the package's kernels: splits are enumerated directly
and scored with plain numpy (or exact rationals when ties matter).
"""
from fractions import Fraction

import numpy as np

TIE = 1e-12


def split_values(x):
    """Distinct values of ``x`` except the largest, ascending."""
    return np.unique(x)[:-1]


def within_ss(y):
    return float(((y - y.mean()) ** 2).sum()) if y.size else 0.0


def brute_cart(X, y, rows, coords, min_child=1):
    """Best ``x_j <= s`` split of ``rows`` by exhaustive float scoring.

    Returns ``(j, s, V)`` minimising the within-daughter sum of squares, ties
    (up to ``TIE * SST``) resolved to the smallest ``j`` then ``s``; None if
    no split exists.
    """
    rows = np.asarray(rows)
    sst = within_ss(y[rows])
    best = None
    for j in sorted(coords):
        x = X[rows, j]
        for s in split_values(x):
            left = x <= s
            if left.sum() < min_child or (~left).sum() < min_child:
                continue
            v = within_ss(y[rows][left]) + within_ss(y[rows][~left])
            if best is None or v < best[2] - TIE * sst:
                best = (j, float(s), v)
    return best


def _exact_scores(X, y, rows, coords):
    """``[((j, s), M)]`` for every candidate, ``M = sum_l (sum of y in cell l)^2 / #l`` exactly."""
    rows = np.asarray(rows)
    yy = [Fraction(float(v)) for v in y[rows]]
    out = []
    for j in sorted(coords):
        x = X[rows, j]
        for s in split_values(x):
            left = x <= s
            s1 = sum(v for v, l in zip(yy, left) if l)
            s2 = sum(v for v, l in zip(yy, left) if not l)
            out.append(((j, float(s)), s1 * s1 / int(left.sum()) + s2 * s2 / int((~left).sum())))
    return out


def exact_cart(X, y, rows, coords):
    """Like :func:`brute_cart` but scored exactly; ties go to the smallest ``(j, s)``."""
    best, best_key = None, None
    for split, m in _exact_scores(X, y, rows, coords):
        if best_key is None or m > best_key:
            best, best_key = split, m
    return best


def exact_maximisers(X, y, rows, coords):
    """Number of ``(j, s)`` attaining the exact optimum; above one means a tie."""
    scores = [m for _, m in _exact_scores(X, y, rows, coords)]
    return sum(1 for m in scores if m == max(scores)) if scores else 0


def cart_tree_predict(X, y, min_node_size, Xq):
    """Fully recursive Sample-CART over all coordinates, predictions at ``Xq``."""

    def grow(rows):
        yr = y[rows]
        if rows.size < min_node_size or rows.size < 2:
            return ("leaf", yr.mean())
        split = brute_cart(X, y, rows, range(X.shape[1]))
        sst = within_ss(yr)
        if split is None or sst - split[2] <= TIE * sst:
            return ("leaf", yr.mean())
        j, s, _ = split
        left = X[rows, j] <= s
        return ("split", j, s, grow(rows[left]), grow(rows[~left]))

    root = grow(np.arange(len(y)))
    out = np.empty(len(Xq))
    for i, x in enumerate(Xq):
        node = root
        while node[0] == "split":
            node = node[3] if x[node[1]] <= node[2] else node[4]
        out[i] = node[1]
    return out


def best_daughter_gain(X, y, rows):
    """Max over splits of ``sum_l n_l (mean_l - mean)^2`` on one cell (unsplit counts as 0)."""
    rows = np.asarray(rows)
    yr = y[rows]
    best = 0.0
    for j in range(X.shape[1]):
        x = X[rows, j]
        for s in split_values(x):
            left = x <= s
            a, b = yr[left], yr[~left]
            g = a.size * (a.mean() - yr.mean()) ** 2 + b.size * (b.mean() - yr.mean()) ** 2
            best = max(best, g)
    return best


def two_level_max(X, y):
    """Exhaustive max of ``S`` over first split then best CART split of each daughter.

    Given the first split, the daughters' best splits are independent, so the
    joint optimum over all two-level partitions is the max over first splits
    of the sum of the daughters' best gains (plus the first split's own gain).
    """
    n = len(y)
    mu = y.mean()
    best = 0.0
    rows = np.arange(n)
    for j in range(X.shape[1]):
        for c in split_values(X[:, j]):
            left = rows[X[:, j] <= c]
            right = rows[X[:, j] > c]
            total = 0.0
            for part in (left, right):
                total += part.size * (y[part].mean() - mu) ** 2 + best_daughter_gain(X, y, part)
            best = max(best, total / n)
    return best


def band_cov_mc(n, extra, rng):
    """Band-correlated Gaussian columns via a Cholesky factor of the target covariance."""
    C = np.eye(extra)
    for lag, v in ((1, np.sqrt(3 / 8)), (2, 3 / 8)):
        C += np.diag(np.full(extra - lag, v), lag) + np.diag(np.full(extra - lag, v), -lag)
    L = np.linalg.cholesky(C)
    return rng.standard_normal((n, extra)) @ L.T

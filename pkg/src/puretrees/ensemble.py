"""Resampling, forest construction and forest serialization."""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .config import CONFIG_TYPES, GrowerConfig
from .core import INTF_VARIANTS, LEAF, LL, ConfigError, Dataset, Forest, Tree, decode_rule
from .growers.et import grow_et_tree
from .growers.intf import grow_intf_tree
from .growers.rf import grow_rf_tree
from .growers.rsrf import grow_rsrf_tree
from .rng import RngStream, randbelow

GROWERS = {"rf": grow_rf_tree, "et": grow_et_tree, "intf": grow_intf_tree, "rsrf": grow_rsrf_tree}

FORMAT_NAME = "puretrees-forest"
FORMAT_VERSION = 1


class ForestFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ResamplePlan:
    replace: bool = True
    fraction: float = 1.0

    @classmethod
    def from_config(cls, cfg: GrowerConfig) -> "ResamplePlan":
        return cls(bool(cfg.replace), float(cfg.fraction()))

    def size(self, n: int) -> int:
        return int(np.floor(self.fraction * n + 1e-9))


@njit(cache=True, nogil=True)
def _with_replacement(state, n, k):
    out = np.empty(k, dtype=np.int64)
    for i in range(k):
        out[i] = randbelow(state, n)
    out.sort()
    return out


@njit(cache=True, nogil=True)
def _without_replacement(state, n, k):
    perm = np.arange(n)
    for i in range(k):
        r = i + randbelow(state, n - i)
        tmp = perm[i]
        perm[i] = perm[r]
        perm[r] = tmp
    return np.sort(perm[:k].copy())


def draw_resample(n: int, plan: ResamplePlan, rng: RngStream) -> np.ndarray:
    """Rows a tree is grown on, sorted, duplicates kept (bootstrap multiset).

    ``replace=False`` with ``fraction=1`` returns ``0..n-1`` without touching
    the stream.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < plan.fraction <= 1.0:
        raise ConfigError("sample_fraction", f"{plan.fraction} outside (0, 1]")
    k = plan.size(n)
    if k < 1:
        raise ConfigError("sample_fraction", f"fraction {plan.fraction} of n={n} leaves no rows")
    if plan.replace:
        return _with_replacement(rng.state, n, k)
    if k == n:
        return np.arange(n, dtype=np.int64)
    return _without_replacement(rng.state, n, k)


def _fit_one(data: Dataset, cfg, seed: int, b: int) -> Tree:
    rng = RngStream(seed, b)
    rows = draw_resample(data.n, ResamplePlan.from_config(cfg), rng)
    return GROWERS[cfg.algorithm](data, rows, cfg, rng)


def default_threads() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


def fit_forest(data: Dataset, cfg: GrowerConfig, seed: int, num_trees: int | None = None,
               threads: int | None = None) -> Forest:
    """Grow ``num_trees`` (default ``cfg.num_trees``) trees; tree ``b`` uses stream ``(seed, b)``.

    The result does not depend on ``threads``.
    """
    cfg = cfg.validate(data.d)
    B = cfg.num_trees if num_trees is None else int(num_trees)
    if B < 1:
        raise ConfigError("num_trees", f"{B} < 1")
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or B == 1:
        trees = [_fit_one(data, cfg, seed, b) for b in range(B)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(lambda b: _fit_one(data, cfg, seed, b), range(B)))
    return Forest(trees, cfg, int(seed), data.d)


# ---------------------------------------------------------------------------
# serialization


def _node_records(tree: Tree) -> list:
    out = []
    for i in range(tree.n_nodes):
        if tree.kind[i] == LEAF:
            out.append({"leaf": float(tree.value[i]), "count": int(tree.count[i])})
            continue
        rec = {"left": int(tree.left[i]), "right": int(tree.right[i])}
        if tree.kind[i] < LL:
            rec.update(rule="axis", j=int(tree.j1[i]), s=float(tree.c1[i]))
        else:
            rec.update(rule=INTF_VARIANTS[tree.kind[i] - LL], j1=int(tree.j1[i]), j2=int(tree.j2[i]),
                       c1=float(tree.c1[i]), c2=float(tree.c2[i]))
        out.append(rec)
    return out


def forest_to_dict(forest: Forest) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": forest.config.to_dict(),
        "seed": forest.seed,
        "n_features": forest.n_features,
        "metadata": forest.metadata,
        "trees": [{"resample": t.resample.tolist(), "nodes": _node_records(t)} for t in forest.trees],
    }


def _tree_from_records(nodes: list, resample) -> Tree:
    m = len(nodes)
    kind = np.zeros(m, dtype=np.int64)
    j1 = np.full(m, -1, dtype=np.int64)
    j2 = np.full(m, -1, dtype=np.int64)
    c1 = np.zeros(m)
    c2 = np.zeros(m)
    left = np.full(m, -1, dtype=np.int64)
    right = np.full(m, -1, dtype=np.int64)
    value = np.zeros(m)
    count = np.zeros(m, dtype=np.int64)
    for i, rec in enumerate(nodes):
        if "leaf" in rec:
            value[i] = rec["leaf"]
            count[i] = rec["count"]
            continue
        if rec["rule"] == "axis":
            k, a, b, ca, cb = decode_rule(1, rec["j"], -1, rec["s"], 0.0).encode()
        else:
            k, a, b, ca, cb = decode_rule(LL + INTF_VARIANTS.index(rec["rule"]), rec["j1"], rec["j2"],
                                          rec["c1"], rec["c2"]).encode()
        kind[i], j1[i], j2[i], c1[i], c2[i] = k, a, b, ca, cb
        left[i], right[i] = rec["left"], rec["right"]
    return Tree(kind, j1, j2, c1, c2, left, right, value, count, np.asarray(resample, dtype=np.int64))


def forest_from_dict(obj: dict) -> Forest:
    if obj.get("format") != FORMAT_NAME:
        raise ForestFormatError("not a serialized forest")
    if obj.get("version") != FORMAT_VERSION:
        raise ForestFormatError(f"forest format version {obj.get('version')!r}, expected {FORMAT_VERSION}")
    params = dict(obj["config"])
    algorithm = params.pop("algorithm")
    cfg = CONFIG_TYPES[algorithm](**params)
    trees = [_tree_from_records(t["nodes"], t["resample"]) for t in obj["trees"]]
    return Forest(trees, cfg, int(obj["seed"]), int(obj["n_features"]), dict(obj.get("metadata", {})))


def save_forest(forest: Forest, path) -> None:
    Path(path).write_text(json.dumps(forest_to_dict(forest), separators=(",", ":")), encoding="utf-8")


def load_forest(path) -> Forest:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ForestFormatError(f"cannot read forest from {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise ForestFormatError("not a serialized forest")
    return forest_from_dict(obj)

"""Tuned parameter settings and the benchmark suites built on them."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import RfConfig, build_config
from ..core import ConfigError
from ..criteria import best_cart_split
from .evaluate import ExperimentReport, run_monte_carlo
from .models import MODELS, data_rng, generate

# Oracle-tuned settings per (model, d).  Column order of the tuples:
#   rsrf:    include_cartcart, replace, width, mtry_cart_cart, mtry_random_cart, min_node_size
#   rsrf_af: include_cartcart, replace, width, mtry_random, mtry_random_cart, min_node_size
#   intf:    npairs, replace, min_node_size
#   rf:      mtry, replace, min_node_size
#   et:      mtry, num_random_splits, replace, min_node_size
_T, _F = True, False
_OPT = {
    ("pure_type", 4): dict(rsrf=(_F, _T, 15, None, 3, 16), rsrf_af=(_F, _T, 8, 3, 4, 14), intf=(14, _T, 20),
                           rf=(4, _T, 5), et=(4, 3, _F, 12)),
    ("pure_type", 10): dict(rsrf=(_T, _T, 15, 6, 9, 10), rsrf_af=(_T, _T, 12, 9, 8, 5), intf=(153, _F, 11),
                            rf=(10, _F, 5), et=(9, 3, _F, 5)),
    ("pure_type", 30): dict(rsrf=(_T, _T, 30, 22, 30, 5), rsrf_af=(_T, _F, 28, 26, 26, 6), intf=(749, _F, 11),
                            rf=(30, _F, 7), et=(29, 6, _F, 5)),
    ("hierarchical", 4): dict(rsrf=(_F, _F, 12, None, 2, 5), rsrf_af=(_F, _T, 11, 4, 3, 10), intf=(7, _F, 10),
                              rf=(3, _T, 8), et=(3, 3, _F, 8)),
    ("hierarchical", 10): dict(rsrf=(_T, _F, 14, 7, 10, 12), rsrf_af=(_T, _T, 14, 8, 9, 11), intf=(110, _F, 8),
                               rf=(6, _T, 6), et=(9, 3, _F, 5)),
    ("hierarchical", 30): dict(rsrf=(_T, _T, 29, 23, 26, 15), rsrf_af=(_T, _F, 24, 19, 30, 17),
                               intf=(450, _F, 17), rf=(9, _T, 12), et=(29, 9, _F, 9)),
    ("additive", 4): dict(rsrf=(_F, _T, 12, None, 2, 14), rsrf_af=(_F, _T, 14, 4, 2, 12), intf=(23, _T, 13),
                          rf=(2, _T, 5), et=(3, 5, _T, 6)),
    ("additive", 10): dict(rsrf=(_T, _T, 15, 2, 8, 11), rsrf_af=(_F, _T, 12, 9, 10, 7), intf=(33, _F, 14),
                           rf=(7, _T, 15), et=(7, 3, _F, 10)),
    ("additive", 30): dict(rsrf=(_T, _T, 16, 24, 24, 8), rsrf_af=(_T, _T, 12, 22, 26, 30), intf=(99, _F, 18),
                           rf=(26, _T, 18), et=(29, 3, _F, 16)),
    ("pure_2", 4): dict(rsrf=(_F, _T, 13, None, 4, 23), rsrf_af=(_F, _T, 3, 4, 2, 20), intf=(2, _F, 16),
                        rf=(2, _T, 10), et=(2, 1, _F, 10)),
    ("pure_2", 10): dict(rsrf=(_F, _T, 15, None, 10, 13), rsrf_af=(_F, _F, 13, 8, 10, 13), intf=(151, _F, 26),
                         rf=(5, _T, 8), et=(7, 1, _T, 6)),
    ("pure_2", 30): dict(rsrf=(_F, _F, 25, None, 30, 22), rsrf_af=(_F, _T, 24, 24, 28, 29), intf=(30, _F, 28),
                         rf=(20, _T, 30), et=(28, 1, _T, 15)),
    ("pure_3", 6): dict(rsrf=(_F, _T, 9, None, 4, 5), rsrf_af=(_F, _F, 15, 5, 4, 9), intf=(99, _T, 22),
                        rf=(5, _T, 6), et=(1, 5, _F, 5)),
}

FOREST_ALGOS = ("rf", "et", "intf", "rsrf")
ALL_ALGOS = FOREST_ALGOS + ("mean_y", "one_nn")


def opt_settings() -> list:
    return sorted(_OPT)


def opt_config(model: str, algorithm: str, d: int | None = None):
    """Tuned config of ``algorithm`` (rf, et, intf, rsrf, rsrf_af) for a model."""
    d = MODELS[model].check_d(d)
    try:
        row = _OPT[(model, d)][algorithm]
    except KeyError:
        raise ConfigError("algo", f"no tuned setting for {algorithm} on {model} with d={d}") from None
    if algorithm == "rsrf":
        inc, rep, w, mcc, mrc, node = row
        params = dict(include_cartcart=inc, replace=rep, width=w, mtry_cart_cart=mcc, mtry_random_cart=mrc,
                      min_node_size=node, num_trees=100)
    elif algorithm == "rsrf_af":
        inc, rep, w, mr, mrc, node = row
        params = dict(include_cartcart=inc, replace=rep, width=w, mtry_random=mr, mtry_random_cart=mrc,
                      min_node_size=node, num_trees=100)
    elif algorithm == "intf":
        params = dict(zip(("npairs", "replace", "min_node_size"), row), num_trees=500)
    elif algorithm == "rf":
        params = dict(zip(("mtry", "replace", "min_node_size"), row), num_trees=500)
    else:
        params = dict(zip(("mtry", "num_random_splits", "replace", "min_node_size"), row), num_trees=500,
                      sample_fraction=1.0)
    return build_config(algorithm, params)


def algorithm_specs(model: str, algos, d: int | None = None) -> tuple:
    """``(labels, specs)`` for a list of algorithm names (``all`` expands)."""
    names = []
    for a in algos:
        names.extend(ALL_ALGOS if a == "all" else [a])
    specs = [a if a in ("mean_y", "one_nn") else opt_config(model, a, d) for a in names]
    return names, specs


# ---------------------------------------------------------------------------
# suites


def suite_table1(reps: int = 20, seed: int = 0, threads=None, log=None) -> ExperimentReport:
    labels, specs = algorithm_specs("pure_3", ["all"])
    return run_monte_carlo("pure_3", specs, 500, 500, reps, seed, threads=threads, labels=labels, log=log)


def suite_fig2a(reps: int = 20, seed: int = 0, n: int = 1000, threads=None, log=None) -> ExperimentReport:
    """RF over ``mtry = 1..6`` (100 trees, node size 5) against tuned INTF on pure-3."""
    specs = [RfConfig(mtry=k, min_node_size=5, num_trees=100) for k in range(1, 7)]
    labels = [f"rf_mtry{k}" for k in range(1, 7)] + ["intf"]
    specs.append(opt_config("pure_3", "intf"))
    return run_monte_carlo("pure_3", specs, n, 500, reps, seed, threads=threads, labels=labels, log=log)


def suite_table3(reps: int = 100, seed: int = 0, models=None, dims=None, threads=None, log=None) -> list:
    """All tuned settings; long-running at the default ``reps``."""
    out = []
    for model, d in opt_settings():
        if (models and model not in models) or (dims and d not in dims):
            continue
        labels, specs = algorithm_specs(model, ["rf", "et", "intf", "rsrf", "rsrf_af", "mean_y", "one_nn"], d)
        out.append(run_monte_carlo(model, specs, 500, 500, reps, seed, d=d, threads=threads, labels=labels,
                                   log=log))
    return out


@dataclass
class BlindnessReport:
    """Root Sample-CART split on large pure-3 samples, one row per seed."""

    n: int
    seed: int
    rows: list = field(default_factory=list)

    FIELDS = ("trial", "root_coordinate", "gain_interacting", "gain_rest", "ratio")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.FIELDS)
        for r in self.rows:
            w.writerow([r["trial"], r["root_coordinate"], repr(r["gain_interacting"]), repr(r["gain_rest"]),
                        repr(r["ratio"])])
        return buf.getvalue()

    def write(self, out_prefix) -> tuple:
        prefix = Path(out_prefix)
        if prefix.suffix in (".csv", ".json"):
            prefix = prefix.with_suffix("")
        prefix.parent.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = prefix.with_suffix(".csv"), prefix.with_suffix(".json")
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        json_path.write_text(json.dumps({"n": self.n, "seed": self.seed, "rows": self.rows}, indent=2),
                             encoding="utf-8")
        return csv_path, json_path


def root_gains(data, coords) -> tuple:
    """Coordinate and impurity decrease of the best root split over ``coords``."""
    split = best_cart_split(np.arange(data.n), coords, data)
    y = data.response
    sst = float(((y - y.mean()) ** 2).sum())
    return split.j, (sst - split.v_score) / data.n


def suite_blindness(trials: int = 20, seed: int = 0, n: int = 10000, log=None) -> BlindnessReport:
    rep = BlindnessReport(n, int(seed))
    for t in range(trials):
        data = generate("pure_3", n, data_rng(seed, t, 0)).data
        j, _ = root_gains(data, range(6))
        _, g12 = root_gains(data, [0, 1])
        _, grest = root_gains(data, range(2, 6))
        rep.rows.append({"trial": t, "root_coordinate": int(j), "gain_interacting": g12, "gain_rest": grest,
                         "ratio": g12 / grest})
        if log is not None:
            log(f"trial {t + 1}/{trials}: root coordinate {j + 1}, ratio {g12 / grest:.4f}")
    return rep


SUITES = {"table1": suite_table1, "fig2a": suite_fig2a, "table3": suite_table3, "blindness": suite_blindness}

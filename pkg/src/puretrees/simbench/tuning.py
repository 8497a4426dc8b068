"""Random-search tuning: cross-validated, oracle ("opt") and nested CV."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import GrowerConfig, build_config
from ..core import ConfigError, Dataset
from .evaluate import derived_seed, fit_predictor, mse_on_test, replicate_data
from .models import get_model


@dataclass(frozen=True)
class TuningSpace:
    """Finite per-parameter choice lists for one algorithm.

    ``choices`` maps parameter names (config keys) to candidate tuples;
    ``fixed`` holds parameters that are not searched.  A draw picks every
    searched parameter independently and uniformly.
    """

    algorithm: str
    choices: dict
    fixed: dict = field(default_factory=dict)

    @classmethod
    def single(cls, cfg: GrowerConfig) -> "TuningSpace":
        params = {k: v for k, v in cfg.to_dict().items() if k != "algorithm"}
        return cls(cfg.algorithm, {}, params)

    @classmethod
    def simulation(cls, algorithm: str, d: int) -> "TuningSpace":
        """Search ranges of the simulation study for dimension ``d``."""
        nodes = tuple(range(5, 31))
        flags = (True, False)
        mtry = tuple(range(1, d + 1))
        if algorithm == "rf":
            return cls("rf", {"mtry": mtry, "min_node_size": nodes, "replace": flags}, {"num_trees": 500})
        if algorithm == "et":
            return cls("et", {"mtry": mtry, "num_random_splits": tuple(range(1, 11)), "min_node_size": nodes,
                              "replace": flags}, {"num_trees": 500, "sample_fraction": 1.0})
        if algorithm == "intf":
            return cls("intf", {"npairs": tuple(range(1, 25 * d + 1)), "min_node_size": nodes, "replace": flags},
                       {"num_trees": 500})
        if algorithm == "rsrf":
            width = tuple(range(1, (30 if d > 10 else 15) + 1))
            return cls("rsrf", {"include_cartcart": flags, "replace": flags, "width": width,
                                "mtry_cart_cart": mtry, "mtry_random_cart": mtry, "min_node_size": nodes},
                       {"num_trees": 100, "mtry_mode": "not_fixed"})
        raise ConfigError("algo", f"no search space for {algorithm!r}")

    def size(self) -> int:
        return int(np.prod([len(v) for v in self.choices.values()])) if self.choices else 1

    def draw(self, rng: np.random.Generator) -> GrowerConfig:
        params = dict(self.fixed)
        for key in sorted(self.choices):
            options = self.choices[key]
            params[key] = options[int(rng.integers(len(options)))]
        if self.algorithm == "rsrf" and not params.get("include_cartcart", False):
            params.pop("mtry_cart_cart", None)
        return build_config(self.algorithm, params)

    def draw_many(self, combos: int, rng: np.random.Generator) -> list:
        """``combos`` draws with duplicates removed, in first-drawn order."""
        out, seen = [], set()
        for _ in range(combos):
            cfg = self.draw(rng)
            if cfg not in seen:
                seen.add(cfg)
                out.append(cfg)
        return out


@dataclass
class TuneResult:
    best: GrowerConfig
    configs: list
    scores: list


def _pick(configs, scores) -> TuneResult:
    best = int(np.argmin(scores))  # first minimiser
    return TuneResult(configs[best], configs, [float(s) for s in scores])


def kfold_indices(n: int, folds: int, rng: np.random.Generator) -> list:
    if not 2 <= folds <= n:
        raise ValueError(f"folds must lie in [2, n={n}]")
    return [np.sort(f) for f in np.array_split(rng.permutation(n), folds)]


def cv_error(data: Dataset, cfg, folds: list, seed: int, threads=None) -> float:
    """Cross-validated squared error against the observed responses."""
    total = 0.0
    everything = np.arange(data.n)
    for k, test in enumerate(folds):
        train = np.setdiff1d(everything, test, assume_unique=True)
        model = fit_predictor(cfg, data.subset(train), derived_seed(seed, k), threads)
        pred = model.predict(data.features[test])
        total += float(((pred - data.response[test]) ** 2).sum())
    return total / data.n


def cv_tune(data: Dataset, space: TuningSpace, combos: int = 200, folds: int = 10, seed: int = 0,
            threads=None) -> TuneResult:
    """Random search over ``space`` scored by ``folds``-fold CV on noisy responses."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(0,)))
    configs = space.draw_many(combos, rng)
    split = kfold_indices(data.n, folds, rng)
    scores = [cv_error(data, cfg, split, derived_seed(seed, 1, i), threads) for i, cfg in enumerate(configs)]
    return _pick(configs, scores)


def opt_tune(model, space: TuningSpace, combos: int = 200, sims: int = 30, seed: int = 0, n_train: int = 500,
             n_test: int = 500, d: int | None = None, threads=None) -> TuneResult:
    """Random search scored by the error against the true regression function,
    averaged over ``sims`` fresh simulated data sets (shared by all configs)."""
    model = get_model(model) if isinstance(model, str) else model
    if sims < 1:
        raise ValueError("sims must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(0,)))
    configs = space.draw_many(combos, rng)
    sets = [replicate_data(model, n_train, n_test, seed, s + 1, d) for s in range(sims)]
    scores = []
    for i, cfg in enumerate(configs):
        errs = [mse_on_test(fit_predictor(cfg, tr.data, derived_seed(seed, 2, i, s), threads), te).mse
                for s, (tr, te) in enumerate(sets)]
        scores.append(float(np.mean(errs)))
    return _pick(configs, scores)


@dataclass
class NestedResult:
    errors: list = field(default_factory=list)
    chosen: list = field(default_factory=list)


def nested_cv(data: Dataset, spaces: dict, inner: int = 5, outer: int = 5, repeats: int = 2, combos: int = 200,
              seed: int = 0, threads=None) -> dict:
    """Repeated nested CV; returns ``{label: NestedResult}`` with ``repeats * outer``
    held-out squared errors (against responses) per label.

    ``spaces`` maps labels to a :class:`TuningSpace`, a fixed config or a
    baseline name; only spaces are tuned in the inner loop.
    """
    if not 2 <= outer <= data.n:
        raise ValueError(f"outer must lie in [2, n={data.n}]")
    results = {label: NestedResult() for label in spaces}
    everything = np.arange(data.n)
    for r in range(repeats):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(r,)))
        for k, test in enumerate(kfold_indices(data.n, outer, rng)):
            train = data.subset(np.setdiff1d(everything, test, assume_unique=True))
            for a, (label, space) in enumerate(spaces.items()):
                if isinstance(space, TuningSpace):
                    cfg = cv_tune(train, space, combos, inner, derived_seed(seed, r, k, a), threads).best
                else:
                    cfg = space
                fitted = fit_predictor(cfg, train, derived_seed(seed, r, k, a, 1), threads)
                pred = fitted.predict(data.features[test])
                results[label].errors.append(float(np.mean((pred - data.response[test]) ** 2)))
                results[label].chosen.append(cfg)
    return results

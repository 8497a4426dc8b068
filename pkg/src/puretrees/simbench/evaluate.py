"""Test-set error and Monte Carlo replication."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from ..baselines import BASELINES, fit_baseline
from ..config import GrowerConfig
from ..ensemble import fit_forest
from .models import SimData, SimulationModel, data_rng, generate, get_model


@dataclass(frozen=True)
class MseResult:
    mse: float
    mse_y: float


def mse_on_test(predictor, test: SimData) -> MseResult:
    """Error against the regression function and against the noisy responses."""
    pred = np.asarray(predictor.predict(test.X), dtype=np.float64)
    return MseResult(float(np.mean((pred - test.truth) ** 2)), float(np.mean((pred - test.y) ** 2)))


def derived_seed(seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def fit_predictor(spec, data, seed: int, threads: int | None = None):
    """Fit a forest (``spec`` a grower config) or a baseline (``spec`` a baseline name)."""
    if isinstance(spec, str):
        return fit_baseline(spec, data)
    return fit_forest(data, spec, seed, threads=threads)


def spec_name(spec) -> str:
    return spec if isinstance(spec, str) else spec.algorithm


def spec_params(spec) -> dict:
    return {} if isinstance(spec, str) else spec.to_dict()


def replicate_data(model: SimulationModel, n_train: int, n_test: int, seed: int, rep: int, d=None):
    rng = data_rng(seed, rep, 0)
    return generate(model, n_train, rng, d), generate(model, n_test, rng, d)


@dataclass
class ReportRow:
    label: str
    algorithm: str
    mse: list
    mse_y: list
    params: dict
    seconds: float = 0.0

    @property
    def reps(self) -> int:
        return len(self.mse)

    @staticmethod
    def _sd(v) -> float:
        return float(np.std(v, ddof=1)) if len(v) > 1 else 0.0

    @property
    def mean_mse(self) -> float:
        return float(np.mean(self.mse))

    @property
    def sd_mse(self) -> float:
        return self._sd(self.mse)

    @property
    def mean_mse_y(self) -> float:
        return float(np.mean(self.mse_y))

    @property
    def sd_mse_y(self) -> float:
        return self._sd(self.mse_y)


CSV_FIELDS = ["label", "algorithm", "model", "d", "n_train", "n_test", "reps", "seed",
              "mean_mse", "sd_mse", "mean_mse_y", "sd_mse_y", "params"]


@dataclass
class ExperimentReport:
    """Per-predictor error summaries of one experiment.

    The CSV form contains only seed-determined content; wall-clock times and
    the creation timestamp live in the JSON ``metadata``.
    """

    model: str
    d: int
    n_train: int
    n_test: int
    seed: int
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def row(self, label: str) -> ReportRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def mean(self, label: str) -> float:
        return self.row(label).mean_mse

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow([r.label, r.algorithm, self.model, self.d, self.n_train, self.n_test, r.reps, self.seed,
                        repr(r.mean_mse), repr(r.sd_mse), repr(r.mean_mse_y), repr(r.sd_mse_y),
                        json.dumps(r.params, sort_keys=True)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "model": self.model, "d": self.d, "n_train": self.n_train, "n_test": self.n_test, "seed": self.seed,
            "rows": [{"label": r.label, "algorithm": r.algorithm, "reps": r.reps, "mean_mse": r.mean_mse,
                      "sd_mse": r.sd_mse, "mean_mse_y": r.mean_mse_y, "sd_mse_y": r.sd_mse_y,
                      "mse": r.mse, "mse_y": r.mse_y, "params": r.params} for r in self.rows],
            "metadata": {**self.metadata, "seconds": {r.label: r.seconds for r in self.rows}},
        }

    def write(self, out_prefix) -> tuple:
        """Write ``<prefix>.csv`` and ``<prefix>.json``; returns both paths."""
        from pathlib import Path
        prefix = Path(out_prefix)
        if prefix.suffix in (".csv", ".json"):
            prefix = prefix.with_suffix("")
        prefix.parent.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = prefix.with_suffix(".csv"), prefix.with_suffix(".json")
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        json_path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
        return csv_path, json_path


def run_monte_carlo(model, specs, n_train: int = 500, n_test: int = 500, reps: int = 100, seed: int = 0,
                    d: int | None = None, threads: int | None = None, labels=None, log=None) -> ExperimentReport:
    """Replicate train/test draws and score every predictor spec on each.

    ``specs`` is a grower config, a baseline name, or a list of those.  All
    specs see the same data in a replication (data stream ``(seed, r, 0)``);
    forests of replication ``r`` use master seed ``derived_seed(seed, r, 1)``.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if isinstance(model, str):
        model = get_model(model)
    d = model.check_d(d)
    if isinstance(specs, (str, GrowerConfig.__args__)):
        specs = [specs]
    specs = list(specs)
    for s in specs:
        if isinstance(s, str) and s not in BASELINES:
            raise ValueError(f"unknown baseline {s!r}")
    labels = list(labels) if labels is not None else [spec_name(s) for s in specs]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate labels; pass labels= explicitly")
    rows = [ReportRow(lab, spec_name(s), [], [], spec_params(s if isinstance(s, str) else s.validate(d)))
            for lab, s in zip(labels, specs)]
    for r in range(reps):
        train, test = replicate_data(model, n_train, n_test, seed, r, d)
        fseed = derived_seed(seed, r, 1)
        for row, spec in zip(rows, specs):
            t0 = time.perf_counter()
            res = mse_on_test(fit_predictor(spec, train.data, fseed, threads), test)
            row.seconds += time.perf_counter() - t0
            row.mse.append(res.mse)
            row.mse_y.append(res.mse_y)
        if log is not None:
            log(f"rep {r + 1}/{reps}: " + " ".join(f"{row.label}={row.mse[-1]:.4f}" for row in rows))
    meta = {"created": datetime.now(timezone.utc).isoformat(timespec="seconds"), "reps": reps}
    return ExperimentReport(model.name, d, n_train, n_test, int(seed), rows, meta)

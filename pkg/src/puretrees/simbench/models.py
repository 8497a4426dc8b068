"""Regression functions and covariate distributions of the simulation study.

All models add i.i.d. standard normal noise.  ``pure_2`` and ``pure_3`` draw
covariates uniformly on the unit cube; the other three use
``2.5 / pi * arctan(Z)`` of an equicorrelated Gaussian vector ``Z`` with
unit variances and pairwise correlation 0.3, giving support
``(-1.25, 1.25)^d``.

Random numbers for data come from numpy's PCG64 generator keyed by a
``SeedSequence``; normals use numpy's ziggurat sampler, which is
platform-independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import Dataset

GAUSS_CORR = 0.3
NOISE_SD = 1.0


def _pure_type(X):
    return -2 * np.sin(X[:, 0] * X[:, 1] * np.pi) + 2 * np.sin(X[:, 1] * X[:, 2] * np.pi)


def _additive(X):
    return -2 * np.sin(X[:, 0] * np.pi) + 2 * np.sin(X[:, 1] * np.pi) - 2 * np.sin(X[:, 2] * np.pi)


def _hierarchical(X):
    return _additive(X) + _pure_type(X)


def _pure_2(X):
    return 5 * (X[:, 0] - 0.5) * (X[:, 1] - 0.5) + 5 * X[:, 2]


def _pure_3(X):
    return 10 * (X[:, 0] - 0.5) * (X[:, 1] - 0.5) + X[:, 2:6].sum(axis=1)


@dataclass(frozen=True)
class SimulationModel:
    name: str
    m: Callable[[np.ndarray], np.ndarray]
    feature_dist: str
    default_d: int
    fixed_d: bool = False
    min_d: int = 3
    noise_sd: float = NOISE_SD

    def check_d(self, d: int | None) -> int:
        if d is None:
            return self.default_d
        if self.fixed_d and d != self.default_d:
            raise ValueError(f"model {self.name} requires d={self.default_d}")
        if d < self.min_d:
            raise ValueError(f"model {self.name} needs d >= {self.min_d}")
        return int(d)


MODELS = {
    "pure_type": SimulationModel("pure_type", _pure_type, "arctan_gauss", 4),
    "hierarchical": SimulationModel("hierarchical", _hierarchical, "arctan_gauss", 4),
    "additive": SimulationModel("additive", _additive, "arctan_gauss", 4),
    "pure_2": SimulationModel("pure_2", _pure_2, "uniform_01", 4),
    "pure_3": SimulationModel("pure_3", _pure_3, "uniform_01", 6, fixed_d=True, min_d=6),
}


def get_model(name: str) -> SimulationModel:
    key = name.strip().lower().replace("-", "_")
    if key not in MODELS:
        raise KeyError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    return MODELS[key]


def data_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream ``(seed, *key)``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key)))


def sample_features(dist: str, n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    if dist == "uniform_01":
        return rng.random((n, d))
    if dist == "arctan_gauss":
        z = rng.standard_normal((n, d))
        z0 = rng.standard_normal((n, 1))
        gauss = np.sqrt(1 - GAUSS_CORR) * z + np.sqrt(GAUSS_CORR) * z0
        return 2.5 / np.pi * np.arctan(gauss)
    raise ValueError(f"unknown feature distribution {dist!r}")


@dataclass(frozen=True, eq=False)
class SimData:
    """A simulated sample together with the noiseless regression values."""

    data: Dataset
    truth: np.ndarray

    @property
    def X(self) -> np.ndarray:
        return self.data.features

    @property
    def y(self) -> np.ndarray:
        return self.data.response


def generate(model: SimulationModel | str, n: int, rng: np.random.Generator, d: int | None = None) -> SimData:
    if isinstance(model, str):
        model = get_model(model)
    if n < 1:
        raise ValueError("n must be positive")
    d = model.check_d(d)
    X = sample_features(model.feature_dist, n, d, rng)
    truth = model.m(X)
    y = truth + model.noise_sd * rng.standard_normal(n)
    return SimData(Dataset.from_arrays(X, y), truth)

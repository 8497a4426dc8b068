"""Reference predictors: the training mean and the 1-nearest-neighbour interpolant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset


@dataclass(eq=False)
class MeanY:
    mean: float
    kind = "mean_y"

    @classmethod
    def fit(cls, data: Dataset) -> "MeanY":
        return cls(float(np.mean(data.response)))

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.full(X.shape[0], self.mean)


@dataclass(eq=False)
class OneNN:
    """Euclidean 1-NN on unscaled features; ties go to the lowest training row."""

    features: np.ndarray
    response: np.ndarray
    kind = "one_nn"
    chunk: int = 256

    @classmethod
    def fit(cls, data: Dataset) -> "OneNN":
        return cls(np.ascontiguousarray(data.features), data.response)

    def neighbours(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.features.shape[1]:
            raise ValueError(f"expected {self.features.shape[1]} features, got {X.shape[1]}")
        out = np.empty(X.shape[0], dtype=np.int64)
        for a in range(0, X.shape[0], self.chunk):
            block = X[a:a + self.chunk]
            dist = ((block[:, None, :] - self.features[None, :, :]) ** 2).sum(axis=2)
            out[a:a + self.chunk] = dist.argmin(axis=1)
        return out

    def predict(self, X) -> np.ndarray:
        return self.response[self.neighbours(X)]


BASELINES = {"mean_y": MeanY, "one_nn": OneNN}


def fit_baseline(kind: str, data: Dataset):
    try:
        return BASELINES[kind].fit(data)
    except KeyError:
        raise ValueError(f"unknown baseline {kind!r}") from None


def predict_baseline(model, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("x must be finite")
    return float(model.predict(x.reshape(1, -1))[0])

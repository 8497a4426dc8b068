"""Band-correlated Gaussian noise covariates.

The appended columns are ``Z_j = a0 W_j + a1 W_{j+1} + a2 W_{j+2}`` for
i.i.d. standard normal ``W``.  Their covariance is 1 at lag 0, ``sqrt(3/8)``
at lag 1, ``3/8`` at lag 2 and 0 beyond, which requires

    a0**2 + a1**2 + a2**2 = 1,  a0*a1 + a1*a2 = sqrt(3/8),  a0*a2 = 3/8,

solved by ``a0 = a2 = sqrt(3/8)``, ``a1 = 1/2``.  A moving average is
positive semidefinite by construction, so no matrix factorisation is needed.
"""
from __future__ import annotations

import numpy as np

from ..core import Dataset

A0 = float(np.sqrt(3 / 8))
A1 = 0.5
A2 = A0
BAND = (1.0, float(np.sqrt(3 / 8)), 3 / 8)


def band_columns(n: int, extra: int, rng: np.random.Generator) -> np.ndarray:
    W = rng.standard_normal((n, extra + 2))
    return A0 * W[:, :extra] + A1 * W[:, 1:extra + 1] + A2 * W[:, 2:extra + 2]


def hd_augment(data: Dataset, extra: int = 50, rng: np.random.Generator | None = None) -> Dataset:
    """Append ``extra`` band-correlated noise columns, independent of the data."""
    if extra < 1:
        raise ValueError("extra must be >= 1")
    if rng is None:
        raise ValueError("an explicit generator is required")
    Z = band_columns(data.n, extra, rng)
    return Dataset.from_arrays(np.hstack([data.features, Z]), data.response)

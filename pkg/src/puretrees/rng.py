"""Deterministic random streams shared by Python code and compiled kernels.

Every tree owns one stream keyed by ``(master seed, tree index)``.  The state
is a single ``uint64`` held in a length-1 array so that numba kernels can
advance it in place; the generator is SplitMix64.  Because SplitMix64 advances
its state by a fixed increment, the number of draws taken from a stream is
recoverable from the state alone (see :meth:`RngStream.draws`).
"""
from __future__ import annotations

import numpy as np
from numba import njit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True)
def next_u64(state):
    state[0] += _GAMMA
    z = state[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def uniform(state):
    """Uniform double on [0, 1) with 53 random bits."""
    return float(next_u64(state) >> _S11) * _INV53


@njit(cache=True, nogil=True)
def randbelow(state, k):
    """Uniform integer on ``{0, ..., k-1}``; ``k`` must be positive."""
    r = int(uniform(state) * k)
    if r >= k:
        r = k - 1
    return r


@njit(cache=True, nogil=True)
def draw_subset(state, d, k, perm):
    """Draw ``k`` of ``range(d)`` without replacement, returned sorted.

    ``perm`` is caller-owned scratch of length ``>= d``; its contents are
    reset here so that the result only depends on the stream.
    """
    for i in range(d):
        perm[i] = i
    for i in range(k):
        r = i + randbelow(state, d - i)
        tmp = perm[i]
        perm[i] = perm[r]
        perm[r] = tmp
    return np.sort(perm[:k].copy())


def _derive_state(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class RngStream:
    """Seeded SplitMix64 stream; identical ``(seed, index)`` give identical draws."""

    def __init__(self, seed: int, index: int = 0):
        self.seed = int(seed)
        self.index = int(index)
        self.state = np.array([_derive_state(seed, index)], dtype=np.uint64)
        self._origin = int(self.state[0])

    def uniform(self) -> float:
        return uniform(self.state)

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError("k must be positive")
        return randbelow(self.state, k)

    def subset(self, d: int, k: int) -> np.ndarray:
        if not 1 <= k <= d:
            raise ValueError(f"subset size {k} outside [1, {d}]")
        return draw_subset(self.state, d, k, np.empty(d, dtype=np.int64))

    def draws(self) -> int:
        """Number of 64-bit words consumed since construction."""
        delta = (int(self.state[0]) - self._origin) % (1 << 64)
        return (delta * pow(int(_GAMMA), -1, 1 << 64)) % (1 << 64)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, index={self.index}, draws={self.draws()})"

"""Deterministic low-discrepancy sampling addressable by (seed, index).

Sample ``i`` of a run with seed ``s`` draws its randomness from point ``i`` of a
scrambled Halton sequence seeded with ``s``.  A sampler that needs more
coordinates than the point carries (rejection loops, wide tangent vectors)
continues from a ``numpy`` generator keyed on ``(s, i)``, so any single sample
can be regenerated without replaying the run.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc
from scipy.special import ndtri

DIM = 16
_CLIP = 1e-12


class SampleStream:
    """Generator-compatible draws for one sample, consuming coordinates in order."""

    def __init__(self, point: np.ndarray, seed: int, index: int):
        self._u = np.clip(np.asarray(point, dtype=float), _CLIP, 1 - _CLIP)
        self._pos = 0
        self._key = (int(seed), int(index))
        self._fallback: np.random.Generator | None = None

    def _take(self, k: int) -> np.ndarray:
        head = self._u[self._pos:self._pos + k]
        self._pos += len(head)
        if len(head) == k:
            return head
        if self._fallback is None:
            self._fallback = np.random.default_rng(list(self._key))
        tail = np.clip(self._fallback.random(k - len(head)), _CLIP, 1 - _CLIP)
        return np.concatenate([head, tail])

    def random(self, size=None):
        return self._shape(self._take(_count(size)), size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._shape(low + (high - low) * self._take(_count(size)), size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._shape(loc + scale * ndtri(self._take(_count(size))), size)

    def exponential(self, scale=1.0, size=None):
        return self._shape(-scale * np.log1p(-self._take(_count(size))), size)

    def choice(self, a, size=None, p=None):
        a = list(a) if not isinstance(a, (int, np.integer)) else list(range(int(a)))
        cdf = np.cumsum(np.ones(len(a)) / len(a) if p is None else np.asarray(p, dtype=float))
        cdf /= cdf[-1]
        idx = np.searchsorted(cdf, self._take(_count(size)), side="right")
        picks = [a[min(int(i), len(a) - 1)] for i in idx]
        return picks[0] if size is None else np.array(picks).reshape(size)

    @staticmethod
    def _shape(values: np.ndarray, size):
        if size is None:
            return float(values[0])
        return values.reshape(size)


def _count(size) -> int:
    if size is None:
        return 1
    if isinstance(size, (int, np.integer)):
        return int(size)
    return int(math.prod(size))


def halton(seed: int, n: int, dim: int = DIM) -> np.ndarray:
    """First ``n`` points of the scrambled Halton sequence for ``seed``."""
    if n == 0:
        return np.empty((0, dim))
    return qmc.Halton(d=dim, scramble=True, seed=int(seed)).random(n)


def stream(seed: int, index: int, dim: int = DIM) -> SampleStream:
    """Randomness of sample ``index`` alone, as used inside a run of that seed."""
    engine = qmc.Halton(d=dim, scramble=True, seed=int(seed))
    engine.fast_forward(int(index))
    return SampleStream(engine.random(1)[0], seed, index)


def streams(seed: int, n: int, dim: int = DIM) -> list[SampleStream]:
    return [SampleStream(row, seed, i) for i, row in enumerate(halton(seed, n, dim))]

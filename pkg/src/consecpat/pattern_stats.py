"""Distinct, repeated and paired consecutive patterns of a permutation.

For each window length k:

* ``x_k`` -- number of distinct patterns among the n-k+1 windows,
* ``y_k`` -- windows repeating a pattern already seen, (n-k+1) - x_k,
* ``z_k`` -- unordered pairs of windows showing the same pattern.

``multiplicity_profile`` is the direct route (sort every window).
``distinct_counts`` runs a vectorised refinement kernel: the pattern of the
window of length k+1 at start j is determined by the pattern of the window of
length k at j together with the number of those k values below the new value
at j+k.  Class ids are therefore refined level by level with exact integer
keys, so distinct windows never collide at any k.  Once every window of some
length is distinct, every longer window is too, and the remaining levels are
filled in without further work.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidInputError
from .perm_core import PatternCode, as_pattern, as_permutation, pattern_of


@dataclass(frozen=True)
class LevelStats:
    k: int
    windows: int
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class MultiplicityProfile:
    k: int
    counts: dict[PatternCode, int]
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class WindowStats:
    n: int
    kmin: int
    kmax: int
    levels: tuple[LevelStats, ...]

    @property
    def x_total(self) -> int:
        return sum(lv.x for lv in self.levels)

    def level(self, k: int) -> LevelStats:
        if not self.kmin <= k <= self.kmax:
            raise KeyError(k)
        return self.levels[k - self.kmin]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "windows", "x_k", "y_k", "z_k"])
        for lv in self.levels:
            w.writerow([lv.k, lv.windows, lv.x, lv.y, lv.z])
        return buf.getvalue()


def multiplicity_profile(perm, k: int) -> MultiplicityProfile:
    perm = as_permutation(perm)
    n = perm.n
    if not 1 <= k <= n:
        raise InvalidInputError(f"k={k} outside 1..{n}")
    v = perm.values
    counts = Counter(pattern_of(v[j:j + k]) for j in range(n - k + 1))
    x = len(counts)
    return MultiplicityProfile(
        k=k,
        counts=dict(counts),
        x=x,
        y=(n - k + 1) - x,
        z=sum(comb(m, 2) for m in counts.values()),
    )


def occurrences(perm, p) -> tuple[int, list[int]]:
    """Number of windows showing ``p`` and their 1-based start positions."""
    perm = as_permutation(perm)
    p = as_pattern(p)
    n, k = perm.n, p.k
    if k > n:
        raise InvalidInputError(f"pattern length {k} exceeds permutation length {n}")
    v = perm.values
    positions = [j + 1 for j in range(n - k + 1) if pattern_of(v[j:j + k]) == p]
    return len(positions), positions


def level_counts(perms: np.ndarray, kmax: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-row ``x_k`` and ``z_k`` for a stack of permutations.

    ``perms`` has shape (R, n) with distinct values in each row (any labels).
    Returns two int64 arrays of shape (R, kmax); column k-1 holds level k.
    """
    perms = np.asarray(perms, dtype=np.int64)
    if perms.ndim != 2:
        raise InvalidInputError("expected a 2-d array of permutations")
    R, n = perms.shape
    kmax = n if kmax is None else kmax
    if not 1 <= kmax <= n:
        raise InvalidInputError(f"kmax={kmax} outside 1..{n}")
    xs = np.zeros((R, kmax), dtype=np.int64)
    zs = np.zeros((R, kmax), dtype=np.int64)
    if R == 0:
        return xs, zs

    # level 1: a single class per row
    cls = np.repeat(np.arange(R, dtype=np.int64)[:, None], n, axis=1)
    cls_row = np.arange(R, dtype=np.int64)
    xs[:, 0] = 1
    zs[:, 0] = n * (n - 1) // 2
    k = 1
    while k < kmax:
        m = n - k  # windows of length k+1
        new_vals = perms[:, k:]
        below = np.zeros((R, m), dtype=np.int64)
        for t in range(k):
            below += perms[:, t:t + m] < new_vals
        keys = cls[:, :m] * (k + 1) + below
        uniq, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
        cls_row = cls_row[uniq // (k + 1)]
        cls = inverse.reshape(R, m)
        k += 1
        xs[:, k - 1] = np.bincount(cls_row, minlength=R)
        zs[:, k - 1] = np.bincount(cls_row, weights=counts * (counts - 1) // 2, minlength=R).astype(np.int64)
        if counts.max() == 1:
            # every window already distinct: longer windows stay distinct
            rest = np.arange(k + 1, kmax + 1)
            xs[:, k:] = n - rest + 1
            break
    return xs, zs


def window_codes(perms: np.ndarray, k: int) -> np.ndarray:
    """Lehmer codes of every length-k window; shape (R, n-k+1)."""
    perms = np.asarray(perms, dtype=np.int64)
    R, n = perms.shape
    m = n - k + 1
    codes = np.zeros((R, m), dtype=np.int64)
    for i in range(k):
        digit = np.zeros((R, m), dtype=np.int64)
        head = perms[:, i:i + m]
        for j in range(i + 1, k):
            digit += perms[:, j:j + m] < head
        codes = codes * (k - i) + digit
    return codes


def distinct_counts(perm, kmin: int = 1, kmax: int | None = None) -> WindowStats:
    perm = as_permutation(perm)
    n = perm.n
    kmax = n if kmax is None else kmax
    if not 1 <= kmin <= kmax <= n:
        raise InvalidInputError(f"invalid k-range [{kmin}, {kmax}] for n={n}")
    xs, zs = level_counts(np.array([perm.values]), kmax)
    levels = []
    for k in range(kmin, kmax + 1):
        w = n - k + 1
        x = int(xs[0, k - 1])
        levels.append(LevelStats(k=k, windows=w, x=x, y=w - x, z=int(zs[0, k - 1])))
    return WindowStats(n=n, kmin=kmin, kmax=kmax, levels=tuple(levels))

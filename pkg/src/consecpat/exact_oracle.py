"""Ground truth by exhaustive enumeration of all n! permutations (small n only)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import mpmath
import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .pattern_stats import level_counts, window_codes
from .perm_core import as_pattern, encode_compact

MAX_ENUM_N = 9
MAX_MERGED_LENGTH = 10


@dataclass(frozen=True)
class DistributionTable:
    """Probability mass function on 0..len(pmf)-1."""

    pmf: tuple[Fraction, ...]

    @property
    def support(self) -> range:
        return range(len(self.pmf))

    @property
    def mean(self) -> Fraction:
        return sum((j * q for j, q in enumerate(self.pmf)), Fraction(0))


@dataclass(frozen=True)
class ExactExpectations:
    n: int
    ex_k: tuple[Fraction, ...]  # index k-1
    ey_k: tuple[Fraction, ...]
    ez_k: tuple[Fraction, ...]

    @property
    def ex(self) -> Fraction:
        return sum(self.ex_k, Fraction(0))


def _check_n(n: int, cap: int = MAX_ENUM_N) -> None:
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if n > cap:
        raise ResourceLimitError(f"exhaustive enumeration capped at length {cap}, got {n}")


def _chunk(n: int, first: int) -> np.ndarray:
    """All permutations of 1..n starting with ``first``, in lexicographic order."""
    rest = [v for v in range(1, n + 1) if v != first]
    body = np.array(list(permutations(rest)), dtype=np.int64).reshape(math.factorial(n - 1), n - 1)
    return np.hstack([np.full((body.shape[0], 1), first, dtype=np.int64), body])


def all_permutations(n: int) -> np.ndarray:
    """(n!, n) array of every permutation of 1..n in lexicographic order."""
    _check_n(n, MAX_MERGED_LENGTH)
    return np.vstack([_chunk(n, f) for f in range(1, n + 1)])


def enumerate_expectations(n: int, workers: int = 1) -> ExactExpectations:
    """Exact E(X^k), E(Y^k), E(Z^k) for every k by averaging over all n! permutations.

    Work is split by first element; chunk sums are added in order.
    """
    _check_n(n)

    def chunk_sums(first: int):
        xs, zs = level_counts(_chunk(n, first))
        return xs.sum(axis=0), zs.sum(axis=0)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk_sums, range(1, n + 1)))
    else:
        parts = [chunk_sums(f) for f in range(1, n + 1)]
    xsum = sum(p[0] for p in parts)
    zsum = sum(p[1] for p in parts)
    total = math.factorial(n)
    ex = tuple(Fraction(int(v), total) for v in xsum)
    ez = tuple(Fraction(int(v), total) for v in zsum)
    ey = tuple(Fraction(n - k + 1) - ex[k - 1] for k in range(1, n + 1))
    return ExactExpectations(n=n, ex_k=ex, ey_k=ey, ez_k=ez)


@lru_cache(maxsize=16)
def _window_codes_all(n: int, k: int) -> np.ndarray:
    return window_codes(all_permutations(n), k)


def u_distribution(n: int, k: int, p) -> DistributionTable:
    """Exact law of the number of windows showing ``p`` in a uniform permutation of length n."""
    _check_n(n)
    p = as_pattern(p)
    if p.k != k or not 1 <= k <= n:
        raise InvalidInputError(f"pattern length {p.k}, k={k}, n={n} inconsistent")
    codes = _window_codes_all(n, k)
    hits = (codes == encode_compact(p)).sum(axis=1)
    counts = np.bincount(hits, minlength=n - k + 2)
    total = math.factorial(n)
    return DistributionTable(pmf=tuple(Fraction(int(c), total) for c in counts))


def exact_tv_to_poisson(table: DistributionTable, lam) -> float:
    """Total variation distance between ``table`` and Po(lam), evaluated at 50 digits."""
    lam = Fraction(lam)
    if lam <= 0:
        raise InvalidInputError("lambda must be positive")
    with mpmath.workdps(50):
        ml = mpmath.mpf(lam.numerator) / lam.denominator
        po = mpmath.exp(-ml)
        cdf = mpmath.mpf(0)
        acc = mpmath.mpf(0)
        for j, q in enumerate(table.pmf):
            if j > 0:
                po = po * ml / j
            cdf += po
            acc += abs(mpmath.mpf(q.numerator) / q.denominator - po)
        acc += 1 - cdf
        return float(acc / 2)


@lru_cache(maxsize=None)
def _joint_table(k: int, r: int) -> dict[int, int]:
    length = 2 * k - r
    perms = all_permutations(length)
    first = window_codes(perms[:, :k], k)[:, 0]
    second = window_codes(perms[:, k - r:], k)[:, 0]
    same = first[first == second]
    codes, counts = np.unique(same, return_counts=True)
    return {int(c): int(m) for c, m in zip(codes, counts)}


def joint_window_bruteforce(p, r: int) -> int:
    """Count permutations of length 2k-r showing ``p`` at starts 1 and k-r+1, by enumeration."""
    p = as_pattern(p)
    k = p.k
    if not 1 <= r <= k - 1:
        raise InvalidInputError(f"overlap r={r} outside 1..{k - 1}")
    if 2 * k - r > MAX_MERGED_LENGTH:
        raise ResourceLimitError(f"merged length {2 * k - r} exceeds cap {MAX_MERGED_LENGTH}")
    return _joint_table(k, r).get(encode_compact(p), 0)

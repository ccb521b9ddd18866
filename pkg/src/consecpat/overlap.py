"""A pattern occurring at two overlapping windows.

Two windows of length k overlapping in r positions span 2k-r positions.  Put
the pattern p at both, first window at start 1 and second at start k-r+1.
The shared positions are the last r of the first window and the first r of
the second, so both readings must agree (``overlap_consistent``).

Sort the shared positions by value.  The s-th smallest has rank ``u[s]`` in
the first window (from p's last r entries) and rank ``l[s]`` in the second
(from p's first r entries).  In any merged permutation its value is forced to
``u[s] + l[s] - s``: it sits above u[s]-1 values of the first window and
l[s]-1 of the second, s-1 of which are shared.  The non-shared values in each
gap between consecutive forced values split freely between the two windows,
giving one binomial factor per gap, including the gap above the largest
shared value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import DomainError, InvalidInputError
from .perm_core import (
    PatternCode,
    Permutation,
    all_patterns,
    as_pattern,
    prefix_pattern,
    suffix_pattern,
)


def _check_r(p: PatternCode, r: int) -> None:
    if not 1 <= r <= p.k - 1:
        raise InvalidInputError(f"overlap r={r} outside 1..{p.k - 1} for pattern of length {p.k}")


def overlap_consistent(p, r: int) -> bool:
    p = as_pattern(p)
    _check_r(p, r)
    return suffix_pattern(p, r) == prefix_pattern(p, r)


def _shared_ranks(p: PatternCode, r: int) -> tuple[list[int], list[int]]:
    u = sorted(p.ranks[p.k - r:])
    l = sorted(p.ranks[:r])
    return u, l


def shared_values(p, r: int) -> tuple[int, ...]:
    """Forced values of the shared positions, ordered from smallest to largest."""
    p = as_pattern(p)
    if not overlap_consistent(p, r):
        raise DomainError(f"pattern {p} cannot occur at two windows overlapping in {r}")
    u, l = _shared_ranks(p, r)
    return tuple(u[s] + l[s] - (s + 1) for s in range(r))


def joint_count(p, r: int) -> int:
    """Number of permutations of length 2k-r with ``p`` at starts 1 and k-r+1."""
    p = as_pattern(p)
    if not overlap_consistent(p, r):
        return 0
    k = p.k
    u, l = _shared_ranks(p, r)
    total = 1
    pu = pl = 0
    for us, ls in zip(u, l):
        total *= comb(us + ls - pu - pl - 2, us - pu - 1)
        pu, pl = us, ls
    return total * comb(2 * k - pu - pl, k - pu)


def joint_probability(p, r: int) -> Fraction:
    p = as_pattern(p)
    return Fraction(joint_count(p, r), factorial(2 * p.k - r))


def lemma21_bound(k: int, r: int) -> Fraction:
    """Pattern-uniform bound 2^(2k-2r) / (2k-r)! on the joint probability."""
    if not 1 <= r <= k - 1:
        raise InvalidInputError(f"overlap r={r} outside 1..{k - 1}")
    return Fraction(4 ** (k - r), factorial(2 * k - r))


def merge_witness(p, r: int) -> Permutation | None:
    """One merged permutation containing ``p`` at both windows, or None.

    Each gap's free values go to the first window first (smallest values),
    the remainder to the second window.
    """
    p = as_pattern(p)
    if not overlap_consistent(p, r):
        return None
    k = p.k
    u, l = _shared_ranks(p, r)
    forced = shared_values(p, r)
    first = {}   # rank in first window -> value
    second = {}
    for s in range(r):
        first[u[s]] = second[l[s]] = forced[s]
    bounds = [(0, 0, 0)] + [(u[s], l[s], forced[s]) for s in range(r)] + [(k + 1, k + 1, 2 * k - r + 1)]
    for (u0, l0, v0), (u1, l1, _) in zip(bounds, bounds[1:]):
        value = v0 + 1
        for rank in range(u0 + 1, u1):
            first[rank] = value
            value += 1
        for rank in range(l0 + 1, l1):
            second[rank] = value
            value += 1
    left = [first[x] for x in p.ranks]
    right = [second[x] for x in p.ranks[r:]]
    return Permutation(tuple(left + right))


@dataclass(frozen=True)
class OverlapAnalysis:
    pattern: PatternCode
    r: int
    consistent: bool
    u: tuple[int, ...]
    l: tuple[int, ...]
    shared_merged_values: tuple[int, ...]
    joint_count: int
    joint_probability: Fraction
    bound: Fraction
    witness: Permutation | None


def analyze_overlap(p, r: int) -> OverlapAnalysis:
    p = as_pattern(p)
    consistent = overlap_consistent(p, r)
    u, l = _shared_ranks(p, r)
    return OverlapAnalysis(
        pattern=p,
        r=r,
        consistent=consistent,
        u=tuple(u),
        l=tuple(l),
        shared_merged_values=shared_values(p, r) if consistent else (),
        joint_count=joint_count(p, r),
        joint_probability=joint_probability(p, r),
        bound=lemma21_bound(p.k, r),
        witness=merge_witness(p, r),
    )


@lru_cache(maxsize=None)
def _overlap_sum(k: int, r: int) -> int:
    return sum(joint_count(p, r) for p in all_patterns(k))


def pair_iso_probability(k: int, d: int, n: int) -> Fraction:
    """P(windows at starts j and j+d are order isomorphic) in a uniform permutation of length n."""
    if not (1 <= k <= n and 1 <= d <= n - k):
        raise InvalidInputError(f"invalid geometry k={k}, d={d}, n={n}")
    if d >= k:
        return Fraction(1, factorial(k))
    r = k - d
    return Fraction(_overlap_sum(k, r), factorial(2 * k - r))


def expected_Zk(n: int, k: int) -> Fraction:
    """Expected number of unordered pairs of isomorphic windows of length k."""
    if not 1 <= k <= n:
        raise InvalidInputError(f"k={k} outside 1..{n}")
    m = n - k + 1
    return sum((Fraction(m - d) * pair_iso_probability(k, d, n) for d in range(1, m)), Fraction(0))

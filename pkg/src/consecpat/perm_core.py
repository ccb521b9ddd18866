"""Permutations, canonical pattern codes and seeded random generation.

A pattern of length k is stored as its rank sequence: every value replaced by
its rank (1 = smallest) within the sequence.  ``pattern_of((9, 8, 3, 7, 6, 2))``
is ``652431``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import InvalidInputError

# Largest k whose Lehmer rank fits a signed 64-bit integer (20! < 2**63 < 21!).
COMPACT_MAX_K = 20

_MASK64 = (1 << 64) - 1


def _check_bijection(values: Sequence[int]) -> None:
    n = len(values)
    if n < 1:
        raise InvalidInputError("permutation must have length >= 1")
    if sorted(values) != list(range(1, n + 1)):
        raise InvalidInputError(f"not a permutation of 1..{n}: {tuple(values)}")


def _format(values: Sequence[int]) -> str:
    if len(values) <= 9:
        return "".join(str(v) for v in values)
    return ",".join(str(v) for v in values)


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        _check_bijection(self.values)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __str__(self) -> str:
        return _format(self.values)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(parse_sequence(text))

    def reverse(self) -> "Permutation":
        return Permutation(self.values[::-1])

    def complement(self) -> "Permutation":
        n = self.n
        return Permutation(tuple(n + 1 - v for v in self.values))


@dataclass(frozen=True)
class PatternCode:
    """Canonical representative of an order-isomorphism class of length ``k``."""

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranks", tuple(int(v) for v in self.ranks))
        _check_bijection(self.ranks)

    @property
    def k(self) -> int:
        return len(self.ranks)

    def __len__(self) -> int:
        return len(self.ranks)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ranks)

    def __getitem__(self, i):
        return self.ranks[i]

    def __str__(self) -> str:
        return _format(self.ranks)

    @classmethod
    def parse(cls, text: str) -> "PatternCode":
        return cls(parse_sequence(text))


PatternLike = Union[PatternCode, Sequence[int], str]


def parse_sequence(text: str) -> tuple[int, ...]:
    """Parse "652431", "6 5 2 4 3 1" or "6,5,2,4,3,1".

    Contiguous digits without separators are read one digit per entry.
    """
    text = text.strip()
    if not text:
        raise InvalidInputError("empty sequence")
    if re.fullmatch(r"\d+", text):
        return tuple(int(c) for c in text)
    parts = [p for p in re.split(r"[\s,]+", text) if p]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidInputError(f"malformed sequence: {text!r}") from None


def as_pattern(p: PatternLike) -> PatternCode:
    if isinstance(p, PatternCode):
        return p
    if isinstance(p, str):
        return PatternCode.parse(p)
    return PatternCode(tuple(p))


def as_permutation(perm) -> Permutation:
    if isinstance(perm, Permutation):
        return perm
    if isinstance(perm, str):
        return Permutation.parse(perm)
    return Permutation(tuple(perm))


def pattern_of(values: Sequence[int]) -> PatternCode:
    """Rank sequence of ``values`` (distinct numbers), smallest value -> 1."""
    values = list(values)
    if not values:
        raise InvalidInputError("pattern_of needs at least one value")
    if len(set(values)) != len(values):
        raise InvalidInputError(f"duplicate values in {values}")
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0] * len(values)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return PatternCode(tuple(ranks))


def window_pattern(perm, start: int, k: int) -> PatternCode:
    """Pattern shown by ``perm`` at positions start..start+k-1 (1-based)."""
    perm = as_permutation(perm)
    n = perm.n
    if not (1 <= k <= n and 1 <= start <= n - k + 1):
        raise InvalidInputError(f"window start={start}, k={k} outside permutation of length {n}")
    return pattern_of(perm.values[start - 1:start - 1 + k])


def prefix_pattern(p: PatternLike, r: int) -> PatternCode:
    p = as_pattern(p)
    if not 1 <= r <= p.k:
        raise InvalidInputError(f"r={r} out of range 1..{p.k}")
    return pattern_of(p.ranks[:r])


def suffix_pattern(p: PatternLike, r: int) -> PatternCode:
    p = as_pattern(p)
    if not 1 <= r <= p.k:
        raise InvalidInputError(f"r={r} out of range 1..{p.k}")
    return pattern_of(p.ranks[p.k - r:])


def encode_compact(p: PatternLike) -> int:
    """Lehmer (lexicographic) rank of a pattern in 0..k!-1."""
    p = as_pattern(p)
    k = p.k
    if k > COMPACT_MAX_K:
        raise InvalidInputError(f"compact encoding supports k <= {COMPACT_MAX_K}, got {k}")
    code = 0
    r = p.ranks
    for i in range(k):
        smaller = sum(1 for j in range(i + 1, k) if r[j] < r[i])
        code = code * (k - i) + smaller
    return code


def decode_compact(code: int, k: int) -> PatternCode:
    if k < 1 or k > COMPACT_MAX_K:
        raise InvalidInputError(f"compact encoding supports 1 <= k <= {COMPACT_MAX_K}, got {k}")
    if not 0 <= code < math.factorial(k):
        raise InvalidInputError(f"code {code} outside 0..{k}!-1")
    digits = []
    for base in range(1, k + 1):
        code, d = divmod(code, base)
        digits.append(d)
    digits.reverse()
    pool = list(range(1, k + 1))
    return PatternCode(tuple(pool.pop(d) for d in digits))


def all_patterns(k: int) -> Iterator[PatternCode]:
    """Every pattern of length k, in lexicographic order."""
    from itertools import permutations

    for t in permutations(range(1, k + 1)):
        yield PatternCode(t)


@dataclass(frozen=True)
class RandomStream:
    """A reproducible source of randomness identified by ``(seed, stream)``.

    Backed by the counter-based Philox4x64 generator keyed with the two 64-bit
    words (seed, stream), so any replicate's stream can be built directly
    without advancing through the others.
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if self.stream < 0:
            raise InvalidInputError("stream index must be non-negative")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, self.stream & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def random_permutation(n: int, rng: RandomStream | np.random.Generator) -> Permutation:
    """Uniform permutation of 1..n.

    The shuffle is numpy's ``Generator.permutation`` (Fisher-Yates with
    unbiased bounded integers) applied to 1..n.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    gen = rng.generator() if isinstance(rng, RandomStream) else rng
    return Permutation(tuple((gen.permutation(n) + 1).tolist()))


def random_permutation_array(n: int, seed: int, streams: Iterable[int]) -> np.ndarray:
    """Stack of permutations, row i drawn from ``RandomStream(seed, streams[i])``."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    rows = [RandomStream(seed, s).generator().permutation(n) for s in streams]
    if not rows:
        return np.empty((0, n), dtype=np.int64)
    return np.stack(rows).astype(np.int64) + 1


def read_permutations(lines: Iterable[str]) -> list[Permutation]:
    """Parse a permutation file: one permutation per line, blank lines and '#' comments skipped."""
    out = []
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p for p in re.split(r"[\s,]+", line) if p]
        try:
            out.append(Permutation(tuple(int(p) for p in parts)))
        except (ValueError, InvalidInputError) as exc:
            raise InvalidInputError(f"line {lineno}: {exc}") from None
    return out

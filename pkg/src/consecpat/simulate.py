"""Seeded Monte Carlo estimates of E(X_n) and of pattern-occurrence laws.

Replicate i always draws its permutation from ``RandomStream(seed, i)``, so
results do not depend on batching or on how many workers ran.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .pattern_stats import level_counts, window_codes
from .perm_core import PatternCode, RandomStream, as_pattern, encode_compact, random_permutation_array
from .stein_chen import expected_occurrences

BATCH = 4096
BOOTSTRAP_RESAMPLES = 200
# stream index reserved for bootstrap resampling, never used by a replicate
BOOTSTRAP_STREAM = (1 << 64) - 1
Z95 = 1.96


@dataclass(frozen=True)
class McEstimate:
    n: int
    replicates: int
    seed: int
    kmin: int
    mean_x_k: tuple[float, ...]  # index k-kmin
    mean: float                  # mean of sum_{k >= kmin} x_k
    sd: float
    se: float
    half_width: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "mean_x_k", "sd", "se", "half_width"])
        for k, v in enumerate(self.mean_x_k, start=self.kmin):
            w.writerow([k, repr(v), "", "", ""])
        w.writerow(["total", repr(self.mean), repr(self.sd), repr(self.se), repr(self.half_width)])
        return buf.getvalue()


def _batches(R: int):
    for start in range(0, R, BATCH):
        yield start, min(R, start + BATCH)


def replicate_totals(n: int, R: int, seed: int, kmin: int = 1, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-replicate x_k (shape (R, n)) and x_total over k >= kmin (shape (R,))."""

    def run(bounds):
        lo, hi = bounds
        perms = random_permutation_array(n, seed, range(lo, hi))
        xs, _ = level_counts(perms)
        return xs

    chunks = list(_batches(R))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    xs = np.vstack(parts)
    return xs, xs[:, kmin - 1:].sum(axis=1)


def mc_expectation(n: int, R: int, seed: int, kmin: Optional[int] = None, workers: int = 1) -> McEstimate:
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if R < 2:
        raise InvalidInputError("need at least 2 replicates for a variance estimate")
    kmin = 1 if kmin is None else kmin
    if not 1 <= kmin <= n:
        raise InvalidInputError(f"kmin={kmin} outside 1..{n}")
    xs, totals = replicate_totals(n, R, seed, kmin, workers)
    sd = float(np.std(totals, ddof=1))
    se = sd / math.sqrt(R)
    return McEstimate(
        n=n,
        replicates=R,
        seed=seed,
        kmin=kmin,
        mean_x_k=tuple(float(v) for v in xs[:, kmin - 1:].mean(axis=0)),
        mean=float(totals.mean()),
        sd=sd,
        se=se,
        half_width=Z95 * se,
    )


def poisson_pmf(lam: float, size: int) -> np.ndarray:
    j = np.arange(size)
    return np.exp(-lam + j * math.log(lam) - np.array([math.lgamma(i + 1) for i in j]))


def tv_to_poisson(pmf: np.ndarray, lam: float) -> float:
    po = poisson_pmf(lam, len(pmf))
    return 0.5 * (float(np.abs(pmf - po).sum()) + max(0.0, 1.0 - float(po.sum())))


@dataclass(frozen=True)
class OccurrenceEstimate:
    n: int
    k: int
    pattern: PatternCode
    replicates: int
    seed: int
    lam: float
    pmf: tuple[float, ...]
    se_pmf: tuple[float, ...]
    tv: float
    tv_se: float


def mc_pattern_occurrence(n: int, k: int, p, R: int, seed: int, workers: int = 1) -> OccurrenceEstimate:
    """Empirical law of the occurrence count of ``p`` and its TV distance to Po(lam).

    The TV standard error comes from a parametric bootstrap: B multinomial
    resamples of size R from the empirical pmf.
    """
    p = as_pattern(p)
    if p.k != k or not 1 <= k <= n:
        raise InvalidInputError(f"pattern length {p.k}, k={k}, n={n} inconsistent")
    if R < 100:
        raise InvalidInputError("need at least 100 replicates")
    code = encode_compact(p)

    def run(bounds):
        lo, hi = bounds
        perms = random_permutation_array(n, seed, range(lo, hi))
        return np.bincount((window_codes(perms, k) == code).sum(axis=1), minlength=n - k + 2)

    chunks = list(_batches(R))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    counts = sum(parts)
    pmf = counts / R
    lam = float(expected_occurrences(n, k))
    tv = tv_to_poisson(pmf, lam)
    gen = RandomStream(seed, BOOTSTRAP_STREAM).generator()
    boot = gen.multinomial(R, pmf, size=BOOTSTRAP_RESAMPLES) / R
    tvs = [tv_to_poisson(b, lam) for b in boot]
    return OccurrenceEstimate(
        n=n,
        k=k,
        pattern=p,
        replicates=R,
        seed=seed,
        lam=lam,
        pmf=tuple(float(v) for v in pmf),
        se_pmf=tuple(float(v) for v in np.sqrt(pmf * (1 - pmf) / R)),
        tv=tv,
        tv_se=float(np.std(tvs, ddof=1)),
    )

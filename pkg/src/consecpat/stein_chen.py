"""Poisson-approximation bounds for pattern occurrence counts and E(X_n).

U counts the windows of a uniform permutation showing a fixed pattern of length
k.  Its indicators are dissociated: windows more than k-1 apart are
independent.  The Stein-Chen bound for such sums is

    d_TV(L(U), Po(lam)) <= (1 - e^-lam)/lam * (b1 + b2)

with b1 = sum over j and neighbours i (including i = j) of p_i p_j, and b2 =
sum over j and neighbours i != j of P(I_i I_j = 1).  Here p_j = 1/k! and
lam = (n-k+1)/k!.

The second half of the module assembles per-length lower bounds on E(X^k)
into a lower bound on E(X_n) and the closed-form relaxations leading to
(n^2/2)(1 - 17 ln n / n).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, InvalidInputError
from .overlap import joint_probability, lemma21_bound
from .perm_core import PatternCode, as_pattern

# absolute tolerance for float comparisons near zero
ATOL = 1e-12


def expected_occurrences(n: int, k: int) -> Fraction:
    """Poisson rate (n-k+1)/k!, the mean number of windows showing any fixed pattern."""
    if not 1 <= k <= n:
        raise InvalidInputError(f"k={k} outside 1..{n}")
    return Fraction(n - k + 1, math.factorial(k))


def log_expected_occurrences(n: int, k: int) -> float:
    if not 1 <= k <= n:
        raise InvalidInputError(f"k={k} outside 1..{n}")
    return math.log(n - k + 1) - math.lgamma(k + 1)


def _prefactor(lam: Fraction) -> float:
    x = float(lam)
    if x == 0.0:
        return 1.0
    return -math.expm1(-x) / x


@dataclass(frozen=True)
class SteinChenReport:
    n: int
    k: int
    mode: str  # "uniform" or "pattern"
    pattern: Optional[PatternCode]
    lam: Fraction
    log_lam: float
    prefactor: float
    term_p2: Fraction
    term_cross: Fraction
    term_joint: Fraction
    epsilon_sharp: float
    epsilon_relaxed: Fraction
    epsilon_closed: Fraction

    @property
    def bracket(self) -> Fraction:
        return self.term_p2 + self.term_cross + self.term_joint

    def to_rows(self) -> list[tuple[int, int, str, float]]:
        return [
            (self.n, self.k, name, float(getattr(self, name)))
            for name in ("lam", "prefactor", "term_p2", "term_cross", "term_joint",
                         "epsilon_sharp", "epsilon_relaxed", "epsilon_closed")
        ]


def tv_bound(n: int, k: int, pattern=None) -> SteinChenReport:
    """Stein-Chen bound on d_TV(L(U), Po(lam)).

    Without ``pattern`` the joint probabilities are replaced by the
    pattern-uniform bound 4^(k-r)/(2k-r)!; with a pattern the exact joint
    probability at each overlap r is used.  The neighbourhood of window j is
    every i != j with |i-j| <= k-1, clipped to the n-k+1 existing windows.
    ``epsilon_relaxed`` drops the prefactor, ``epsilon_closed`` additionally
    replaces the clipped neighbour count by 2k per window.
    """
    if not 1 <= k <= n:
        raise InvalidInputError(f"k={k} outside 1..{n}")
    p = None
    if pattern is not None:
        p = as_pattern(pattern)
        if p.k != k:
            raise InvalidInputError(f"pattern length {p.k} differs from k={k}")
    m = n - k + 1
    single = Fraction(1, math.factorial(k))
    lam = Fraction(m) * single
    term_p2 = m * single * single
    pairs_at = {d: 2 * (m - d) for d in range(1, min(k - 1, m - 1) + 1)}
    term_cross = sum(pairs_at.values()) * single * single
    term_joint = Fraction(0)
    for d, cnt in pairs_at.items():
        r = k - d
        joint = lemma21_bound(k, r) if p is None else joint_probability(p, r)
        term_joint += cnt * joint
    bracket = term_p2 + term_cross + term_joint
    pre = _prefactor(lam)
    closed = term_p2 + 2 * m * k * single * single + term_joint
    return SteinChenReport(
        n=n,
        k=k,
        mode="uniform" if p is None else "pattern",
        pattern=p,
        lam=lam,
        log_lam=log_expected_occurrences(n, k),
        prefactor=pre,
        term_p2=term_p2,
        term_cross=term_cross,
        term_joint=term_joint,
        epsilon_sharp=pre * float(bracket),
        epsilon_relaxed=bracket,
        epsilon_closed=closed,
    )


@dataclass(frozen=True)
class CorrelationSum:
    closed: Fraction        # 8n/(k-3)
    unsimplified: Fraction  # 2 k! n sum_r 4^(k-r)/(2k-r)!


def correlation_sum_bound(n: int, k: int) -> CorrelationSum:
    if k <= 3:
        raise DomainError(f"the geometric-series bound needs k >= 4, got k={k}")
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    s = sum((lemma21_bound(k, r) for r in range(1, k)), Fraction(0))
    return CorrelationSum(
        closed=Fraction(8 * n, k - 3),
        unsimplified=2 * math.factorial(k) * n * s,
    )


def _log_factorial_term(n: float, k) -> np.ndarray:
    """log of 4 n^2 (e/k)^k."""
    k = np.asarray(k, dtype=float)
    return math.log(4) + 2 * math.log(n) + k * (1 - np.log(k))


def exk_lower_bound(n: int, k: int) -> float:
    """(n-k+1) - 4 n^2 (e/k)^k - 8n/(k-3); may be negative."""
    if k <= 3:
        raise DomainError(f"needs k >= 4, got k={k}")
    if not k <= n:
        raise InvalidInputError(f"k={k} exceeds n={n}")
    return (n - k + 1) - math.exp(float(_log_factorial_term(n, k))) - 8 * n / (k - 3)


def b_n(n: float) -> float:
    """Cutoff 4 ln n / ln ln n; defined here for n >= 16 so that ln ln n > 1."""
    if n < 16:
        raise DomainError(f"b_n is used only for n >= 16, got {n}")
    ln = math.log(n)
    return 4 * ln / math.log(ln)


LINE_NAMES = (
    "sum_exk",            # sum over k >= ceil(b_n) of exk_lower_bound
    "sum_per_k",          # sum of (n-k+1) - 1/n - 8n/(k-3)
    "triangular_harmonic",  # sum_{m<=n-K} m - 1 - 8n sum 1/(k-3)
    "square_log",         # (n-b_n)^2/2 - 1 - 8n ln n
    "square_log_factored",  # (n^2/2)(1-b_n/n)^2 - 1 - 8n ln n
    "linearized",         # (n^2/2)(1 - 2b_n/n - 2/n^2 - 16 ln n/n)
)


@dataclass(frozen=True)
class BoundChain:
    n: int
    b_n: float
    kmin: int
    per_k_valid: bool          # 4 n^2 (e/k)^k <= 1/n for every k >= kmin
    lines: tuple[float, ...]   # ordered as LINE_NAMES
    theorem_rhs: float

    @property
    def chain_holds(self) -> bool:
        """Each line is >= its successor (within ATOL relative to scale)."""
        tol = ATOL * max(1.0, self.n * self.n)
        return all(a >= b - tol for a, b in zip(self.lines, self.lines[1:]))

    @property
    def final_step_holds(self) -> bool:
        """Whether the last relaxation reaches the theorem's right-hand side."""
        return self.lines[-1] >= self.theorem_rhs

    @property
    def assembled(self) -> float:
        """The summed lower bound before closed-form relaxation."""
        return self.lines[1]

    def first_failing_line(self) -> Optional[str]:
        """First line (in chain order) that falls below the theorem RHS."""
        for name, v in zip(LINE_NAMES, self.lines):
            if v < self.theorem_rhs:
                return name
        return None

    def to_rows(self) -> list[tuple[int, int, str, float]]:
        rows = [(self.n, self.kmin, name, v) for name, v in zip(LINE_NAMES, self.lines)]
        rows.append((self.n, self.kmin, "theorem_rhs", self.theorem_rhs))
        return rows


def theorem_rhs(n: int) -> float:
    return n * n / 2 * (1 - 17 * math.log(n) / n)


def ex_lower_bound(n: int) -> BoundChain:
    bn = b_n(n)
    kmin = math.ceil(bn)
    ln = math.log(n)
    ks = np.arange(kmin, n + 1, dtype=float)
    windows = n - ks + 1
    log_mid = _log_factorial_term(n, ks)
    harmonic = float(np.sum(1.0 / (ks - 3)))
    lines = (
        float(np.sum(windows - np.exp(log_mid) - 8 * n / (ks - 3))),
        float(np.sum(windows)) - (n - kmin + 1) / n - 8 * n * harmonic,
        (n - kmin) * (n - kmin + 1) / 2 - 1 - 8 * n * harmonic,
        (n - bn) ** 2 / 2 - 1 - 8 * n * ln,
        n * n / 2 * (1 - bn / n) ** 2 - 1 - 8 * n * ln,
        n * n / 2 * (1 - 2 * bn / n - 2 / n ** 2 - 16 * ln / n),
    )
    return BoundChain(
        n=n,
        b_n=bn,
        kmin=kmin,
        per_k_valid=bool(np.all(log_mid <= -ln)),
        lines=lines,
        theorem_rhs=theorem_rhs(n),
    )


def log_grid(lo: int, hi: int, points: int = 200) -> list[int]:
    if lo > hi:
        return []
    grid = np.unique(np.round(np.geomspace(lo, hi, points)).astype(np.int64))
    return [int(g) for g in grid]


@dataclass(frozen=True)
class Crossover:
    n_lo: int
    n_hi: int
    threshold: Optional[int]       # smallest n with the assembled bound >= RHS from there on
    failing_below: Optional[int]   # largest checked n below threshold where it fails
    first_failing_line: Optional[str]  # at ``failing_below``, or None
    final_step_threshold: Optional[int]  # same scan for the last closed-form line


def _scan(n_lo: int, n_hi: int, holds) -> tuple[Optional[int], Optional[int]]:
    grid = log_grid(n_lo, n_hi)
    if not grid:
        return None, None
    if not holds(grid[-1]):
        return None, grid[-1]
    i = len(grid) - 1
    while i > 0 and holds(grid[i - 1]):
        i -= 1
    if i == 0:
        return grid[0], None
    # refine between the failing grid point and the first holding one
    lo, hi = grid[i - 1], grid[i]
    n = hi
    while n - 1 > lo and holds(n - 1):
        n -= 1
    return n, n - 1


def theorem_crossover(n_lo: int, n_hi: int) -> Crossover:
    """Where the assembled bound on E(X_n) overtakes the theorem RHS on [n_lo, n_hi].

    Scans a logarithmic grid from the top down, then refines integer by
    integer below the lowest grid point of the holding run.
    """
    if n_lo < 16:
        raise DomainError("scan starts at n >= 16")
    def assembled_ok(n: int) -> bool:
        c = ex_lower_bound(n)
        return c.chain_holds and c.assembled >= c.theorem_rhs

    threshold, failing = _scan(n_lo, n_hi, assembled_ok)
    final_threshold, _ = _scan(n_lo, n_hi, lambda n: ex_lower_bound(n).final_step_holds)
    first_line = ex_lower_bound(failing).first_failing_line() if failing is not None else None
    return Crossover(n_lo, n_hi, threshold, failing, first_line, final_threshold)


def final_step_requirement(n: float) -> float:
    """Slack of the last relaxation: ln n - 2 b_n - 2/n, non-negative iff it holds."""
    return math.log(n) - 2 * b_n(n) - 2 / n


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "term", "value"])
    for row in rows:
        w.writerow([row[0], row[1], row[2], repr(float(row[3]))])
    return buf.getvalue()

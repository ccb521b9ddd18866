"""Slow, obviously-correct reference computations used only by the tests.

Nothing here imports from the package except the result types.
"""

from collections import Counter
from itertools import permutations
from math import comb


def ranks(values):
    s = sorted(values)
    return tuple(s.index(v) + 1 for v in values)


def windows(perm, k):
    return [ranks(perm[j:j + k]) for j in range(len(perm) - k + 1)]


def xyz(perm, k):
    ws = windows(perm, k)
    c = Counter(ws)
    return len(c), len(ws) - len(c), sum(comb(m, 2) for m in c.values())


def joint_bruteforce(p, r):
    p = tuple(p)
    k = len(p)
    return sum(
        1
        for q in permutations(range(1, 2 * k - r + 1))
        if ranks(q[:k]) == p and ranks(q[k - r:]) == p
    )


def all_perms(n):
    return list(permutations(range(1, n + 1)))

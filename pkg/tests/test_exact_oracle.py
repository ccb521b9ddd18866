from fractions import Fraction

import pytest

from consecpat import (
    enumerate_expectations,
    exact_tv_to_poisson,
    expected_Zk,
    expected_occurrences,
    joint_count,
    joint_window_bruteforce,
    u_distribution,
)
from consecpat.errors import InvalidInputError, ResourceLimitError
from consecpat.exact_oracle import DistributionTable, all_permutations
from consecpat.perm_core import all_patterns

import oracles


def test_small_expectations():
    assert enumerate_expectations(1).ex == 1
    assert enumerate_expectations(3).ex == Fraction(11, 3)
    e4 = enumerate_expectations(4)
    assert e4.ez_k[1] == Fraction(7, 6) == expected_Zk(4, 2)
    assert e4.ex == Fraction(35, 6)
    assert enumerate_expectations(5).ex == Fraction(87, 10)
    assert enumerate_expectations(6).ex == Fraction(2219, 180)


def test_expectation_caps():
    with pytest.raises(ResourceLimitError):
        enumerate_expectations(10)
    with pytest.raises(InvalidInputError):
        enumerate_expectations(0)


def test_threaded_matches_serial():
    assert enumerate_expectations(7, workers=4) == enumerate_expectations(7)


@pytest.mark.parametrize("n", range(1, 9))
def test_expectation_identities(n):
    e = enumerate_expectations(n)
    assert e.ex == sum(e.ex_k)
    for k in range(1, n + 1):
        assert e.ex_k[k - 1] + e.ey_k[k - 1] == n - k + 1
        assert e.ey_k[k - 1] <= e.ez_k[k - 1]


def test_all_permutations_lexicographic():
    arr = all_permutations(4)
    assert [tuple(r) for r in arr.tolist()] == oracles.all_perms(4)


def test_u_distribution_examples():
    t = u_distribution(3, 2, "12")
    assert t.pmf == (Fraction(1, 6), Fraction(4, 6), Fraction(1, 6))
    assert t.mean == 1
    for p in all_patterns(3):
        t = u_distribution(3, 3, p)
        assert t.pmf == (Fraction(5, 6), Fraction(1, 6))


def test_u_distribution_mean_is_lambda():
    for p in all_patterns(4):
        t = u_distribution(7, 4, p)
        assert t.mean == Fraction(4, 24) == expected_occurrences(7, 4)
        assert sum(t.pmf) == 1


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 8) for k in range(1, 5) if k <= n])
def test_eq3_identity(n, k):
    """E(X^k) equals the sum over patterns of P(U >= 1)."""
    e = enumerate_expectations(n)
    total = sum(1 - u_distribution(n, k, p).pmf[0] for p in all_patterns(k))
    assert total == e.ex_k[k - 1]


def test_tv_examples():
    t = u_distribution(3, 2, "12")
    assert exact_tv_to_poisson(t, 1) == pytest.approx(0.29878722549522, abs=1e-12)
    with pytest.raises(InvalidInputError):
        exact_tv_to_poisson(t, 0)


def test_tv_identical_is_zero():
    # a distribution that is Poisson except for a tail beyond the support is not
    # representable exactly, so compare against a point mass at 0 with tiny lambda
    t = DistributionTable((Fraction(1),))
    assert exact_tv_to_poisson(t, Fraction(1, 10 ** 30)) == pytest.approx(0, abs=1e-12)


def test_tv_metric_bounds():
    for p in all_patterns(3):
        t = u_distribution(6, 3, p)
        tv = exact_tv_to_poisson(t, expected_occurrences(6, 3))
        assert 0 <= tv <= 1


def test_tv_hand_computation():
    # pmf (1/6, 2/3, 1/6) against Po(1):
    # masses e^-1, e^-1, e^-1/2 and tail 1 - 5/(2e)
    import math
    e = math.exp(-1)
    expect = 0.5 * (abs(1 / 6 - e) + abs(2 / 3 - e) + abs(1 / 6 - e / 2) + (1 - 2.5 * e))
    assert exact_tv_to_poisson(u_distribution(3, 2, "12"), 1) == pytest.approx(expect, abs=1e-12)


def test_joint_bruteforce_examples():
    assert joint_window_bruteforce("652431", 3) == 3
    assert joint_window_bruteforce("21534", 2) == 0
    assert joint_window_bruteforce("12", 1) == 1
    with pytest.raises(ResourceLimitError):
        joint_window_bruteforce("1234567", 1)


@pytest.mark.parametrize("k", range(2, 5))
def test_joint_bruteforce_vs_python(k):
    for p in all_patterns(k):
        for r in range(1, k):
            assert joint_window_bruteforce(p, r) == oracles.joint_bruteforce(p.ranks, r) == joint_count(p, r)

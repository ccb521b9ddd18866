import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from consecpat import Permutation, distinct_counts, multiplicity_profile, occurrences
from consecpat.errors import InvalidInputError
from consecpat.pattern_stats import level_counts, window_codes
from consecpat.perm_core import RandomStream, encode_compact, random_permutation_array

import oracles


def test_profile_monotone_pairs():
    prof = multiplicity_profile("1234", 2)
    assert {str(p): m for p, m in prof.counts.items()} == {"12": 3}
    assert (prof.x, prof.y, prof.z) == (1, 2, 3)


def test_profile_small():
    prof = multiplicity_profile("132", 2)
    assert {str(p): m for p, m in prof.counts.items()} == {"12": 1, "21": 1}
    assert (prof.x, prof.y, prof.z) == (2, 0, 0)
    prof = multiplicity_profile("123", 3)
    assert (prof.x, prof.y, prof.z) == (1, 0, 0)
    with pytest.raises(InvalidInputError):
        multiplicity_profile("123", 4)


def test_distinct_counts_examples():
    ident = Permutation(tuple(range(1, 13)))
    ws = distinct_counts(ident)
    assert all(lv.x == 1 for lv in ws.levels)
    assert ws.x_total == 12
    ws = distinct_counts("132")
    assert [lv.x for lv in ws.levels] == [1, 2, 1]
    assert ws.x_total == 4
    assert distinct_counts("1").x_total == 1
    with pytest.raises(InvalidInputError):
        distinct_counts("132", 2, 1)
    with pytest.raises(InvalidInputError):
        distinct_counts("132", 1, 4)


def test_distinct_counts_subrange():
    ws = distinct_counts("983762541", 3, 6)
    full = distinct_counts("983762541")
    assert [lv.x for lv in ws.levels] == [full.level(k).x for k in range(3, 7)]


def test_occurrences():
    assert occurrences("983762541", "652431") == (2, [1, 4])
    assert occurrences(tuple(range(1, 9)), "123") == (6, list(range(1, 7)))
    assert occurrences("132", "21") == (1, [2])
    with pytest.raises(InvalidInputError):
        occurrences("12", "123")


@pytest.mark.parametrize("n", range(1, 7))
def test_kernel_matches_reference_exhaustive(n):
    perms = oracles.all_perms(n)
    xs, zs = level_counts(np.array(perms))
    for row, perm in enumerate(perms):
        for k in range(1, n + 1):
            x, _, z = oracles.xyz(perm, k)
            assert xs[row, k - 1] == x
            assert zs[row, k - 1] == z


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 41)))
def test_kernel_matches_profile(values):
    perm = Permutation(tuple(values))
    ws = distinct_counts(perm)
    for lv in ws.levels:
        prof = multiplicity_profile(perm, lv.k)
        assert (lv.x, lv.y, lv.z) == (prof.x, prof.y, prof.z)
        assert sum(prof.counts.values()) == lv.windows


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 25)), st.data())
def test_occurrences_match_profile(values, data):
    perm = Permutation(tuple(values))
    k = data.draw(st.integers(1, 6))
    prof = multiplicity_profile(perm, k)
    for p, m in prof.counts.items():
        assert occurrences(perm, p)[0] == m


@settings(max_examples=80, deadline=None)
@given(st.permutations(range(1, 30)))
def test_window_invariants(values):
    perm = Permutation(tuple(values))
    n = perm.n
    for lv in distinct_counts(perm).levels:
        k = lv.k
        assert 1 <= lv.x <= min(n - k + 1, __import__("math").factorial(k))
        assert lv.x + lv.y == n - k + 1
        assert lv.y <= lv.z
    ws = distinct_counts(perm)
    assert ws.level(1).x == 1 and ws.level(n).x == 1


@settings(max_examples=50, deadline=None)
@given(st.permutations(range(1, 20)))
def test_reversal_complement_symmetry(values):
    perm = Permutation(tuple(values))
    base = [lv.x for lv in distinct_counts(perm).levels]
    assert [lv.x for lv in distinct_counts(perm.reverse()).levels] == base
    assert [lv.x for lv in distinct_counts(perm.complement()).levels] == base


def test_randomized_n100_invariants():
    arr = random_permutation_array(100, 7, range(500))
    xs, zs = level_counts(arr)
    ks = np.arange(1, 101)
    ys = (100 - ks + 1) - xs
    assert np.all(ys <= zs)
    assert np.all(xs >= 1)


def test_window_codes_match_encode():
    arr = random_permutation_array(12, 3, range(20))
    for k in (1, 3, 5):
        codes = window_codes(arr, k)
        for row in range(arr.shape[0]):
            vals = arr[row].tolist()
            expect = [encode_compact(oracles.ranks(vals[j:j + k])) for j in range(12 - k + 1)]
            assert codes[row].tolist() == expect


def test_csv():
    text = distinct_counts("132").to_csv()
    assert text.splitlines() == ["k,windows,x_k,y_k,z_k", "1,3,1,2,3", "2,2,2,0,0", "3,1,1,0,0"]

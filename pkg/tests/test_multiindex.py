import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthops.multiindex import (composition_count, compositions, coordinate_tuples, multinomial,
                                  restricted_weak_compositions, weak_compositions)


@given(st.integers(0, 9), st.integers(1, 5))
def test_composition_counts_and_sums(i, j):
    ks = compositions(i, j)
    assert len(ks) == composition_count(i, j)
    assert len(ks) == (math.comb(i - 1, j - 1) if i >= j else 0)
    assert all(len(k) == j and sum(k) == i and min(k) >= 1 for k in ks)
    assert ks == sorted(set(ks))


@given(st.integers(0, 8), st.integers(1, 4))
def test_weak_composition_count(i, j):
    ks = weak_compositions(i, j)
    assert len(ks) == math.comb(i + j - 1, j - 1)
    assert all(sum(k) == i and min(k) >= 0 for k in ks)


@given(st.integers(0, 7), st.integers(1, 4), st.data())
def test_restricted_slots(i, j, data):
    zs = data.draw(st.sets(st.integers(1, j), max_size=j))
    ks = restricted_weak_compositions(i, j, zs)
    for k in ks:
        assert sum(k) == i
        for slot in range(1, j + 1):
            assert (k[slot - 1] == 0) == (slot in zs)
    brute = [k for k in weak_compositions(i, j) if all((k[s - 1] == 0) == (s in zs) for s in range(1, j + 1))]
    assert sorted(ks) == sorted(brute)


@given(st.integers(0, 12), st.data())
def test_multinomial_matches_factorials(n, data):
    j = data.draw(st.integers(1, 4))
    k = data.draw(st.sampled_from(weak_compositions(n, j)))
    expect = math.factorial(n)
    for kt in k:
        expect //= math.factorial(kt)
    assert multinomial(n, k) == expect
    assert isinstance(multinomial(n, k), int)


def test_multinomial_sum_is_power():
    # sum over weak compositions of n! / prod k_t! is j^n
    for n in range(7):
        for j in range(1, 4):
            assert sum(multinomial(n, k) for k in weak_compositions(n, j)) == j**n


def test_coordinate_tuples():
    ts = coordinate_tuples(3, 2)
    assert len(ts) == 8 and ts[0] == (1, 1, 1) and ts[-1] == (2, 2, 2)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        compositions(3, 0)
    with pytest.raises(ValueError):
        multinomial(-1, (0,))
    with pytest.raises(ValueError):
        restricted_weak_compositions(2, 2, {3})

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkselect.errors import RankRangeError
from minkselect.sorted_matrix import (
    ImplicitSortedMatrix,
    MatrixCollection,
    count_greater,
    max_entry_below,
    min_entry_at_least,
    rank_in_collection,
    select_kth_in_collection,
)


def brute_entries(M):
    return sorted(r + c for r in M.rows.tolist() for c in M.cols.tolist())


def make(rows, cols):
    return ImplicitSortedMatrix(np.sort(np.asarray(rows)), np.sort(np.asarray(cols)))


def test_worked_examples():
    M = make([1, 3], [2, 5])  # entries 3, 5, 6, 8
    assert count_greater(M, 5) == 2
    assert M.count_greater(float("-inf")) == 4
    assert M.count_greater(float("inf")) == 0
    coll = MatrixCollection([M])
    assert select_kth_in_collection(coll, 2) == 6
    assert select_kth_in_collection(coll, 1) == 8
    # strict-greater-plus-one convention: only 8 outranks 6
    assert rank_in_collection(coll, 6) == 2
    assert rank_in_collection(coll, 5) == 3
    assert rank_in_collection(coll, 100) == 1
    assert min_entry_at_least(M, 4)[0] == 5
    assert min_entry_at_least(M, 3)[0] == 3
    assert max_entry_below(M, 100)[0] == 8
    assert max_entry_below(M, 3) is None
    # two copies of the same 1x1 matrix: multiplicity respected
    coll = MatrixCollection([make([7], [0]), make([7], [0])])
    assert select_kth_in_collection(coll, 2) == 7


def test_random_matrices_match_brute_force(rng):
    for trial in range(1000):
        n, m = int(rng.integers(1, 21)), int(rng.integers(1, 21))
        M = make(rng.integers(-12, 13, size=n), rng.integers(-12, 13, size=m))
        entries = brute_entries(M)
        t = int(rng.integers(-30, 31))
        assert M.count_greater(t) == sum(1 for v in entries if v > t)
        assert M.count_at_least(t) == sum(1 for v in entries if v >= t)
        ge = [v for v in entries if v >= t]
        hit = M.min_entry_at_least(t)
        assert (hit[0] if hit else None) == (min(ge) if ge else None)
        lt = [v for v in entries if v < t]
        hit = M.max_entry_below(t)
        assert (hit[0] if hit else None) == (max(lt) if lt else None)
        coll = MatrixCollection([M])
        k = int(rng.integers(1, len(entries) + 1))
        assert coll.select_kth_largest(k) == entries[-k]
        assert coll.rank_of(t) == sum(1 for v in entries if v > t) + 1


def test_collection_multi_matrix(rng):
    for trial in range(300):
        mats = [
            make(rng.integers(-9, 10, size=int(rng.integers(1, 9))),
                 rng.integers(-9, 10, size=int(rng.integers(1, 9))))
            for _ in range(int(rng.integers(1, 6)))
        ]
        coll = MatrixCollection(mats)
        entries = sorted(v for M in mats for v in brute_entries(M))
        for k in range(1, len(entries) + 1):
            assert coll.select_kth_largest(k) == entries[-k]
        t = int(rng.integers(-25, 26))
        assert coll.count_greater(t) == sum(1 for v in entries if v > t)
        assert coll.count_at_least(t) == sum(1 for v in entries if v >= t)


def test_selection_sandwich(rng):
    # rank(select(k)) <= k and #entries >= select(k) is >= k
    for trial in range(200):
        mats = [
            make(rng.integers(-5, 6, size=int(rng.integers(1, 7))),
                 rng.integers(-5, 6, size=int(rng.integers(1, 7))))
            for _ in range(int(rng.integers(1, 4)))
        ]
        coll = MatrixCollection(mats)
        total = coll.total_entries
        for k in range(1, total + 1):
            v = coll.select_kth_largest(k)
            assert coll.rank_of(v) <= k
            assert coll.count_at_least(v) >= k


def test_staircase_walk_budget(rng):
    for trial in range(300):
        n, m = int(rng.integers(1, 21)), int(rng.integers(1, 21))
        M = make(rng.integers(-9, 10, size=n), rng.integers(-9, 10, size=m))
        M.count_greater(int(rng.integers(-20, 21)))
        assert M.last_walk_cells <= n + m
        M.min_entry_at_least(int(rng.integers(-20, 21)))
        assert M.last_walk_cells <= n + m
        M.max_entry_below(int(rng.integers(-20, 21)))
        assert M.last_walk_cells <= n + m


def test_select_k_out_of_range():
    coll = MatrixCollection([make([1], [1])])
    with pytest.raises(RankRangeError):
        coll.select_kth_largest(0)
    with pytest.raises(RankRangeError):
        coll.select_kth_largest(2)


def test_float_mode_selection(rng):
    M = make(rng.normal(size=9), rng.normal(size=7))
    coll = MatrixCollection([M])
    entries = brute_entries(M)
    for k in (1, 3, len(entries)):
        assert coll.select_kth_largest(k) == entries[-k]


@settings(max_examples=200, deadline=None)
@given(
    rows=st.lists(st.integers(-50, 50), min_size=1, max_size=12),
    cols=st.lists(st.integers(-50, 50), min_size=1, max_size=12),
    t=st.integers(-120, 120),
)
def test_counts_property(rows, cols, t):
    M = make(rows, cols)
    entries = brute_entries(M)
    assert M.count_greater(t) == sum(1 for v in entries if v > t)
    assert M.count_at_least(t) == sum(1 for v in entries if v >= t)

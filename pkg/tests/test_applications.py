from fractions import Fraction

import numpy as np
import pytest

from minkselect.applications import Sequence, WeightedSequence, density_find, lcss_select, sum_select
from minkselect.errors import InfeasibleError, InputError, RankRangeError
from minkselect.geometry import Objective
from minkselect.oracle import oracle_enumerate

F_Y = Objective.linear(0, 1)


def all_segments(S, l, u):
    n = len(S)
    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if l <= j - i + 1 <= u:
                out.append((sum(S[i - 1:j]), i, j))
    return out


def test_lcss_worked_example():
    res = lcss_select([3, -1, 2], 1, 2, 2)
    assert res.statistic == 2
    assert (res.i, res.j) == (1, 2)
    # sums sorted descending: 3, 2, 2, 1, -1
    assert [lcss_select([3, -1, 2], 1, 2, k).statistic for k in range(1, 6)] == [3, 2, 2, 1, -1]
    with pytest.raises(RankRangeError):
        lcss_select([3, -1, 2], 1, 2, 6)


def test_sum_select_examples():
    assert sum_select([1, -2, 3], 1).statistic == 3
    assert sum_select([-5, -2, -9], 1).statistic == -2  # all negative: best single element
    assert sum_select([4], 1).statistic == 4


def test_lcss_oracle(rng):
    for trial in range(400):
        n = int(rng.integers(2, 26))
        S = [int(v) for v in rng.integers(-9, 10, size=n)]
        l = int(rng.integers(1, n))
        u = int(rng.integers(l + 1, n + 1))
        segs = all_segments(S, l, u)
        vals = sorted((s for s, _, _ in segs), reverse=True)
        for k in range(1, len(vals) + 1):
            res = lcss_select(S, l, u, k)
            assert res.statistic == vals[k - 1]
            assert l <= res.j - res.i + 1 <= u
            assert sum(S[res.i - 1:res.j]) == res.statistic
            assert (res.i, res.j) == min((i, j) for s, i, j in segs if s == res.statistic)


def test_sum_select_oracle(rng):
    for trial in range(120):
        n = int(rng.integers(1, 18))
        S = [int(v) for v in rng.integers(-9, 10, size=n)]
        segs = all_segments(S, 1, n)
        vals = sorted((s for s, _, _ in segs), reverse=True)
        for k in range(1, len(vals) + 1):
            assert sum_select(S, k).statistic == vals[k - 1]


def test_reduction_soundness(rng):
    # the multiset of feasible-segment sums equals the feasible y-multiset of
    # the constructed pairwise-sum instance
    from minkselect.geometry import HalfPlaneConstraint

    for trial in range(200):
        n = int(rng.integers(2, 33))
        S = [int(v) for v in rng.integers(-9, 10, size=n)]
        l = int(rng.integers(1, n))
        u = int(rng.integers(l + 1, n + 1))
        pre = [0]
        for v in S:
            pre.append(pre[-1] + v)
        P = [(i, pre[i]) for i in range(n + 1)]
        Q = [(-i, -pre[i]) for i in range(n + 1)]
        enum = oracle_enumerate(P, Q, [HalfPlaneConstraint(1, 0, l), HalfPlaneConstraint(-1, 0, -u)])
        want = sorted(s for s, _, _ in all_segments(S, l, u))
        assert sorted(enum.values(F_Y)) == want


def test_density_worked_example():
    res = density_find([(2, 1), (-1, 1), (3, 1)], 1, 2, 1)
    assert res.statistic == 1 and res.distance == 0
    assert (res.i, res.j) == (2, 3)
    res = density_find([(6, 2)], 1, 3, 0)  # single pair within width bounds
    assert res.statistic == 3


def test_density_oracle(rng):
    for trial in range(300):
        n = int(rng.integers(1, 15))
        WS = [(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(n)]
        l = int(rng.integers(1, 8))
        u = l + int(rng.integers(1, 8))
        delta = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
        best = None
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                w = sum(w for _, w in WS[i - 1:j])
                s = sum(s for s, _ in WS[i - 1:j])
                if l <= w <= u:
                    d = abs(Fraction(s, w) - delta)
                    if best is None or d < best:
                        best = d
        try:
            res = density_find(WS, l, u, delta)
            assert best is not None and res.distance == best
            w = sum(w for _, w in WS[res.i - 1:res.j])
            s = sum(s for s, _ in WS[res.i - 1:res.j])
            assert l <= w <= u and Fraction(s, w) == res.statistic
        except InfeasibleError:
            assert best is None


def test_input_validation():
    with pytest.raises(InputError):
        WeightedSequence([(1, 0)])
    with pytest.raises(InputError):
        Sequence([])
    with pytest.raises(InputError):
        lcss_select([1, 2, 3], 2, 2, 1)  # needs l < u
    with pytest.raises(InputError):
        density_find([(1, 1)], 0, 2, 0)  # needs l > 0

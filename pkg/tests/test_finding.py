import math
from fractions import Fraction

import numpy as np
import pytest

from minkselect.errors import InfeasibleError, NoFeasibleValueError
from minkselect.finding import _hull_sum_candidates, _strict_hull, find_linear, find_max_leq, find_ratio
from minkselect.geometry import HalfPlaneConstraint, Objective
from minkselect.oracle import oracle_enumerate, oracle_find

from conftest import constraint_set, random_linear_objective, random_points

F_Y = Objective.linear(0, 1)


def test_find_linear_worked_examples():
    P = [(1, 1), (2, 3)]
    Q = [(0, 2), (3, -1)]
    res = find_linear(P, Q, [], F_Y, Fraction(8, 5))
    assert res.value == 2 and res.distance == Fraction(2, 5)
    res = find_linear(P, Q, [], F_Y, 5)  # delta equal to a feasible value
    assert res.distance == 0 and res.value == 5


def test_find_linear_oracle(rng):
    for trial in range(700):
        n, m = int(rng.integers(1, 13)), int(rng.integers(1, 13))
        P, Q = random_points(rng, n), random_points(rng, m)
        cons = constraint_set(rng, P, Q, int(rng.integers(0, 4)))
        f = random_linear_objective(rng)
        delta = Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 5)))
        enum = oracle_enumerate(P, Q, cons)
        try:
            res = find_linear(P, Q, cons, f, delta)
        except InfeasibleError:
            assert len(enum) == 0
            continue
        dist, value, p, q = oracle_find(enum, f, delta)
        assert res.distance == dist
        assert res.witness == (p, q)  # lexicographic tie-break matches the scan


def test_find_ratio_worked_examples():
    # single feasible point (2, 3): value 3/2
    res = find_ratio([(2, 3)], [(0, 0)], [], 1, 1, 0)
    assert res.value == Fraction(3, 2)
    # feasible sums {(1,2),(2,2)}, delta 1: point (2,2) is exact
    res = find_ratio([(1, 2), (2, 2)], [(0, 0)], [], 1, 1, 1)
    assert res.value == 1 and res.distance == 0


def test_find_ratio_oracle(rng):
    for trial in range(700):
        n, m = int(rng.integers(1, 12)), int(rng.integers(1, 12))
        P, Q = random_points(rng, n), random_points(rng, m)
        if n > 1 and rng.random() < 0.3:
            P[1] = [-Q[0][0], int(rng.integers(-5, 6))]  # force an x = 0 sum
        cons = constraint_set(rng, P, Q, int(rng.integers(0, 4)))
        a = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        b = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        delta = Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 4)))
        fr = Objective.ratio(a, b)
        enum = oracle_enumerate(P, Q, cons)
        try:
            res = find_ratio(P, Q, cons, a, b, delta)
        except InfeasibleError:
            assert len(enum) == 0
            continue
        dist = oracle_find(enum, fr, delta)[0]
        assert res.distance == dist
        if res.distance != math.inf:
            p, q = res.witness
            sx = P[p][0] + Q[q][0]
            sy = P[p][1] + Q[q][1]
            assert all(L.satisfied(sx, sy) for L in cons)


def test_find_ratio_all_infinite():
    # every feasible sum lies on x = 0: reported explicitly as infinite
    P = [(1, 2), (1, -3)]
    Q = [(-1, 0)]
    res = find_ratio(P, Q, [], 1, 1, 0)
    assert res.value == math.inf and res.distance == math.inf
    assert res.witness is not None


def test_lemma_halfplane_convexity(rng):
    # |a x + b y| along a segment within one half of ax+by=0 never drops
    # below both endpoint magnitudes
    N = 100_000
    a = rng.normal(size=N)
    b = rng.normal(size=N)
    v1 = rng.normal(scale=5, size=(N, 2))
    v2 = rng.normal(scale=5, size=(N, 2))
    f1 = a * v1[:, 0] + b * v1[:, 1]
    f2 = a * v2[:, 0] + b * v2[:, 1]
    # reflect v2 into v1's side
    flip = np.sign(f1) * np.sign(f2) < 0
    v2[flip] = -v2[flip]
    f2 = a * v2[:, 0] + b * v2[:, 1]
    g = rng.random(size=N)[:, None]
    vg = g * v1 + (1 - g) * v2
    fg = np.abs(a * vg[:, 0] + b * vg[:, 1])
    lo = np.minimum(np.abs(f1), np.abs(f2))
    assert int((fg < lo - 1e-9).sum()) == 0


def test_lemma_quadrant_quasiconcavity(rng):
    # |y/x| along a segment within one closed quadrant never drops below
    # both endpoint values
    N = 100_000
    v1 = np.abs(rng.normal(scale=5, size=(N, 2))) + 1e-3
    v2 = np.abs(rng.normal(scale=5, size=(N, 2))) + 1e-3
    sx = np.where(rng.random(N) < 0.5, 1, -1)
    sy = np.where(rng.random(N) < 0.5, 1, -1)
    v1 *= np.stack([sx, sy], axis=1)
    v2 *= np.stack([sx, sy], axis=1)
    g = rng.random(size=N)[:, None]
    vg = g * v1 + (1 - g) * v2
    f = lambda v: np.abs(v[:, 1] / v[:, 0])
    lo = np.minimum(f(v1), f(v2))
    assert int((f(vg) < lo - 1e-9).sum()) == 0


def test_hull_vertex_sufficiency(rng):
    # min |y/x| over the block hull candidates equals the brute-force block
    # minimum, per quadrant
    for trial in range(300):
        nb, nd = int(rng.integers(1, 10)), int(rng.integers(1, 10))
        B = rng.integers(0, 12, size=(nb, 2))
        D = rng.integers(0, 12, size=(nd, 2))
        hb = _strict_hull(B[:, 0].tolist(), B[:, 1].tolist(), list(range(nb)))
        hd = _strict_hull(D[:, 0].tolist(), D[:, 1].tolist(), list(range(nd)))
        cands = _hull_sum_candidates(hb, hd)

        def val(x, y):
            return math.inf if x == 0 else abs(Fraction(int(y), int(x)))

        best_hull = min(val(x, y) for x, y, _, _ in cands)
        best_all = min(val(bx + dx, by + dy) for bx, by in B.tolist() for dx, dy in D.tolist())
        assert best_hull == best_all


def test_find_max_leq(rng):
    for trial in range(300):
        P, Q = random_points(rng, 9), random_points(rng, 9)
        cons = constraint_set(rng, P, Q, 2)
        t = int(rng.integers(-20, 21))
        enum = oracle_enumerate(P, Q, cons)
        vals = [v for v in enum.values(F_Y) if v <= t]
        try:
            res = find_max_leq(P, Q, cons, t)
            assert vals and res.value == max(vals)
            p, q = res.witness
            assert P[p][1] + Q[q][1] == res.value
        except (InfeasibleError, NoFeasibleValueError):
            assert not vals
    # t above everything: the global max
    P, Q = [(0, 1)], [(0, 2)]
    assert find_max_leq(P, Q, [], float("inf")).value == 3
    with pytest.raises((InfeasibleError, NoFeasibleValueError)):
        find_max_leq(P, Q, [], -100)

import numpy as np
import pytest

from minkselect.errors import InfeasibleError, RankRangeError
from minkselect.geometry import HalfPlaneConstraint, Objective, ParallelConstraintsSignal
from minkselect.oracle import oracle_enumerate, oracle_rank, oracle_select
from minkselect.selection import (
    OneConstraintEngine,
    ParallelStripEngine,
    PolygonSlabEngine,
    TwoConstraintEngine,
    ranking_1,
    ranking_2,
    selection_1,
    selection_2,
    selection_lambda,
    selection_parallel,
)

from conftest import constraint_set, parallel_pair, random_linear_objective, random_points

F_Y = Objective.linear(0, 1)
INST_P = [(1, 1), (2, 3)]
INST_Q = [(0, 2), (3, -1)]
INST_L = HalfPlaneConstraint(1, 0, 3)


def check_witness(P, Q, cons, f, res):
    p, q = res.witness
    sx, sy = P[p][0] + Q[q][0], P[p][1] + Q[q][1]
    assert all(L.satisfied(sx, sy) for L in cons)
    assert f.p * sx + f.q * sy == res.value


def test_selection_1_worked_example():
    assert selection_1(INST_P, INST_Q, INST_L, F_Y, 1).value == 2
    assert selection_1(INST_P, INST_Q, INST_L, F_Y, 2).value == 0
    with pytest.raises(RankRangeError):
        selection_1(INST_P, INST_Q, INST_L, F_Y, 3)
    # unconstrained: k = 1 is the max pairwise objective value
    assert selection_1(INST_P, INST_Q, None, F_Y, 1).value == 5
    assert selection_1(INST_P, INST_Q, None, F_Y, 4).value == 0  # minimum


def test_ranking_1_worked_example():
    assert ranking_1(INST_P, INST_Q, INST_L, F_Y, 1).rank == 2
    assert ranking_1(INST_P, INST_Q, INST_L, F_Y, 99).rank == 1


def test_selection_1_oracle(rng):
    for trial in range(400):
        n, m = int(rng.integers(1, 17)), int(rng.integers(1, 17))
        P, Q = random_points(rng, n), random_points(rng, m)
        L = constraint_set(rng, P, Q, 1)[0]
        f = random_linear_objective(rng)
        enum = oracle_enumerate(P, Q, [L])
        eng = OneConstraintEngine(P, Q, L, f)
        assert eng.total_feasible == len(enum)
        if len(enum) == 0:
            with pytest.raises(InfeasibleError):
                eng.select(1)
            continue
        vals = sorted(enum.values(f), reverse=True)
        for k in range(1, len(vals) + 1):
            res = eng.select(k)
            assert res.value == vals[k - 1]
            check_witness(P, Q, [L], f, res)
        t = int(rng.integers(-40, 41))
        assert eng.rank(t) == oracle_rank(enum, f, t)
        # duality
        for k in (1, len(vals)):
            v = eng.select(k).value
            assert eng.rank(v) <= k
            assert eng.count_above(v, inclusive=True) >= k


def test_ranking_2_degenerate_second_constraint(rng):
    # L2 with c = -inf-ish: equals ranking_1
    for trial in range(120):
        P, Q = random_points(rng, 8), random_points(rng, 8)
        L1 = constraint_set(rng, P, Q, 1)[0]
        L2 = HalfPlaneConstraint(0, 1, -10**6)
        f = random_linear_objective(rng)
        t = int(rng.integers(-30, 31))
        assert ranking_2(P, Q, L1, L2, f, t).rank == ranking_1(P, Q, L1, f, t).rank


def test_ranking_2_breakdown_inclusion_exclusion(rng):
    for trial in range(150):
        P, Q = random_points(rng, 8), random_points(rng, 8)
        L1, L2 = constraint_set(rng, P, Q, 2)
        f = random_linear_objective(rng)
        try:
            r = ranking_2(P, Q, L1, L2, f, int(rng.integers(-25, 26)))
        except ParallelConstraintsSignal:
            continue
        r_t, r1, r2, r3 = r.breakdown
        assert r.rank == r_t - r1 - r2 + r3 + 1


def test_selection_2_oracle_all_cases(rng):
    seen = set()
    for trial in range(700):
        n, m = int(rng.integers(1, 13)), int(rng.integers(1, 13))
        P, Q = random_points(rng, n), random_points(rng, m)
        L1, L2 = constraint_set(rng, P, Q, 2)
        f = random_linear_objective(rng)
        try:
            eng = TwoConstraintEngine(P, Q, L1, L2, f)
        except ParallelConstraintsSignal:
            continue
        seen.add(eng.canon.case)
        enum = oracle_enumerate(P, Q, [L1, L2])
        assert eng.total_feasible == len(enum)
        if not len(enum):
            continue
        vals = sorted(enum.values(f), reverse=True)
        for k in range(1, len(vals) + 1):
            res = eng.select(k)
            assert res.value == vals[k - 1]
            check_witness(P, Q, [L1, L2], f, res)
        t = vals[int(rng.integers(len(vals)))]
        assert eng.rank(t).rank == oracle_rank(enum, f, t)
        assert eng.rank(float("-inf")).rank == len(vals) + 1
    assert seen == {1, 2, 3, 4}


def test_selection_2_k1_is_max_feasible(rng):
    for trial in range(100):
        P, Q = random_points(rng, 9), random_points(rng, 9)
        L1, L2 = constraint_set(rng, P, Q, 2)
        try:
            eng = TwoConstraintEngine(P, Q, L1, L2, F_Y)
        except ParallelConstraintsSignal:
            continue
        enum = oracle_enumerate(P, Q, [L1, L2])
        if len(enum):
            assert eng.select(1).value == max(enum.values(F_Y))


def test_selection_parallel_oracle(rng):
    for trial in range(400):
        n, m = int(rng.integers(1, 13)), int(rng.integers(1, 13))
        P, Q = random_points(rng, n), random_points(rng, m)
        L1, L2 = parallel_pair(rng, P, Q)
        f = random_linear_objective(rng)
        enum = oracle_enumerate(P, Q, [L1, L2])
        try:
            eng = ParallelStripEngine(P, Q, L1, L2, f)
        except InfeasibleError:
            assert len(enum) == 0
            continue
        assert eng.total_feasible == len(enum)
        if not len(enum):
            continue
        vals = sorted(enum.values(f), reverse=True)
        for k in range(1, len(vals) + 1):
            res = eng.select(k)
            assert res.value == vals[k - 1]
            check_witness(P, Q, [L1, L2], f, res)


def test_selection_parallel_whole_plane(rng):
    P, Q = random_points(rng, 6), random_points(rng, 6)
    L1 = HalfPlaneConstraint(1, 0, -10**6)
    L2 = HalfPlaneConstraint(-1, 0, -10**6)
    enum = oracle_enumerate(P, Q, [])
    vals = sorted(enum.values(F_Y), reverse=True)
    assert selection_parallel(P, Q, L1, L2, F_Y, 1).value == vals[0]
    assert selection_parallel(P, Q, L1, L2, F_Y, len(vals)).value == vals[-1]


def test_selection_lambda_oracle(rng):
    for trial in range(250):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        P, Q = random_points(rng, n), random_points(rng, m)
        lam = int(rng.integers(3, 6))
        cons = constraint_set(rng, P, Q, lam)
        f = random_linear_objective(rng)
        enum = oracle_enumerate(P, Q, cons)
        try:
            eng = PolygonSlabEngine(P, Q, cons, f)
        except InfeasibleError:
            assert len(enum) == 0
            continue
        assert eng.total_feasible == len(enum)
        if not len(enum):
            continue
        vals = sorted(enum.values(f), reverse=True)
        for k in range(1, len(vals) + 1):
            res = eng.select(k)
            assert res.value == vals[k - 1]
            check_witness(P, Q, cons, f, res)


def test_selection_lambda_slab_accounting(rng):
    # total of per-slab and per-level counts equals the oracle feasible count
    for trial in range(150):
        P, Q = random_points(rng, 7), random_points(rng, 7)
        cons = constraint_set(rng, P, Q, int(rng.integers(3, 6)))
        try:
            eng = PolygonSlabEngine(P, Q, cons, F_Y)
        except InfeasibleError:
            continue
        assert sum(eng.strip_counts) + sum(eng.level_counts) == len(oracle_enumerate(P, Q, cons))


def test_selection_lambda_triangle_contains_everything(rng):
    P, Q = random_points(rng, 6), random_points(rng, 6)
    big = 10**6
    cons = [
        HalfPlaneConstraint(0, 1, -big),
        HalfPlaneConstraint(1, -1, -3 * big),
        HalfPlaneConstraint(-1, -1, -3 * big),
    ]
    enum = oracle_enumerate(P, Q, [])
    vals = sorted(enum.values(F_Y), reverse=True)
    for k in (1, len(vals) // 2 + 1, len(vals)):
        assert selection_lambda(P, Q, cons, k).value == vals[k - 1]


def test_engines_cross_check_on_shared_instance(rng):
    # degenerate second constraint: selection_2 equals selection_1
    for trial in range(120):
        P, Q = random_points(rng, 8), random_points(rng, 8)
        L1 = constraint_set(rng, P, Q, 1)[0]
        L2 = HalfPlaneConstraint(0, 1, -10**6)
        f = random_linear_objective(rng)
        eng1 = OneConstraintEngine(P, Q, L1, f)
        if eng1.total_feasible == 0:
            continue
        eng2 = TwoConstraintEngine(P, Q, L1, L2, f)
        k = int(rng.integers(1, eng1.total_feasible + 1))
        assert eng2.select(k).value == eng1.select(k).value


def test_float_mode_selection(rng):
    for trial in range(60):
        P = rng.normal(scale=4, size=(7, 2)).tolist()
        Q = rng.normal(scale=4, size=(7, 2)).tolist()
        L1 = HalfPlaneConstraint(1.0, 0.5, -2.0)
        L2 = HalfPlaneConstraint(-0.5, 1.0, -3.0)
        enum = oracle_enumerate(P, Q, [L1, L2])
        if not len(enum):
            continue
        vals = sorted(enum.values(F_Y), reverse=True)
        eng = TwoConstraintEngine(P, Q, L1, L2, F_Y)
        assert eng.total_feasible == len(vals)
        k = int(rng.integers(1, len(vals) + 1))
        assert eng.select(k).value == pytest.approx(vals[k - 1], abs=1e-9)

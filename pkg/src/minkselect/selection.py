"""Selection and ranking engines.

Every engine canonicalises its instance to "objective = y" and then counts
or selects over implicit sorted matrices:

* one constraint: the divide-and-conquer matrix construction, then k-th
  largest over the collection;
* two general constraints: inclusion-exclusion ranking (unconstrained count
  minus the two single-violation counts plus a double-violation correction)
  driving an invariant-preserving binary search over the rank space of the
  unconstrained y-sum matrix;
* two parallel constraints: the strip bucket partition, one-constraint
  matrices per bucket;
* more than two constraints: slab decomposition of the feasible polygon,
  two-constraint counting per slab, and a final two-constraint selection.

The double-violation correction depends on which side of the constraint
corner the query level t lies; the four coefficient sign cases each have an
exact branch pair (verified against exhaustive enumeration in the tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import NEG_INF, POS_INF, effective_bound
from .decomposition import construct_matrices, parallel_blocks, product_blocks
from .errors import InfeasibleError, RankRangeError
from .geometry import (
    OBJECTIVE_Y,
    HalfPlaneConstraint,
    Objective,
    ParallelConstraintsSignal,
    SwapConstraintsSignal,
    bounding_box_for,
    canonicalize_objective,
    feasible_polygon,
    transform_one,
    transform_parallel,
    transform_two,
)
from .sorted_matrix import ImplicitSortedMatrix, MatrixCollection

__all__ = [
    "SelectionResult",
    "RankResult",
    "OneConstraintEngine",
    "TwoConstraintEngine",
    "ParallelStripEngine",
    "PolygonSlabEngine",
    "make_pair_engine",
    "selection_1",
    "ranking_1",
    "ranking_2",
    "selection_2",
    "selection_parallel",
    "selection_lambda",
]


@dataclass
class SelectionResult:
    value: object
    witness: Optional[tuple] = None  # (p index, q index)


@dataclass
class RankResult:
    rank: int
    breakdown: Optional[tuple] = None  # (R_t, R1, R2, R3)


def _default_rng(rng):
    return np.random.default_rng(0) if rng is None else rng


def _y_matrix(py, qy) -> MatrixCollection:
    coll = MatrixCollection()
    p_by_y = np.argsort(py, kind="stable")
    q_by_y = np.argsort(qy, kind="stable")
    coll.append(ImplicitSortedMatrix(py[p_by_y], qy[q_by_y], p_by_y, q_by_y))
    return coll


def _witness_from(coll: MatrixCollection, value):
    hit = coll.locate(value)
    if hit is None:
        return None
    M, i, j = hit
    return int(M.row_ids[i]), int(M.col_ids[j])


class OneConstraintEngine:
    """Constraint L (or none), linear objective f; counts and selection."""

    def __init__(self, P, Q, L: Optional[HalfPlaneConstraint], f: Objective, eps: float = 0.0, mode: str | None = None):
        if L is None:
            canon = transform_one(P, Q, HalfPlaneConstraint(1, 0, 0), f, mode=mode)
            self.coll = construct_matrices(canon.px, canon.py, canon.qx, canon.qy, None)
        else:
            canon = transform_one(P, Q, L, f, mode=mode)
            c_eff = effective_bound(canon.c1, canon.strict1, eps)
            self.coll = construct_matrices(canon.px, canon.py, canon.qx, canon.qy, c_eff, canon.strict1)
        self.total_feasible = self.coll.total_entries

    def count_above(self, t, inclusive: bool = False) -> int:
        return self.coll.count_at_least(t) if inclusive else self.coll.count_greater(t)

    def rank(self, t) -> int:
        return self.coll.count_greater(t) + 1

    def select(self, k: int, rng=None, want_witness: bool = True) -> SelectionResult:
        if self.total_feasible == 0:
            raise InfeasibleError("no feasible pair")
        if not (1 <= k <= self.total_feasible):
            raise RankRangeError(f"k={k} outside [1, {self.total_feasible}]")
        value = self.coll.select_kth_largest(k, rng=_default_rng(rng))
        return SelectionResult(value, _witness_from(self.coll, value) if want_witness else None)


class TwoConstraintEngine:
    """Two non-parallel constraints, linear objective."""

    def __init__(self, P, Q, L1, L2, f: Objective, eps: float = 0.0, mode: str | None = None):
        try:
            canon = transform_two(P, Q, L1, L2, f, mode=mode, eps=eps)
        except SwapConstraintsSignal:
            canon = transform_two(P, Q, L2, L1, f, mode=mode, eps=eps)
            canon.swapped = True
        self.canon = canon
        n1 = math.hypot(float(canon.a2), float(canon.b2))
        self.c1 = effective_bound(canon.c1, canon.strict1, eps)
        self.c2 = effective_bound(canon.c2, canon.strict2, eps * n1)
        self.strict1 = canon.strict1
        self.strict2 = canon.strict2
        px, py, qx, qy = canon.px, canon.py, canon.qx, canon.qy
        self.px, self.py, self.qx, self.qy = px, py, qx, qy
        self.n_total = len(px) * len(qx)

        self.Y = _y_matrix(py, qy)
        # violation collections: objective stays y, constraint is the
        # complement of L1 / L2 in already-shifted form
        self.V1 = construct_matrices(-px, py, -qx, qy, -self.c1, not self.strict1)
        v_p = canon.a2 * px + canon.b2 * py
        v_q = canon.a2 * qx + canon.b2 * qy
        self.V2 = construct_matrices(-v_p, py, -v_q, qy, -self.c2, not self.strict2)
        # double violations, counted with objective -x over the L2-violating set
        W_coll = construct_matrices(-v_p, -px, -v_q, -qx, -self.c2, not self.strict2)
        if self.strict1:
            self.W = W_coll.count_at_least(-self.c1)
        else:
            self.W = W_coll.count_greater(-self.c1)
        self.v1_total = self.V1.total_entries
        self.v2_total = self.V2.total_entries
        self.total_feasible = self.n_total - self.v1_total - self.v2_total + self.W
        self.b_count = self.v1_total - self.W  # violate L1 only
        self.d_count = self.v2_total - self.W  # violate L2 only

        if isinstance(self.c1, float) or isinstance(self.c2, float):
            self.corner_y = (self.c2 - canon.a2 * self.c1) / canon.b2
        else:
            self.corner_y = (Fraction(self.c2) - Fraction(int(canon.a2)) * Fraction(self.c1)) / Fraction(int(canon.b2))
        self._blocks = None

    # -- counting ----------------------------------------------------------

    def count_above(self, t, inclusive: bool = False) -> int:
        """#feasible pairs with y > t (or >= t)."""
        if t == NEG_INF:
            return self.total_feasible
        if t == POS_INF:
            return 0
        if inclusive:
            N = self.Y.count_at_least(t)
            V1 = self.V1.count_at_least(t)
            V2 = self.V2.count_at_least(t)
        else:
            N = self.Y.count_greater(t)
            V1 = self.V1.count_greater(t)
            V2 = self.V2.count_greater(t)
        yc = self.corner_y
        above_corner = (t > yc) if inclusive else (t >= yc)
        case = self.canon.case
        if case == 1:
            return 0 if above_corner else N - V1 - V2 + self.W
        if case == 4:
            return (N - V2) if above_corner else (N - V1 - self.d_count)
        if case == 2:
            return (N - V1) if above_corner else (N - V2 - self.b_count)
        # case 3
        return (N - V1 - V2) if above_corner else self.total_feasible

    def rank(self, t) -> RankResult:
        N = self.Y.count_greater(t)
        V1 = self.V1.count_greater(t)
        V2 = self.V2.count_greater(t)
        C = self.count_above(t, inclusive=False)
        r3 = C - (N - V1 - V2)
        return RankResult(C + 1, breakdown=(N, V1, V2, r3))

    # -- selection ---------------------------------------------------------

    def _blocks_matrices(self):
        if self._blocks is None:
            cons = [
                HalfPlaneConstraint(1, 0, self.c1, self.strict1),
                HalfPlaneConstraint(self.canon.a2, self.canon.b2, self.c2, self.strict2),
            ]
            dec = product_blocks(self.px, self.py, self.qx, self.qy, cons)
            mats = []
            for blk in dec.blocks:
                r = blk.p_ids[np.argsort(self.py[blk.p_ids], kind="stable")]
                c = blk.q_ids[np.argsort(self.qy[blk.q_ids], kind="stable")]
                mats.append(ImplicitSortedMatrix(self.py[r], self.qy[c], r, c))
            self._blocks = mats
        return self._blocks

    def max_feasible_leq(self, t):
        """(value, witness) of the largest feasible y <= t, or None."""
        best = None
        for M in self._blocks_matrices():
            hit = M.max_entry_below(t, inclusive=True)
            if hit is None:
                continue
            v, i, j = hit
            if best is None or v > best[0]:
                best = (v, (int(M.row_ids[i]), int(M.col_ids[j])))
        return best

    # block decompositions get expensive past this many pairs; above it the
    # R == k case falls through to the rank search, which converges to the
    # same value
    _FINDING_PAIR_LIMIT = 1 << 22

    def select(self, k: int, rng=None, want_witness: bool = True, use_finding_termination: bool = True) -> SelectionResult:
        if self.total_feasible == 0:
            raise InfeasibleError("no feasible pair")
        if not (1 <= k <= self.total_feasible):
            raise RankRangeError(f"k={k} outside [1, {self.total_feasible}]")
        rng = _default_rng(rng)
        find_ok = use_finding_termination and self.n_total <= self._FINDING_PAIR_LIMIT
        lo, hi = 1, self.n_total
        py, qy = self.py, self.qy
        int_mode = py.dtype.kind in "iu"
        v_hi = py.max() + qy.max()
        v_lo = (int(py.min() + qy.min()) - 1) if int_mode else NEG_INF
        cg_vhi = 0
        while lo < hi:
            mid = (lo + hi + 1) // 2
            t, cg_t = self.Y.select_kth_largest(mid, rng=rng, window=(v_lo, v_hi, cg_vhi), with_rank=True)
            R = self.count_above(t) + 1
            if R == k and find_ok:
                hit = self.max_feasible_leq(t)
                return SelectionResult(hit[0], hit[1] if want_witness else None)
            if R > k:
                hi = mid - 1
                v_lo = max(v_lo, (int(t) - 1) if int_mode else float(np.nextafter(t, NEG_INF)))
            else:
                lo = mid
                v_hi = t
                cg_vhi = cg_t
        value = self.Y.select_kth_largest(lo, rng=rng, window=(v_lo, v_hi, cg_vhi))
        if not want_witness:
            return SelectionResult(value, None)
        hit = self.max_feasible_leq(value)
        return SelectionResult(value, hit[1] if hit is not None else None)


class ParallelStripEngine:
    """Two parallel constraints: strip partition plus bucket matrices."""

    def __init__(self, P, Q, L1, L2, f: Objective, eps: float = 0.0, mode: str | None = None):
        form = transform_parallel(P, Q, L1, L2, f, mode=mode)
        px, py, qx, qy = form.px, form.py, form.qx, form.qy
        self.coll = MatrixCollection()
        if form.kind == "single":
            c_eff = effective_bound(form.lo, form.lo_strict, eps)
            self.coll = construct_matrices(px, py, qx, qy, c_eff, form.lo_strict)
        else:
            lo = effective_bound(form.lo, form.lo_strict, eps)
            # upper bound x <= hi handled as -x >= -hi after shifting
            hi = -effective_bound(-form.hi, form.hi_strict, eps)
            if lo > hi or (lo == hi and (form.lo_strict or form.hi_strict)):
                raise InfeasibleError("empty parallel strip")
            if lo == hi:
                self._equality_strip(px, py, qx, qy, lo)
            else:
                for _, p_ids, q_main, q_prev in parallel_blocks(px, qx, lo, hi):
                    if len(q_main):
                        sub = construct_matrices(
                            px[p_ids], py[p_ids], qx[q_main], qy[q_main], lo, form.lo_strict
                        )
                        self._merge(sub, p_ids, q_main)
                    if len(q_prev):
                        sub = construct_matrices(
                            -px[p_ids], py[p_ids], -qx[q_prev], qy[q_prev], -hi, form.hi_strict
                        )
                        self._merge(sub, p_ids, q_prev)
        self.total_feasible = self.coll.total_entries

    def _merge(self, sub: MatrixCollection, p_ids, q_ids):
        for M in sub.matrices:
            self.coll.append(
                ImplicitSortedMatrix(M.rows, M.cols, p_ids[M.row_ids], q_ids[M.col_ids])
            )

    def _equality_strip(self, px, py, qx, qy, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                return
            value = int(value)
        groups: dict = {}
        for j, v in enumerate(np.asarray(qx).tolist()):
            groups.setdefault(v, []).append(j)
        p_order = np.argsort(py, kind="stable")
        by_val: dict = {}
        for i in p_order.tolist():
            by_val.setdefault(px[i].item() if hasattr(px[i], "item") else px[i], []).append(i)
        for pv, p_list in by_val.items():
            q_list = groups.get(value - pv)
            if not q_list:
                continue
            q_arr = np.asarray(q_list, dtype=np.int64)
            q_arr = q_arr[np.argsort(qy[q_arr], kind="stable")]
            p_arr = np.asarray(p_list, dtype=np.int64)
            self.coll.append(ImplicitSortedMatrix(py[p_arr], qy[q_arr], p_arr, q_arr))

    def count_above(self, t, inclusive: bool = False) -> int:
        return self.coll.count_at_least(t) if inclusive else self.coll.count_greater(t)

    def rank(self, t) -> int:
        return self.coll.count_greater(t) + 1

    def select(self, k: int, rng=None, want_witness: bool = True) -> SelectionResult:
        if self.total_feasible == 0:
            raise InfeasibleError("no feasible pair in strip")
        if not (1 <= k <= self.total_feasible):
            raise RankRangeError(f"k={k} outside [1, {self.total_feasible}]")
        value = self.coll.select_kth_largest(k, rng=_default_rng(rng))
        return SelectionResult(value, _witness_from(self.coll, value) if want_witness else None)


def make_pair_engine(P, Q, L1, L2, f: Objective, eps: float = 0.0, mode: str | None = None):
    """Two-constraint engine, routing parallel pairs to the strip engine."""
    try:
        return TwoConstraintEngine(P, Q, L1, L2, f, eps=eps, mode=mode)
    except ParallelConstraintsSignal:
        return ParallelStripEngine(P, Q, L1, L2, f, eps=eps, mode=mode)


class PolygonSlabEngine:
    """More than two constraints: slab decomposition of the feasible polygon.

    Open strips between consecutive vertex levels are counted by their
    two-edge pair engines (inside an open strip the polygon boundary consists
    of exactly those two edges, so pair feasibility and full feasibility
    coincide, strictness included).  Points exactly at a vertex level can sit
    on boundaries of other constraints, so each level is counted separately
    by a direct scan of the pairs summing to that level.
    """

    def __init__(self, P, Q, constraints, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None):
        px, py, qx, qy, cons, scale = canonicalize_objective(P, Q, constraints, f, mode=mode)
        self.value_scale = scale
        pts_p = np.column_stack([px, py])
        pts_q = np.column_stack([qx, qy])
        bbox = bounding_box_for(px, py, qx, qy)
        self.poly = feasible_polygon(cons, bbox, eps=eps, mode=mode)
        self.levels = self.poly.levels
        self._px, self._py, self._qx, self._qy = px, py, qx, qy
        self._cons_eff = [
            (L, effective_bound(L.c, L.strict, eps * math.hypot(float(L.a), float(L.b))))
            for L in cons
        ]
        self._q_by_y = np.argsort(qy, kind="stable")
        self._qy_sorted = qy[self._q_by_y]
        self.engines = [
            make_pair_engine(pts_p, pts_q, left, right, OBJECTIVE_Y, eps=eps, mode=mode)
            for (left, right) in self.poly.slab_pairs
        ]
        self.level_counts = []
        self.level_pairs = []  # candidate (p, q) id arrays per level
        for lev in self.levels:
            cnt, pairs = self._level_scan(lev)
            self.level_counts.append(cnt)
            self.level_pairs.append(pairs)
        self.strip_counts = [
            eng.count_above(self.levels[j + 1]) - eng.count_above(self.levels[j], inclusive=True)
            for j, eng in enumerate(self.engines)
        ]
        self.total_feasible = sum(self.level_counts) + sum(self.strip_counts)

    def _level_scan(self, level):
        """Exact feasible pairs whose y-sum equals the vertex level."""
        if isinstance(level, Fraction):
            if level.denominator != 1:
                return 0, None
            level = int(level)
        lo = np.searchsorted(self._qy_sorted, level - self._py, side="left")
        hi = np.searchsorted(self._qy_sorted, level - self._py, side="right")
        counts = hi - lo
        if counts.sum() == 0:
            return 0, None
        p_ids = np.repeat(np.arange(len(self._py)), counts)
        offs = np.concatenate([np.arange(a, b) for a, b in zip(lo, hi) if b > a])
        q_ids = self._q_by_y[offs]
        sx = self._px[p_ids] + self._qx[q_ids]
        sy = self._py[p_ids] + self._qy[q_ids]
        keep = np.ones(len(p_ids), dtype=bool)
        for L, c_eff in self._cons_eff:
            v = L.a * sx + L.b * sy
            keep &= (v > c_eff) if L.strict else (v >= c_eff)
        return int(keep.sum()), (p_ids[keep], q_ids[keep])

    def _segments(self):
        """Top-down accounting: level 0, strip 0, level 1, strip 1, ..."""
        for j in range(len(self.levels)):
            yield ("level", j, self.level_counts[j])
            if j < len(self.engines):
                yield ("strip", j, self.strip_counts[j])

    def count_above(self, t, inclusive: bool = False) -> int:
        total = 0
        for kind, j, cnt in self._segments():
            if kind == "level":
                lev = self.levels[j]
                if (lev >= t) if inclusive else (lev > t):
                    total += cnt
            else:
                eng = self.engines[j]
                above = eng.count_above(self.levels[j], inclusive=True)
                full = above + cnt
                raw = eng.count_above(t, inclusive=inclusive)
                total += min(max(raw, above), full) - above
        return total

    def rank(self, t) -> int:
        return self.count_above(t) + 1

    def select(self, k: int, rng=None, want_witness: bool = True) -> SelectionResult:
        if self.total_feasible == 0:
            raise InfeasibleError("no feasible pair in polygon")
        if not (1 <= k <= self.total_feasible):
            raise RankRangeError(f"k={k} outside [1, {self.total_feasible}]")
        acc = 0
        for kind, j, cnt in self._segments():
            if acc + cnt < k:
                acc += cnt
                continue
            if kind == "level":
                p_ids, q_ids = self.level_pairs[j]
                value = self._py[p_ids[0]] + self._qy[q_ids[0]]
                return SelectionResult(
                    value, (int(p_ids[0]), int(q_ids[0])) if want_witness else None
                )
            eng = self.engines[j]
            rank = eng.count_above(self.levels[j], inclusive=True) + (k - acc)
            return eng.select(rank, rng=rng, want_witness=want_witness)
        raise RankRangeError("rank bookkeeping exhausted the slabs")


# ---------------------------------------------------------------------------
# spec-level operations


def selection_1(P, Q, L, f: Objective, k: int, eps: float = 0.0, mode: str | None = None, rng=None) -> SelectionResult:
    return OneConstraintEngine(P, Q, L, f, eps=eps, mode=mode).select(k, rng=rng)


def ranking_1(P, Q, L, f: Objective, t, eps: float = 0.0, mode: str | None = None) -> RankResult:
    return RankResult(OneConstraintEngine(P, Q, L, f, eps=eps, mode=mode).rank(t))


def ranking_2(P, Q, L1, L2, f: Objective, t, eps: float = 0.0, mode: str | None = None) -> RankResult:
    return TwoConstraintEngine(P, Q, L1, L2, f, eps=eps, mode=mode).rank(t)


def selection_2(P, Q, L1, L2, f: Objective, k: int, eps: float = 0.0, mode: str | None = None, rng=None) -> SelectionResult:
    return TwoConstraintEngine(P, Q, L1, L2, f, eps=eps, mode=mode).select(k, rng=rng)


def selection_parallel(P, Q, L1, L2, f: Objective, k: int, eps: float = 0.0, mode: str | None = None, rng=None) -> SelectionResult:
    return ParallelStripEngine(P, Q, L1, L2, f, eps=eps, mode=mode).select(k, rng=rng)


def selection_lambda(P, Q, constraints, k: int, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None, rng=None) -> SelectionResult:
    return PolygonSlabEngine(P, Q, constraints, f, eps=eps, mode=mode).select(k, rng=rng)

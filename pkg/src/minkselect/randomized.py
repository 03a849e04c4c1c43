"""Randomized machinery: order-statistic trees, feasible range queries,
uniform sampling of feasible points, and contraction-based selection.

Range reporting decomposes the feasible region clipped to an objective band
into at most five "weak" subqueries, each a strip between two parallel lines
intersected with the band.  A weak subquery is answered by sliding an
order-statistic tree over Q (sorted by the strip functional): both window
endpoints move monotonically, so every point enters and leaves the tree at
most once.  Piece boundaries are chosen so the pieces are disjoint and cover
the region exactly; every reported pair additionally passes an O(1) exact
feasibility filter, which also lets the sampler draw from the raw piece
windows and reject the few filtered points without biasing uniformity.

Contraction selection repeatedly samples feasible points in the current
value range, narrows the range around the target rank, verifies the two
acceptance conditions by counting, and finishes by enumerating the final
range.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._numeric import NEG_INF, POS_INF, rationalize_threshold
from .errors import InfeasibleError, InternalInvariantError, RankRangeError
from .geometry import OBJECTIVE_Y, Objective, ParallelConstraintsSignal, transform_parallel
from .selection import SelectionResult, TwoConstraintEngine

__all__ = [
    "OrderStatisticTree",
    "RangeQueryEngine",
    "range_report_weak",
    "range_report",
    "range_count",
    "sample_feasible",
    "selection_2_randomized",
]

DEBUG_VALIDATE = False

CONTRACTION_T = 3  # sampling window constant
ENUM_FACTOR = 16  # enumerate once the range holds at most ENUM_FACTOR * n points
MAX_CONTRACTION_ATTEMPTS = 48


# ---------------------------------------------------------------------------
# order-statistic tree (treap on (key, uid), subtree sizes)


class _Node:
    __slots__ = ("key", "uid", "prio", "size", "left", "right")

    def __init__(self, key, uid, prio):
        self.key = key
        self.uid = uid
        self.prio = prio
        self.size = 1
        self.left = None
        self.right = None


def _size(node):
    return node.size if node is not None else 0


def _pull(node):
    node.size = 1 + _size(node.left) + _size(node.right)
    return node


class OrderStatisticTree:
    """Balanced search tree with subtree sizes; duplicate keys allowed
    (disambiguated by uid).  Rank, select, insert and delete in O(log n).
    """

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)
        self._root = None

    def __len__(self):
        return _size(self._root)

    # treap split/merge on composite (key, uid)
    def _split_lt(self, node, key, uid):
        """(nodes < (key, uid), nodes >= (key, uid))"""
        if node is None:
            return None, None
        if (node.key, node.uid) < (key, uid):
            a, b = self._split_lt(node.right, key, uid)
            node.right = a
            return _pull(node), b
        a, b = self._split_lt(node.left, key, uid)
        node.left = b
        return a, _pull(node)

    def _merge(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        if a.prio > b.prio:
            a.right = self._merge(a.right, b)
            return _pull(a)
        b.left = self._merge(a, b.left)
        return _pull(b)

    def insert(self, key, uid):
        a, b = self._split_lt(self._root, key, uid)
        self._root = self._merge(self._merge(a, _Node(key, uid, self._rng.random())), b)

    def delete(self, key, uid):
        a, rest = self._split_lt(self._root, key, uid)
        mid, b = self._split_lt(rest, key, uid + 1)
        if mid is None or mid.size != 1:
            raise KeyError(f"({key}, {uid}) not in tree")
        self._root = self._merge(a, b)

    def count_less(self, key, inclusive: bool = False) -> int:
        node = self._root
        cnt = 0
        while node is not None:
            hit = node.key <= key if inclusive else node.key < key
            if hit:
                cnt += _size(node.left) + 1
                node = node.right
            else:
                node = node.left
        return cnt

    def count_greater(self, key, inclusive: bool = False) -> int:
        return len(self) - self.count_less(key, inclusive=not inclusive)

    def rank_desc(self, key) -> int:
        """Number of keys strictly greater than ``key``."""
        return self.count_greater(key)

    def select_asc(self, r: int):
        """(key, uid) of the r-th smallest element, 1-based."""
        if not (1 <= r <= len(self)):
            raise IndexError(r)
        node = self._root
        while True:
            ls = _size(node.left)
            if r <= ls:
                node = node.left
            elif r == ls + 1:
                return node.key, node.uid
            else:
                r -= ls + 1
                node = node.right

    def select_desc(self, r: int):
        return self.select_asc(len(self) - r + 1)

    def report_range(self, lo, hi, lo_inc: bool = True, hi_inc: bool = True):
        out = []

        def walk(node):
            if node is None:
                return
            above_lo = (node.key >= lo) if lo_inc else (node.key > lo)
            below_hi = (node.key <= hi) if hi_inc else (node.key < hi)
            if above_lo:
                walk(node.left)
            if above_lo and below_hi:
                out.append((node.key, node.uid))
            if below_hi:
                walk(node.right)

        walk(self._root)
        return out

    def validate(self):
        def walk(node):
            if node is None:
                return 0
            ls, rs = walk(node.left), walk(node.right)
            if node.size != ls + rs + 1:
                raise InternalInvariantError("subtree size invariant violated")
            if node.left is not None and (node.left.key, node.left.uid) >= (node.key, node.uid):
                raise InternalInvariantError("ordering invariant violated")
            if node.right is not None and (node.right.key, node.right.uid) <= (node.key, node.uid):
                raise InternalInvariantError("ordering invariant violated")
            return node.size

        walk(self._root)


# ---------------------------------------------------------------------------
# weak subqueries: strip x parallel band, swept with a sliding tree


def _first_ge(sorted_arr, bound) -> int:
    if isinstance(bound, Fraction):
        if sorted_arr.dtype.kind in "iu":
            bound, strict = rationalize_threshold(bound, strict_greater=False)
            return int(np.searchsorted(sorted_arr, bound, side="left"))
        bound = float(bound)
    if bound == NEG_INF:
        return 0
    return int(np.searchsorted(sorted_arr, bound, side="left"))


def _first_gt(sorted_arr, bound) -> int:
    if isinstance(bound, Fraction):
        if sorted_arr.dtype.kind in "iu":
            # "v > p/q" rationalises to "v > T" (integral) or "v >= T"
            bound, strict = rationalize_threshold(bound, strict_greater=True)
            return int(np.searchsorted(sorted_arr, bound, side="right" if strict else "left"))
        bound = float(bound)
    if bound == POS_INF:
        return len(sorted_arr)
    return int(np.searchsorted(sorted_arr, bound, side="right"))


@dataclass
class _Piece:
    kind: str  # "x" or "v": which strip functional
    glo: object
    glo_inc: bool
    ghi: object
    ghi_inc: bool
    blo: object
    blo_inc: bool
    bhi: object
    bhi_inc: bool
    filters: list  # (kind, op, bound) with kind in {"x","v"}, op in {gt,ge}
    label: str = ""


class _PieceSweep:
    """Sliding-window sweep of one piece over (P sorted by g, Q sorted by g)."""

    def __init__(self, data, piece: _Piece, seed: int = 0):
        self.d = data
        self.p = piece
        self.seed = seed

    def _window(self, gp_val):
        p = self.p
        gq = self.d["gq_sorted"][p.kind]
        lo_b = p.glo - gp_val if p.glo != NEG_INF else NEG_INF
        hi_b = p.ghi - gp_val if p.ghi != POS_INF else POS_INF
        lo = _first_ge(gq, lo_b) if p.glo_inc else _first_gt(gq, lo_b)
        hi = _first_gt(gq, hi_b) if p.ghi_inc else _first_ge(gq, hi_b)
        return lo, hi

    def _passes(self, p_id, q_id):
        d = self.d
        for kind, op, bound in self.p.filters:
            val = d["gp_raw"][kind][p_id] + d["gq_raw"][kind][q_id]
            if op == "gt":
                if not (val > bound):
                    return False
            elif op == "ge":
                if not (val >= bound):
                    return False
            else:
                raise ValueError(op)
        return True

    def sweep(self, mode: str, requests=None):
        """mode: 'report' | 'count' | 'retrieve'.

        'count' returns the raw per-p window counts (before filters);
        'retrieve' resolves (p_pos, local_rank) requests against the raw
        band-ordered window contents.
        """
        d = self.d
        p = self.p
        p_order = d["p_order"][p.kind]
        gp_sorted = d["gp_sorted"][p.kind]
        q_order = d["q_order"][p.kind]
        py, qy = d["py"], d["qy"]
        tree = OrderStatisticTree(seed=self.seed)
        cur_a, cur_b = len(q_order), len(q_order)  # empty window at far right

        def move_to(a, b):
            nonlocal cur_a, cur_b
            # remove [cur_a, cur_b) \ [a, b)
            for seg in ((cur_a, min(cur_b, a)), (max(cur_a, b), cur_b)):
                for pos in range(seg[0], seg[1]):
                    qid = int(q_order[pos])
                    tree.delete(py_key(qid), qid)
            # add [a, b) \ [cur_a, cur_b)
            for seg in ((a, min(b, cur_a)), (max(a, cur_b), b)):
                for pos in range(seg[0], seg[1]):
                    qid = int(q_order[pos])
                    tree.insert(py_key(qid), qid)
            cur_a, cur_b = a, b

        def py_key(qid):
            v = qy[qid]
            return int(v) if d["int_mode"] else float(v)

        report = []
        counts = np.zeros(len(p_order), dtype=np.int64)
        resolved = {}
        req_by_pos = {}
        if requests is not None:
            for req in requests:
                req_by_pos.setdefault(req[0], []).append(req)

        for pos in range(len(p_order)):
            pid = int(p_order[pos])
            a, b = self._window(gp_sorted[pos])
            if b < a:
                b = a
            move_to(a, b)
            if len(tree) == 0:
                continue
            y_p = py[pid]
            klo = p.blo - y_p if p.blo != NEG_INF else NEG_INF
            khi = p.bhi - y_p if p.bhi != POS_INF else POS_INF
            if mode == "report":
                for key, qid in tree.report_range(klo, khi, p.blo_inc, p.bhi_inc):
                    if self._passes(pid, qid):
                        report.append((pid, qid))
            elif mode == "count":
                below = tree.count_less(klo, inclusive=not p.blo_inc)
                upto = tree.count_less(khi, inclusive=p.bhi_inc)
                counts[pos] = upto - below
            else:  # retrieve
                if pos in req_by_pos:
                    below = tree.count_less(klo, inclusive=not p.blo_inc)
                    for req in req_by_pos[pos]:
                        key, qid = tree.select_asc(below + req[1])
                        resolved[req] = (pid, qid)
        if mode == "report":
            return report
        if mode == "count":
            return counts
        return resolved


# ---------------------------------------------------------------------------
# piece construction (the reporting case analysis)


def _band_tighten(blo, blo_inc, bhi, bhi_inc, bound, inclusive, lower: bool):
    if lower:
        if bound > blo or (bound == blo and not inclusive):
            return bound, (inclusive if bound > blo else (blo_inc and inclusive)), bhi, bhi_inc
        return blo, blo_inc, bhi, bhi_inc
    if bound < bhi or (bound == bhi and not inclusive):
        return blo, blo_inc, bound, (inclusive if bound < bhi else (bhi_inc and inclusive))
    return blo, blo_inc, bhi, bhi_inc


def _case_c_pieces(c1, s1, a2, b2, c2, s2, sl, sl_inc, sr, sr_inc, exact):
    """Pieces for the bounded-wedge geometry with the corner inside the band.

    Requires a2 <= 0, b2 < 0 and corner level <= sr.
    """
    half = Fraction(1, 2) if exact else 0.5
    yc = _div(c2 - a2 * c1, b2, exact)
    y_mid = (yc + sl) * half
    c2dd = a2 * c1 + b2 * y_mid
    x_d = _div(c2 - b2 * y_mid, a2, exact) if a2 != 0 else None
    base = [("x", "gt" if s1 else "ge", c1)]
    pieces = [
        _Piece("v", c2, not s2, c2dd, True, y_mid, False, sr, sr_inc, list(base), "c/upper"),
        _Piece("v", c2, not s2, c2dd, True, sl, sl_inc, y_mid, True, list(base), "c/lower-right"),
    ]
    if x_d is not None:
        pieces.append(
            _Piece(
                "x", c1, not s1, x_d, True, sl, sl_inc, y_mid, True,
                [("v", "gt", c2dd), ("v", "gt" if s2 else "ge", c2)], "c/lower-left",
            )
        )
    return pieces


def _div(num, den, exact):
    if exact:
        return Fraction(num) / Fraction(int(den))
    return num / den


def _build_pieces(c1, s1, a2, b2, c2, s2, sl, sr, exact):
    """Disjoint weak pieces covering {x >= c1} ∩ {a2 x + b2 y >= c2} ∩ band.

    Works in a y-flipped view when needed so that a2 > 0 pairs with b2 > 0
    and a2 <= 0 with b2 < 0; strip functionals are frame-independent, only
    band bounds are translated back.
    """
    flip = (a2 > 0 and b2 < 0) or (a2 < 0 and b2 > 0)

    def out(pieces, label):
        if not flip:
            return pieces, label
        for p in pieces:
            p.blo, p.bhi = -p.bhi, -p.blo
            p.blo_inc, p.bhi_inc = p.bhi_inc, p.blo_inc
        return pieces, label

    b2v = -b2 if flip else b2
    slv, srv = (-sr, -sl) if flip else (sl, sr)
    sl_inc = sr_inc = True

    if a2 == 0:
        bound = _div(c2, b2v, exact)
        if b2v > 0:
            blo, blo_inc, bhi, bhi_inc = _band_tighten(slv, True, srv, True, bound, not s2, lower=True)
        else:
            blo, blo_inc, bhi, bhi_inc = _band_tighten(slv, True, srv, True, _div(c2, b2v, exact), not s2, lower=False)
        piece = _Piece("x", c1, not s1, POS_INF, True, blo, blo_inc, bhi, bhi_inc, [], "axis")
        return out([piece], "axis")

    yc = _div(c2 - a2 * c1, b2v, exact)
    base1 = [("x", "gt" if s1 else "ge", c1)]
    base2 = [("v", "gt" if s2 else "ge", c2)]

    if a2 > 0:  # with b2v > 0: region unbounded to the right
        if yc <= slv:
            return out([_Piece("x", c1, not s1, POS_INF, True, slv, True, srv, True, list(base2), "slack-l2")], "slack-l2")
        if yc > srv:
            return out([_Piece("v", c2, not s2, POS_INF, True, slv, True, srv, True, list(base1), "slack-l1")], "slack-l1")
        hi_piece = _Piece("x", c1, not s1, POS_INF, True, yc, False, srv, True, list(base2), "split/high")
        lo_piece = _Piece("v", c2, not s2, POS_INF, True, slv, True, yc, True, list(base1), "split/low")
        return out([hi_piece, lo_piece], "split")

    # a2 <= 0 with b2v < 0: bounded wedge, apex at (c1, yc), opens downward
    if yc < slv:
        return out([], "empty")
    if yc <= srv:
        return out(_case_c_pieces(c1, s1, a2, b2v, c2, s2, slv, True, srv, True, exact), "c")
    c2p = a2 * c1 + b2v * srv
    x_top = _div(c2 - b2v * srv, a2, exact)
    y_int = 2 * srv - yc
    pieces = [
        _Piece("v", c2, not s2, c2p, True, slv, True, srv, True, list(base1), "ab/parallelogram"),
        _Piece("x", c1, not s1, x_top, True, slv, True, srv, True, [("v", "gt", c2p)], "ab/rectangle"),
    ]
    if y_int <= slv:
        return out(pieces, "a" if y_int == slv else "b")
    pieces += _case_c_pieces(x_top, True, a2, b2v, c2p, True, slv, True, y_int, True, exact)
    return out(pieces, "d")


# ---------------------------------------------------------------------------
# engine over canonical two-constraint instances


class RangeQueryEngine:
    """Report / count / sample feasible pairs with objective value in a band."""

    def __init__(self, pair_engine: TwoConstraintEngine, s_l, s_r, seed: int = 0):
        if s_l > s_r:
            raise ValueError("need s_l <= s_r")
        self.eng = pair_engine
        self.s_l, self.s_r = s_l, s_r
        canon = pair_engine.canon
        px, py, qx, qy = canon.px, canon.py, canon.qx, canon.qy
        int_mode = px.dtype.kind in "iu"
        vp = canon.a2 * px + canon.b2 * py
        vq = canon.a2 * qx + canon.b2 * qy
        self.data = {
            "py": py,
            "qy": qy,
            "int_mode": int_mode,
            "gp_raw": {"x": px, "v": vp},
            "gq_raw": {"x": qx, "v": vq},
            "p_order": {},
            "gp_sorted": {},
            "q_order": {},
            "gq_sorted": {},
        }
        for kind, (gp, gq) in {"x": (px, qx), "v": (vp, vq)}.items():
            po = np.argsort(gp, kind="stable")
            qo = np.argsort(gq, kind="stable")
            self.data["p_order"][kind] = po
            self.data["gp_sorted"][kind] = gp[po]
            self.data["q_order"][kind] = qo
            self.data["gq_sorted"][kind] = gq[qo]
        self.pieces, self.case_label = _build_pieces(
            pair_engine.c1, pair_engine.strict1,
            canon.a2, canon.b2, pair_engine.c2, pair_engine.strict2,
            s_l, s_r, exact=int_mode,
        )
        self.seed = seed

    def count(self) -> int:
        return self.eng.count_above(self.s_l, inclusive=True) - self.eng.count_above(self.s_r)

    def report(self):
        out = []
        for piece in self.pieces:
            out.extend(_PieceSweep(self.data, piece, self.seed).sweep("report"))
        if DEBUG_VALIDATE:
            expect = self.count()
            if len(out) != expect:
                raise InternalInvariantError(
                    f"range report size {len(out)} != counted {expect} (case {self.case_label})"
                )
        return out

    # -- sampling ----------------------------------------------------------

    def _raw_counts(self):
        per_piece = []
        for piece in self.pieces:
            counts = _PieceSweep(self.data, piece, self.seed).sweep("count")
            per_piece.append(counts)
        return per_piece

    def sample(self, count: int, rng) -> list:
        """``count`` uniform draws (with replacement) of feasible pairs."""
        n_true = self.count()
        if n_true == 0:
            raise InfeasibleError("no feasible point in range")
        per_piece = self._raw_counts()
        totals = [int(c.sum()) for c in per_piece]
        raw_total = sum(totals)
        if raw_total < n_true:
            raise InternalInvariantError("piece windows under-cover the range")
        cums = [np.cumsum(c) for c in per_piece]
        out = []
        attempts = 0
        cap = 64 * count + 256
        while len(out) < count and attempts < cap:
            batch = min(max(2 * (count - len(out)), 16), 4096)
            draws = rng.integers(raw_total, size=batch)
            attempts += batch
            requests = {}
            order = []
            for d in draws.tolist():
                pi = 0
                while d >= totals[pi]:
                    d -= totals[pi]
                    pi += 1
                pos = int(np.searchsorted(cums[pi], d, side="right"))
                local = d - (int(cums[pi][pos - 1]) if pos else 0) + 1
                key = (pi, (pos, local))
                requests.setdefault(pi, set()).add((pos, local))
                order.append(key)
            resolved = {}
            for pi, reqs in requests.items():
                got = _PieceSweep(self.data, self.pieces[pi], self.seed).sweep(
                    "retrieve", requests=sorted(reqs)
                )
                for r, pair in got.items():
                    resolved[(pi, r)] = pair
            for key in order:
                if len(out) >= count:
                    break
                pid, qid = resolved[key]
                piece = self.pieces[key[0]]
                sweep = _PieceSweep(self.data, piece, self.seed)
                if sweep._passes(pid, qid):
                    out.append((pid, qid))
        if len(out) < count:
            # pathological acceptance ratio: fall back to exact enumeration
            pool = self.report()
            idx = rng.integers(len(pool), size=count - len(out))
            out.extend(pool[i] for i in idx.tolist())
        return out


# ---------------------------------------------------------------------------
# public operations


def range_report_weak(P, Q, L1, L2, s_l, s_r, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None):
    """Report feasible pairs for two parallel constraints, y in [s_l, s_r]."""
    try:
        form = transform_parallel(P, Q, L1, L2, f, mode=mode)
    except InfeasibleError:
        return []
    px, py, qx, qy = form.px, form.py, form.qx, form.qy
    int_mode = px.dtype.kind in "iu"
    data = {
        "py": py,
        "qy": qy,
        "int_mode": int_mode,
        "gp_raw": {"x": px},
        "gq_raw": {"x": qx},
        "p_order": {"x": np.argsort(px, kind="stable")},
        "q_order": {"x": np.argsort(qx, kind="stable")},
    }
    data["gp_sorted"] = {"x": px[data["p_order"]["x"]]}
    data["gq_sorted"] = {"x": qx[data["q_order"]["x"]]}
    if form.kind == "single":
        piece = _Piece("x", form.lo, not form.lo_strict, POS_INF, True, s_l, True, s_r, True, [], "weak")
    else:
        piece = _Piece("x", form.lo, not form.lo_strict, form.hi, not form.hi_strict, s_l, True, s_r, True, [], "weak")
    return _PieceSweep(data, piece).sweep("report")


def _pair_engine(P, Q, L1, L2, f, eps, mode) -> TwoConstraintEngine:
    return TwoConstraintEngine(P, Q, L1, L2, f, eps=eps, mode=mode)


def range_report(P, Q, L1, L2, s_l, s_r, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None):
    """All feasible pairs with objective value in [s_l, s_r]."""
    try:
        eng = _pair_engine(P, Q, L1, L2, f, eps, mode)
    except ParallelConstraintsSignal:
        return range_report_weak(P, Q, L1, L2, s_l, s_r, f, eps=eps, mode=mode)
    return RangeQueryEngine(eng, s_l, s_r).report()


def range_count(P, Q, L1, L2, s_l, s_r, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None) -> int:
    try:
        eng = _pair_engine(P, Q, L1, L2, f, eps, mode)
    except ParallelConstraintsSignal:
        return len(range_report_weak(P, Q, L1, L2, s_l, s_r, f, eps=eps, mode=mode))
    return eng.count_above(s_l, inclusive=True) - eng.count_above(s_r)


def sample_feasible(P, Q, L1, L2, s_l, s_r, count: int, seed: int, f: Objective = OBJECTIVE_Y, eps: float = 0.0, mode: str | None = None):
    eng = _pair_engine(P, Q, L1, L2, f, eps, mode)
    rng = np.random.default_rng(seed)
    return RangeQueryEngine(eng, s_l, s_r).sample(count, rng)


class ContractionSelector:
    """Expected near-linearithmic selection by repeated range contraction."""

    def __init__(self, P, Q, L1, L2, f: Objective, eps: float = 0.0, mode: str | None = None):
        self.eng = TwoConstraintEngine(P, Q, L1, L2, f, eps=eps, mode=mode)
        self.repeats = 0
        self.accepted_ranges = []

    def select(self, k: int, seed: int = 0, want_witness: bool = True) -> SelectionResult:
        eng = self.eng
        if eng.total_feasible == 0:
            raise InfeasibleError("no feasible pair")
        if not (1 <= k <= eng.total_feasible):
            raise RankRangeError(f"k={k} outside [1, {eng.total_feasible}]")
        rng = np.random.default_rng(seed)
        py, qy = eng.canon.py, eng.canon.qy
        lo = py.min() + qy.min()
        hi = py.max() + qy.max()
        n_s = max(len(py), len(qy))
        threshold = max(ENUM_FACTOR * n_s, 64)
        self.repeats = 0
        self.accepted_ranges = []
        while True:
            above_hi = eng.count_above(hi)
            n_range = eng.count_above(lo, inclusive=True) - above_hi
            if n_range <= threshold or self.repeats >= MAX_CONTRACTION_ATTEMPTS:
                break
            self.repeats += 1
            sampler = RangeQueryEngine(eng, lo, hi)
            pts = sampler.sample(n_s, rng)
            ys = sorted((py[p] + qy[q] for p, q in pts), reverse=True)
            k_in = k - above_hi
            center = n_s * k_in / n_range
            spread = CONTRACTION_T * math.sqrt(n_s) / 2
            l_rank = max(1, math.floor(center - spread))
            r_rank = min(n_s, math.floor(center + spread))
            if r_rank < 1 or l_rank > n_s:
                continue
            cand_hi = ys[l_rank - 1]
            cand_lo = ys[r_rank - 1]
            k1 = eng.count_above(cand_hi)
            k2 = eng.count_above(cand_lo, inclusive=True)
            new_n = k2 - k1
            cond1 = k1 < k <= k2
            cond2 = new_n <= CONTRACTION_T ** 2 * n_range / ((CONTRACTION_T - 1) * math.sqrt(n_s))
            if cond1 and cond2:
                lo, hi = cand_lo, cand_hi
                self.accepted_ranges.append((lo, hi))
        pairs = RangeQueryEngine(self.eng, lo, hi).report()
        idx = k - eng.count_above(hi)
        if not (1 <= idx <= len(pairs)):
            raise InternalInvariantError("contraction bookkeeping out of range")
        ordered = sorted(pairs, key=lambda pq: (-(py[pq[0]] + qy[pq[1]]), pq[0], pq[1]))
        p, q = ordered[idx - 1]
        value = py[p] + qy[q]
        return SelectionResult(value, (int(p), int(q)) if want_witness else None)


def selection_2_randomized(P, Q, L1, L2, f: Objective, k: int, seed: int = 0, eps: float = 0.0, mode: str | None = None) -> SelectionResult:
    return ContractionSelector(P, Q, L1, L2, f, eps=eps, mode=mode).select(k, seed=seed)

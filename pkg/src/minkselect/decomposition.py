"""Divide-and-conquer decompositions of the feasible pair set.

``construct_matrices`` is the one-constraint recursion: split P in half by
x, find the largest prefix of Q that cannot pair with the lower half, emit
the guaranteed-feasible quarter as one implicit sorted matrix of y-sums, and
recurse on the two mixed quarters.  ``product_blocks`` generalises the same
recursion to any number of linear constraints on the sum, emitting product
blocks whose pairwise sums are all feasible.  ``parallel_blocks`` and
``lcss_blocks`` are the strip partitions used by the parallel-constraint and
length-constrained engines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numeric import NEG_INF, rationalize_threshold
from .sorted_matrix import ImplicitSortedMatrix, MatrixCollection

__all__ = [
    "ProductBlock",
    "Decomposition",
    "construct_matrices",
    "product_blocks",
    "parallel_blocks",
    "lcss_blocks",
]


def _count_below(sorted_arr, bound, include_equal):
    """#elements < bound (or <= bound), exact for Fraction bounds on ints."""
    if isinstance(bound, Fraction):
        if sorted_arr.dtype.kind in "iu":
            if bound.denominator == 1:
                bound = int(bound)
            else:
                # v < p/q  <=>  v <= floor(p/q); v <= p/q identical here
                return int(np.searchsorted(sorted_arr, math.floor(bound), side="right"))
        else:
            bound = float(bound)
    side = "right" if include_equal else "left"
    return int(np.searchsorted(sorted_arr, bound, side=side))


def _ge_mask(values, bound, strict):
    """values >= bound (or > bound), exact for Fraction bounds on ints."""
    if isinstance(bound, Fraction) and values.dtype.kind in "iu":
        bound, strict = rationalize_threshold(bound, strict)
    elif isinstance(bound, Fraction):
        bound = float(bound)
    return values > bound if strict else values >= bound


def construct_matrices(px, py, qx, qy, c1, strict: bool = False) -> MatrixCollection:
    """Store the y-coordinates of the pairs with x-sum >= c1 (or > c1) as a
    collection of implicit sorted matrices with point provenance.

    ``c1 = None`` (or -inf) means unconstrained and yields a single matrix.
    """
    px, py, qx, qy = map(np.asarray, (px, py, qx, qy))
    n, m = len(px), len(qx)
    coll = MatrixCollection()
    if n == 0 or m == 0:
        return coll
    if c1 is None or c1 == NEG_INF:
        p_by_y = np.argsort(py, kind="stable")
        q_by_y = np.argsort(qy, kind="stable")
        coll.append(ImplicitSortedMatrix(py[p_by_y], qy[q_by_y], p_by_y, q_by_y))
        return coll

    p_by_x = np.argsort(px, kind="stable")
    p_by_y = np.argsort(py, kind="stable")
    q_by_x = np.argsort(qx, kind="stable")
    q_by_y = np.argsort(qy, kind="stable")
    mask_p = np.zeros(n, dtype=bool)
    mask_q = np.zeros(m, dtype=bool)

    def filt(order, subset, mask):
        mask[subset] = True
        out = order[mask[order]]
        mask[subset] = False
        return out

    def leaf(p_ids_y, q_ids_y):
        if len(p_ids_y) == 1:
            pid = int(p_ids_y[0])
            sel = q_ids_y[_ge_mask(qx[q_ids_y], c1 - px[pid], strict)]
            if len(sel):
                coll.append(ImplicitSortedMatrix(py[p_ids_y], qy[sel], p_ids_y, sel))
        else:
            qid = int(q_ids_y[0])
            sel = p_ids_y[_ge_mask(px[p_ids_y], c1 - qx[qid], strict)]
            if len(sel):
                coll.append(ImplicitSortedMatrix(py[sel], qy[q_ids_y], sel, q_ids_y))

    def rec(pbx, pby, qbx, qby):
        n_, m_ = len(pbx), len(qbx)
        if n_ == 0 or m_ == 0:
            return
        if n_ == 1 or m_ == 1:
            if n_ == 1:
                leaf(pby, qby)
            else:
                leaf(pby, qby)
            return
        h = (n_ + 1) // 2
        x_med = px[pbx[h - 1]]
        # largest prefix of Q that cannot reach c1 together with x_med
        t = _count_below(qx[qbx], c1 - x_med, include_equal=strict)
        A, B = pbx[:h], pbx[h:]
        C, D = qbx[:t], qbx[t:]
        A_y = filt(pby, A, mask_p)
        B_y = filt(pby, B, mask_p)
        C_y = filt(qby, C, mask_q)
        D_y = filt(qby, D, mask_q)
        if len(B) and len(D):
            coll.append(ImplicitSortedMatrix(py[B_y], qy[D_y], B_y, D_y))
        rec(A, A_y, D, D_y)
        rec(B, B_y, C, C_y)

    rec(p_by_x, p_by_y, q_by_x, q_by_y)
    return coll


@dataclass
class ProductBlock:
    """Sub-multisets whose full pairwise sum satisfies every constraint."""

    p_ids: np.ndarray
    q_ids: np.ndarray

    @property
    def side(self) -> int:
        return len(self.p_ids) + len(self.q_ids)

    @property
    def n_pairs(self) -> int:
        return len(self.p_ids) * len(self.q_ids)


@dataclass
class Decomposition:
    blocks: list

    @property
    def total_side(self) -> int:
        return sum(b.side for b in self.blocks)

    @property
    def n_pairs(self) -> int:
        return sum(b.n_pairs for b in self.blocks)


def product_blocks(px, py, qx, qy, constraints) -> Decomposition:
    """Partition the feasible pairs into complete product blocks.

    Each constraint is a half-plane on the pairwise sum; the one-constraint
    recursion is applied per constraint, and a block that is complete for one
    constraint is decomposed against the next.  Side-1 leaves are filtered by
    a direct scan against all remaining constraints.
    """
    px, py, qx, qy = map(np.asarray, (px, py, qx, qy))
    n, m = len(px), len(qx)
    blocks: list[ProductBlock] = []
    if n == 0 or m == 0:
        return Decomposition(blocks)
    cons = list(constraints)
    if not cons:
        return Decomposition([ProductBlock(np.arange(n), np.arange(m))])

    gp = [L.a * px + L.b * py for L in cons]
    gq = [L.a * qx + L.b * qy for L in cons]

    def leaf(p_ids, q_ids, ci):
        if len(p_ids) == 1:
            pid = int(p_ids[0])
            keep = np.ones(len(q_ids), dtype=bool)
            for j in range(ci, len(cons)):
                keep &= _ge_mask(gp[j][pid] + gq[j][q_ids], cons[j].c, cons[j].strict)
            sel = q_ids[keep]
            if len(sel):
                blocks.append(ProductBlock(p_ids.copy(), sel))
        else:
            qid = int(q_ids[0])
            keep = np.ones(len(p_ids), dtype=bool)
            for j in range(ci, len(cons)):
                keep &= _ge_mask(gp[j][p_ids] + gq[j][qid], cons[j].c, cons[j].strict)
            sel = p_ids[keep]
            if len(sel):
                blocks.append(ProductBlock(sel, q_ids.copy()))

    def descend(p_ids, q_ids, ci):
        # all pairs satisfy constraints < ci; sort by the ci-th functional
        if ci == len(cons):
            blocks.append(ProductBlock(p_ids, q_ids))
            return
        p_sorted = p_ids[np.argsort(gp[ci][p_ids], kind="stable")]
        q_sorted = q_ids[np.argsort(gq[ci][q_ids], kind="stable")]
        rec(p_sorted, q_sorted, ci)

    def rec(pbx, qbx, ci):
        n_, m_ = len(pbx), len(qbx)
        if n_ == 0 or m_ == 0:
            return
        if n_ == 1 or m_ == 1:
            leaf(pbx, qbx, ci)
            return
        L = cons[ci]
        h = (n_ + 1) // 2
        x_med = gp[ci][pbx[h - 1]]
        t = _count_below(gq[ci][qbx], L.c - x_med, include_equal=L.strict)
        A, B = pbx[:h], pbx[h:]
        C, D = qbx[:t], qbx[t:]
        if len(B) and len(D):
            descend(B, D, ci + 1)
        rec(A, D, ci)
        rec(B, C, ci)

    descend(np.arange(n), np.arange(m), 0)
    return Decomposition(blocks)


def _ceil_div_array(num, den):
    """ceil(num/den) elementwise for integer arrays, den > 0."""
    return -((-num) // den)


def _bucket_index(values, offset, width, negate=False):
    """t with (t-1)*width < v <= t*width for v = values (or offset - values)."""
    v = (offset - values) if negate else values
    if isinstance(width, Fraction) or isinstance(offset, Fraction):
        wf = Fraction(width)
        of = Fraction(offset) if negate else Fraction(0)
        # ceil((A/B - x)/(N/D)) with integer arrays
        B, A = of.denominator, of.numerator
        N, D = wf.numerator, wf.denominator
        if negate:
            numer = D * (A - B * values)
            denom = B * N
        else:
            numer = D * values
            denom = N
        return _ceil_div_array(numer.astype(object) if values.dtype.kind not in "iu" else numer, denom)
    if np.asarray(values).dtype.kind in "iu" and isinstance(width, (int, np.integer)):
        return _ceil_div_array(v, int(width))
    return np.ceil(np.asarray(v, dtype=np.float64) / float(width)).astype(np.int64)


def parallel_blocks(px, qx, c1, c2):
    """Bucket partition for the strip c1 <= x-sum <= c2 (width w = c2 - c1).

    Returns (t, P_t, Q_t, Q_{t-1}) tuples: pairs from P_t x Q_t only need the
    lower bound checked, pairs from P_t x Q_{t-1} only the upper bound, and
    every other combination is infeasible.
    """
    px = np.asarray(px)
    qx = np.asarray(qx)
    w = c2 - c1
    if w <= 0:
        raise ValueError("parallel_blocks needs c1 < c2")
    tp = _bucket_index(px, 0, w)
    tq = _bucket_index(qx, c1, w, negate=True)
    q_groups: dict[int, list] = {}
    for j, t in enumerate(np.asarray(tq).tolist()):
        q_groups.setdefault(int(t), []).append(j)
    out = []
    p_order = np.argsort(np.asarray(tp), kind="stable")
    i = 0
    tp_list = np.asarray(tp).tolist()
    while i < len(p_order):
        j = i
        t = int(tp_list[p_order[i]])
        while j < len(p_order) and int(tp_list[p_order[j]]) == t:
            j += 1
        p_ids = p_order[i:j]
        q_main = np.asarray(q_groups.get(t, []), dtype=np.int64)
        q_prev = np.asarray(q_groups.get(t - 1, []), dtype=np.int64)
        out.append((t, p_ids, q_main, q_prev))
        i = j
    return out


def lcss_blocks(n: int, l: int, u: int):
    """Window partition of the prefix-point reduction for length bounds [l, u].

    Prefix points are indexed 0..n on both sides; window t pairs P-indices in
    (t(u-l)-(u-l), t(u-l)] with two Q windows, the first constrained below by
    l and the second above by u.
    """
    if not (1 <= l < u <= n):
        raise ValueError("need 1 <= l < u <= n")
    w = u - l
    out = []
    for t in range(0, -((-n) // w) + 1):
        p_lo, p_hi = t * w - w, t * w  # exclusive, inclusive
        p_ids = np.arange(max(p_lo + 1, 0), min(p_hi, n) + 1, dtype=np.int64)
        q1_lo, q1_hi = (t - 1) * w - l, t * w - l
        q1 = np.arange(max(q1_lo + 1, 0), min(q1_hi, n) + 1, dtype=np.int64)
        q2_lo, q2_hi = (t - 2) * w - l, (t - 1) * w - l
        q2 = np.arange(max(q2_lo + 1, 0), min(q2_hi, n) + 1, dtype=np.int64)
        if len(p_ids) and (len(q1) or len(q2)):
            out.append((t, p_ids, q1, q2))
    return out

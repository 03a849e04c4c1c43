"""Finding: the feasible pair whose objective value is closest to a target.

``find_linear`` canonicalises the objective to y with the target shifted to
zero, splits the plane into the nonnegative and negative halves, and reads
the per-half optimum off the product-block decomposition: inside a complete
block the minimum (maximum) y-sum is the sum of the per-side minima
(maxima).

``find_ratio`` reduces b*y/(a*x) with target delta to |y/x| against 0 and
minimises per closed quadrant, where |y/x| is quasiconcave, so each block's
minimum is attained at a vertex of the block hull; block hulls are convex
polygon sums of the two side hulls (edge merge).  Every evaluated candidate
is a genuine feasible pair, so extra boundary points are harmless.

Ties between equidistant witnesses resolve to the lexicographically smallest
(p index, q index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import as_points, detect_mode, effective_bound
from .decomposition import product_blocks
from .errors import InfeasibleError, NoFeasibleValueError
from .geometry import HalfPlaneConstraint, Objective, canonicalize_objective, transform_ratio
from .sorted_matrix import ImplicitSortedMatrix

__all__ = ["FindResult", "find_linear", "find_ratio", "find_max_leq"]


@dataclass
class FindResult:
    value: object
    distance: object
    witness: Optional[tuple]  # (p index, q index)


def _shift_all(constraints, eps):
    if eps == 0:
        return list(constraints)
    return [
        HalfPlaneConstraint(
            L.a, L.b,
            effective_bound(L.c, L.strict, eps * math.hypot(float(L.a), float(L.b))),
            L.strict,
        )
        for L in constraints
    ]


def _argmin_with_id(values, ids):
    m = values.min()
    return m, int(ids[values == m].min())


def _argmax_with_id(values, ids):
    m = values.max()
    return m, int(ids[values == m].min())


def find_linear(P, Q, constraints, f: Objective, delta, eps: float = 0.0, mode: str | None = None) -> FindResult:
    """Feasible pair minimising |f - delta| for a linear objective."""
    mode = mode or ("float" if isinstance(delta, float) and not delta.is_integer() else None)
    px, py, qx, qy, cons, scale = canonicalize_objective(P, Q, constraints, f, delta=delta, mode=mode)
    cons = _shift_all(cons, eps)
    int_mode = px.dtype.kind in "iu"

    candidates = []  # (|y'|, p, q, y')
    pos = product_blocks(px, py, qx, qy, cons + [HalfPlaneConstraint(0, 1, 0)])
    for blk in pos.blocks:
        vp, p = _argmin_with_id(py[blk.p_ids], blk.p_ids)
        vq, q = _argmin_with_id(qy[blk.q_ids], blk.q_ids)
        v = vp + vq
        candidates.append((v, p, q, v))
    neg = product_blocks(px, py, qx, qy, cons + [HalfPlaneConstraint(0, -1, 0, strict=True)])
    for blk in neg.blocks:
        vp, p = _argmax_with_id(py[blk.p_ids], blk.p_ids)
        vq, q = _argmax_with_id(qy[blk.q_ids], blk.q_ids)
        v = vp + vq
        candidates.append((-v, p, q, v))
    if not candidates:
        raise InfeasibleError("no feasible point")
    dist_scaled, p, q, v = min(candidates, key=lambda c: (c[0], c[1], c[2]))
    if int_mode:
        dfrac = Fraction(delta)
        distance = Fraction(int(dist_scaled), int(scale))
        value = dfrac + Fraction(int(v), int(scale))
    else:
        distance = dist_scaled / scale
        value = delta + v / scale
    return FindResult(value, distance, (p, q))


def _strict_hull(xs, ys, ids):
    """Convex hull (collinear points dropped), CCW, smallest id per location."""
    pts = {}
    for x, y, i in zip(xs, ys, ids):
        key = (x, y)
        if key not in pts or i < pts[key]:
            pts[key] = i
    order = sorted(pts.items())
    if len(order) <= 2:
        return [(x, y, i) for (x, y), i in order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for (x, y), i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], (x, y)) <= 0:
            lower.pop()
        lower.append((x, y, i))
    for (x, y), i in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], (x, y)) <= 0:
            upper.pop()
        upper.append((x, y, i))
    return lower[:-1] + upper[:-1]


def _hull_sum_candidates(hull_p, hull_q):
    """Boundary points of the convex polygon sum, as (x, y, p_id, q_id).

    Proper edge merge when both hulls are polygons; small hulls fall back to
    the full product, which is still a set of genuine pairs.
    """
    if len(hull_p) <= 2 or len(hull_q) <= 2:
        return [
            (a[0] + b[0], a[1] + b[1], a[2], b[2])
            for a in hull_p
            for b in hull_q
        ]

    def rot_lowest(h):
        k = min(range(len(h)), key=lambda i: (h[i][1], h[i][0]))
        return h[k:] + h[:k]

    A = rot_lowest(hull_p)
    B = rot_lowest(hull_q)
    n, m = len(A), len(B)
    out = []
    i = j = 0
    while i < n or j < m:
        a = A[i % n]
        b = B[j % m]
        out.append((a[0] + b[0], a[1] + b[1], a[2], b[2]))
        if i >= n:
            j += 1
            continue
        if j >= m:
            i += 1
            continue
        a2 = A[(i + 1) % n]
        b2 = B[(j + 1) % m]
        cr = (a2[0] - a[0]) * (b2[1] - b[1]) - (a2[1] - a[1]) * (b2[0] - b[0])
        if cr > 0:
            i += 1
        elif cr < 0:
            j += 1
        else:
            i += 1
            j += 1
    return out


_QUADRANTS = (
    (HalfPlaneConstraint(1, 0, 0), HalfPlaneConstraint(0, 1, 0)),
    (HalfPlaneConstraint(-1, 0, 0), HalfPlaneConstraint(0, 1, 0)),
    (HalfPlaneConstraint(-1, 0, 0), HalfPlaneConstraint(0, -1, 0)),
    (HalfPlaneConstraint(1, 0, 0), HalfPlaneConstraint(0, -1, 0)),
)


def find_ratio(P, Q, constraints, a, b, delta, eps: float = 0.0, mode: str | None = None) -> FindResult:
    """Feasible pair minimising |b*y/(a*x) - delta| (inf when x = 0)."""
    px, py, qx, qy, cons = transform_ratio(P, Q, constraints, a, b, delta, mode=mode)
    cons = _shift_all(cons, eps)
    int_mode = px.dtype.kind in "iu"
    feasible_any = False
    best = None  # (distance, p, q, x, y)
    for quad in _QUADRANTS:
        dec = product_blocks(px, py, qx, qy, cons + list(quad))
        for blk in dec.blocks:
            feasible_any = True
            hp = _strict_hull(px[blk.p_ids].tolist(), py[blk.p_ids].tolist(), blk.p_ids.tolist())
            hq = _strict_hull(qx[blk.q_ids].tolist(), qy[blk.q_ids].tolist(), blk.q_ids.tolist())
            for x, y, p, q in _hull_sum_candidates(hp, hq):
                if x == 0:
                    d = math.inf
                elif int_mode:
                    d = abs(Fraction(int(y), int(x)))
                else:
                    d = abs(y / x)
                cand = (d, p, q, x, y)
                if best is None or cand[:3] < best[:3]:
                    best = cand
    if not feasible_any:
        raise InfeasibleError("no feasible point")
    d, p, q, x, y = best
    if d == math.inf:
        return FindResult(math.inf, math.inf, (p, q))
    if int_mode:
        value = Fraction(delta) + Fraction(int(y), int(x))
    else:
        value = delta + y / x
    return FindResult(value, d, (p, q))


def find_max_leq(P, Q, constraints, t, eps: float = 0.0, mode: str | None = None) -> FindResult:
    """Largest feasible y-coordinate <= t (canonical objective y)."""
    mode = mode or detect_mode(np.asarray(P, dtype=object), np.asarray(Q, dtype=object))
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)
    cons = _shift_all(constraints, eps)
    dec = product_blocks(px, py, qx, qy, cons)
    best = None
    for blk in dec.blocks:
        r = blk.p_ids[np.argsort(py[blk.p_ids], kind="stable")]
        c = blk.q_ids[np.argsort(qy[blk.q_ids], kind="stable")]
        M = ImplicitSortedMatrix(py[r], qy[c], r, c)
        hit = M.max_entry_below(t, inclusive=True)
        if hit is None:
            continue
        v, i, j = hit
        cand = (v, -int(M.row_ids[i]), -int(M.col_ids[j]))
        if best is None or cand > best:
            best = cand
    if best is None:
        if dec.n_pairs == 0:
            raise InfeasibleError("no feasible point")
        raise NoFeasibleValueError(f"no feasible value <= {t}")
    v, np_, nq_ = best
    return FindResult(v, abs(t - v), (-np_, -nq_))

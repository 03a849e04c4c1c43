"""Planar points, half-plane constraints, objectives, and the input
transformations that reduce every query to canonical form (objective = y).

All transformations are fraction-free in integer mode: instead of dividing by
determinants we scale whole constraints by them (flipping the inequality when
the scale is negative), so int64 arrays stay exact end to end.  Scalar bounds
that are genuinely rational (parallel-strip bounds, polygon vertex levels) are
carried as ``fractions.Fraction`` and reduced to integer thresholds at the
comparison boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._numeric import DEFAULT_EPS, as_points, detect_mode
from .errors import DegenerateConstraintError, InfeasibleError, InputError, MinkError


class Point(NamedTuple):
    x: float
    y: float


class PointMultiset:
    """Ordered list of 2-d points; duplicates allowed, order not meaningful."""

    def __init__(self, points: Sequence):
        self.points = [Point(p[0], p[1]) for p in points]

    @property
    def n(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class HalfPlaneConstraint:
    """a*x + b*y >= c, or strictly > c when ``strict`` is set."""

    a: float
    b: float
    c: float
    strict: bool = False

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DegenerateConstraintError("constraint normal must be nonzero")

    def complement(self) -> "HalfPlaneConstraint":
        """The open/closed complement half-plane (violating side)."""
        return HalfPlaneConstraint(-self.a, -self.b, -self.c, not self.strict)

    def residual(self, x, y):
        return self.a * x + self.b * y - self.c

    def satisfied(self, x, y, eps: float = 0.0) -> bool:
        r = self.residual(x, y)
        return r > eps if self.strict else r >= -eps


class ConstraintSystem:
    def __init__(self, constraints: Sequence[HalfPlaneConstraint] = ()):
        self.constraints = list(constraints)

    @property
    def lam(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)


@dataclass(frozen=True)
class Objective:
    """Linear f = d*x + e*y, or ratio f = b*y / (a*x) (inf when x = 0)."""

    kind: str  # "linear" | "ratio"
    p: float  # d for linear, a for ratio
    q: float  # e for linear, b for ratio

    @staticmethod
    def linear(d, e) -> "Objective":
        if d == 0 and e == 0:
            raise DegenerateConstraintError("linear objective must be nonzero")
        return Objective("linear", d, e)

    @staticmethod
    def ratio(a, b) -> "Objective":
        if a == 0 or b == 0:
            raise DegenerateConstraintError("ratio objective needs a != 0 and b != 0")
        return Objective("ratio", a, b)

    def value(self, x, y):
        if self.kind == "linear":
            return self.p * x + self.q * y
        if x == 0:
            return math.inf
        if isinstance(x, (int, np.integer)) and isinstance(y, (int, np.integer)):
            return Fraction(int(self.q) * int(y), int(self.p) * int(x))
        return (self.q * y) / (self.p * x)


OBJECTIVE_Y = Objective.linear(0, 1)


class ParallelConstraintsSignal(MinkError):
    """Both constraints are mutually parallel: route to the strip engine."""


class SwapConstraintsSignal(MinkError):
    """L1 is parallel to the objective; retry with L1 and L2 swapped."""


def normalize_constraint(a, b, c, op: str = ">=") -> HalfPlaneConstraint:
    """Build a >=/<= constraint in canonical >= or > form.

    ``op`` is one of ``>=``, ``>``, ``<=``, ``<``; the <= forms are negated.
    """
    if op in (">=", "ge"):
        return HalfPlaneConstraint(a, b, c, strict=False)
    if op in (">", "gt"):
        return HalfPlaneConstraint(a, b, c, strict=True)
    if op in ("<=", "le"):
        return HalfPlaneConstraint(-a, -b, -c, strict=False)
    if op in ("<", "lt"):
        return HalfPlaneConstraint(-a, -b, -c, strict=True)
    raise InputError(f"unknown constraint operator {op!r}")


# ---------------------------------------------------------------------------
# canonical forms produced by the input transformations


@dataclass
class CanonicalOne:
    """Instance with constraint x >= c1 (or >) and objective y."""

    px: np.ndarray
    py: np.ndarray
    qx: np.ndarray
    qy: np.ndarray
    c1: object
    strict1: bool
    # y' = value_scale * (f - delta); recover f = delta + y'/value_scale
    value_scale: object = 1
    delta: object = 0


@dataclass
class CanonicalTwo:
    """Instance with x >= c1 and a2*x + b2*y >= c2, objective y."""

    px: np.ndarray
    py: np.ndarray
    qx: np.ndarray
    qy: np.ndarray
    c1: object
    strict1: bool
    a2: object
    b2: object
    c2: object
    strict2: bool
    case: int  # paper-style sign case 1..4 (a=0 folded into 1 or 2)
    a_is_zero: bool
    swapped: bool
    value_scale: object = 1
    delta: object = 0

    @property
    def corner_y(self):
        """y-level of the L1/L2 intersection, exact in integer mode."""
        num = self.c2 - self.a2 * self.c1
        if isinstance(num, (int, np.integer)) or isinstance(num, Fraction):
            return Fraction(num) / Fraction(self.b2)
        return num / self.b2


@dataclass
class ParallelForm:
    """Result of transform_parallel: a strip, or a collapsed single bound."""

    kind: str  # "strip" | "single"
    px: np.ndarray
    py: np.ndarray
    qx: np.ndarray
    qy: np.ndarray
    lo: object = None  # x >= lo
    lo_strict: bool = False
    hi: object = None  # x <= hi (strip only)
    hi_strict: bool = False
    value_scale: object = 1
    delta: object = 0


def _mode_for(P, Q, *scalars) -> str:
    for s in scalars:
        if isinstance(s, float) and not s.is_integer():
            return "float"
    return detect_mode(P, Q)


def transform_one(P, Q, L: HalfPlaneConstraint, f: Objective, mode: str | None = None) -> CanonicalOne:
    """Map points by (x, y) -> (a*x + b*y, d*x + e*y); constraint becomes x >= c."""
    if f.kind != "linear":
        raise InputError("transform_one requires a linear objective")
    mode = mode or _mode_for(P, Q, float(L.a), float(L.b), float(L.c), float(f.p), float(f.q))
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)
    a, b, d, e = L.a, L.b, f.p, f.q
    return CanonicalOne(
        px=a * px + b * py,
        py=d * px + e * py,
        qx=a * qx + b * qy,
        qy=d * qx + e * qy,
        c1=L.c,
        strict1=L.strict,
    )


def _sign_case(a_sign: int, b_sign: int) -> int:
    if b_sign < 0:
        return 1 if a_sign <= 0 else 4
    return 2 if a_sign >= 0 else 3


def transform_two(
    P,
    Q,
    L1: HalfPlaneConstraint,
    L2: HalfPlaneConstraint,
    f: Objective,
    mode: str | None = None,
    eps: float = 0.0,
) -> CanonicalTwo:
    """Two-constraint canonicalisation.

    Scales the second constraint by D = a1*e - b1*d instead of dividing, so
    integer instances stay integral.  Raises SwapConstraintsSignal when L1 is
    parallel to the objective (the caller retries swapped) and
    ParallelConstraintsSignal when the constraints are mutually parallel.
    """
    if f.kind != "linear":
        raise InputError("transform_two requires a linear objective")
    a1, b1, c1 = L1.a, L1.b, L1.c
    a2, b2, c2 = L2.a, L2.b, L2.c
    d, e = f.p, f.q

    def _is_zero(v, scale):
        if eps == 0:
            return v == 0
        return abs(v) <= eps * scale

    cross = a1 * b2 - b1 * a2
    n1 = math.hypot(a1, b1)
    n2 = math.hypot(a2, b2)
    nf = math.hypot(d, e)
    if _is_zero(cross, n1 * n2):
        raise ParallelConstraintsSignal("constraints are parallel")
    D = a1 * e - b1 * d
    if _is_zero(D, n1 * nf):
        if _is_zero(a2 * e - b2 * d, n2 * nf):
            # both parallel to f, hence L1 || L2: unreachable past the cross
            # check, kept for belt and braces
            raise ParallelConstraintsSignal("both constraints parallel to the objective")
        raise SwapConstraintsSignal("L1 is parallel to the objective")

    mode = mode or _mode_for(P, Q, *(float(v) for v in (a1, b1, c1, a2, b2, c2, d, e)))
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)

    sgn = 1 if D > 0 else -1
    A2 = (a2 * e - b2 * d) * sgn
    B2 = cross * sgn
    C2 = c2 * D * sgn  # == c2 * |D|

    a_zero = _is_zero(A2, n2 * nf + abs(B2))
    a_sign = 0 if a_zero else (1 if A2 > 0 else -1)
    b_sign = 1 if B2 > 0 else -1  # B2 == 0 would mean parallel constraints

    return CanonicalTwo(
        px=a1 * px + b1 * py,
        py=d * px + e * py,
        qx=a1 * qx + b1 * qy,
        qy=d * qx + e * qy,
        c1=c1,
        strict1=L1.strict,
        a2=A2,
        b2=B2,
        c2=C2,
        strict2=L2.strict,
        case=_sign_case(a_sign, b_sign),
        a_is_zero=a_zero,
        swapped=False,
    )


def transform_parallel(
    P,
    Q,
    L1: HalfPlaneConstraint,
    L2: HalfPlaneConstraint,
    f: Objective,
    mode: str | None = None,
) -> ParallelForm:
    """Normalise two parallel constraints into a strip c_lo <= x <= c_hi.

    Constraints facing the same way collapse to the single tighter bound.
    An empty strip raises InfeasibleError.
    """
    if f.kind != "linear":
        raise InputError("transform_parallel requires a linear objective")
    a1, b1, c1 = L1.a, L1.b, L1.c
    a2, b2, c2 = L2.a, L2.b, L2.c
    d, e = f.p, f.q
    mode = mode or _mode_for(P, Q, *(float(v) for v in (a1, b1, c1, a2, b2, c2, d, e)))
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)

    if mode == "int":
        s = Fraction(int(a2), int(a1)) if a1 != 0 else Fraction(int(b2), int(b1))
        p_num, q_den = s.numerator, s.denominator  # q_den > 0
        gx_p = p_num * (a1 * px + b1 * py)
        gy_p = d * px + e * py
        gx_q = p_num * (a1 * qx + b1 * qy)
        gy_q = d * qx + e * qy
        # L1: sign(p) decides whether p*c1 bounds G from below or above
        bound1 = p_num * c1
        bound2 = q_den * c2  # always a lower bound on G
        lower = [(bound2, L2.strict)]
        upper = []
        (lower if p_num > 0 else upper).append((bound1, L1.strict))
    else:
        s = a2 / a1 if a1 != 0 else b2 / b1
        gx_p = a1 * px + b1 * py
        gy_p = d * px + e * py
        gx_q = a1 * qx + b1 * qy
        gy_q = d * qx + e * qy
        lower = [(c1, L1.strict)]
        upper = []
        (lower if s > 0 else upper).append((c2 / s, L2.strict))

    def _tightest(bounds, want_max):
        best = bounds[0]
        for b in bounds[1:]:
            if (b[0] > best[0]) == want_max and b[0] != best[0]:
                best = b
            elif b[0] == best[0]:
                best = (best[0], best[1] or b[1])
        return best

    if not upper:
        lo = _tightest(lower, want_max=True)
        return ParallelForm("single", gx_p, gy_p, gx_q, gy_q, lo=lo[0], lo_strict=lo[1])
    lo = _tightest(lower, want_max=True)
    hi = _tightest(upper, want_max=False)
    if lo[0] > hi[0] or (lo[0] == hi[0] and (lo[1] or hi[1])):
        raise InfeasibleError("empty parallel strip")
    return ParallelForm(
        "strip", gx_p, gy_p, gx_q, gy_q,
        lo=lo[0], lo_strict=lo[1], hi=hi[0], hi_strict=hi[1],
    )


def transform_ratio(P, Q, constraints, a, b, delta, mode: str | None = None):
    """Reduce objective b*y/(a*x) with target delta to y/x with target 0.

    Returns (px, py, qx, qy, constraints'), all exact in integer mode (the
    whole instance is scaled by the denominator of delta, which leaves the
    ratio y'/x' = f - delta unchanged).
    """
    if a == 0 or b == 0:
        raise DegenerateConstraintError("ratio objective needs a != 0 and b != 0")
    # a Fraction target keeps integer mode; only a non-integral float forces float
    extra = (delta,) if isinstance(delta, float) else ()
    mode = mode or _mode_for(P, Q, *(float(v) for v in (a, b)), *extra)
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)
    if mode == "int":
        dfrac = Fraction(delta)
        s, dnum = dfrac.denominator, dfrac.numerator
    else:
        s, dnum = 1.0, float(delta)

    nx_p = s * a * px
    ny_p = s * b * py - dnum * a * px
    nx_q = s * a * qx
    ny_q = s * b * qy - dnum * a * qx

    flip = (a * b) < 0
    out = []
    for L in constraints:
        al, be, c = L.a, L.b, L.c
        ca = al * s * b + be * a * dnum
        cb = be * a * s
        cc = a * b * c * s * s
        if flip:
            ca, cb, cc = -ca, -cb, -cc
        out.append(HalfPlaneConstraint(ca, cb, cc, L.strict))
    return nx_p, ny_p, nx_q, ny_q, out


def canonicalize_objective(P, Q, constraints, f: Objective, delta=0, mode: str | None = None):
    """Rewrite a linear-objective instance so the objective is exactly y.

    The new y-coordinate is value_scale * (f - delta) summed over a pair, with
    the delta shift applied to Q points only.  Returns
    (px, py, qx, qy, constraints', value_scale).
    """
    if f.kind != "linear":
        raise InputError("expected a linear objective")
    d, e = f.p, f.q
    extra = (delta,) if isinstance(delta, float) else ()
    mode = mode or _mode_for(P, Q, float(d), float(e), *extra)
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)
    if mode == "int":
        dfrac = Fraction(delta)
        s, dnum = dfrac.denominator, dfrac.numerator
    else:
        s, dnum = 1.0, float(delta)

    out = []
    if e != 0:
        nx_p, ny_p = px, s * (d * px + e * py)
        nx_q, ny_q = qx, s * (d * qx + e * qy) - dnum
        flip = e < 0
        for L in constraints:
            ca = s * (L.a * e - L.b * d)
            cb = L.b
            cc = L.c * s * e - L.b * dnum
            if flip:
                ca, cb, cc = -ca, -cb, -cc
            out.append(HalfPlaneConstraint(ca, cb, cc, L.strict))
    else:
        nx_p, ny_p = py, s * d * px
        nx_q, ny_q = qy, s * d * qx - dnum
        flip = d < 0
        for L in constraints:
            ca = L.b * s * d
            cb = L.a
            cc = L.c * s * d - L.a * dnum
            if flip:
                ca, cb, cc = -ca, -cb, -cc
            out.append(HalfPlaneConstraint(ca, cb, cc, L.strict))
    return nx_p, ny_p, nx_q, ny_q, out, s


# ---------------------------------------------------------------------------
# feasible polygon (half-plane intersection) for the multi-constraint engine


@dataclass
class FeasiblePolygon:
    vertices: list  # (x, y), sorted by nonincreasing y
    levels: list  # distinct vertex y values, descending
    slab_pairs: list  # (left_constraint, right_constraint) per strip
    bounded_without_box: bool
    constraints: list  # constraints actually used (box included if added)


def bounding_box_for(px, py, qx, qy):
    """Axis box at twice the coordinate span of the pairwise sums."""

    def _range(pv, qv):
        lo = np.min(pv) + np.min(qv)
        hi = np.max(pv) + np.max(qv)
        span = hi - lo
        pad = span if span > 0 else max(abs(lo), 1)
        return lo - pad, hi + pad

    xlo, xhi = _range(px, qx)
    ylo, yhi = _range(py, qy)
    return xlo, xhi, ylo, yhi


def _normals_bounded(constraints) -> bool:
    angles = sorted(math.atan2(L.b, L.a) for L in constraints)
    if len(angles) < 3:
        return False
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2 * math.pi - angles[-1])
    return max(gaps) < math.pi - 1e-12


def _line_intersection(L1, L2, exact: bool):
    det = L1.a * L2.b - L2.a * L1.b
    if det == 0:
        return None
    if exact:
        det = Fraction(int(det))
        x = (Fraction(int(L1.c)) * int(L2.b) - Fraction(int(L2.c)) * int(L1.b)) / det
        y = (Fraction(int(L1.a)) * int(L2.c) - Fraction(int(L2.a)) * int(L1.c)) / det
    else:
        x = (L1.c * L2.b - L2.c * L1.b) / det
        y = (L1.a * L2.c - L2.a * L1.c) / det
    return x, y


def feasible_polygon(constraints, bounding_box=None, eps: float = DEFAULT_EPS, mode: str | None = None) -> FeasiblePolygon:
    """Vertices of the intersection of the half-planes, closed with a box when
    the intersection is unbounded.  Strict constraints are treated as their
    closures here; the counting engines apply the true strictness.
    """
    constraints = list(constraints)
    if not constraints:
        raise InputError("feasible_polygon needs at least one constraint")
    if mode is None:
        mode = "int" if all(
            float(v).is_integer() for L in constraints for v in (L.a, L.b, L.c)
        ) else "float"
    exact = mode == "int"
    bounded = _normals_bounded(constraints)
    used = list(constraints)
    if not bounded:
        if bounding_box is None:
            raise InputError("unbounded intersection requires a bounding box")
        xlo, xhi, ylo, yhi = bounding_box
        used += [
            HalfPlaneConstraint(1, 0, xlo),
            HalfPlaneConstraint(-1, 0, -xhi),
            HalfPlaneConstraint(0, 1, ylo),
            HalfPlaneConstraint(0, -1, -yhi),
        ]

    tol = 0 if exact else eps
    verts = []
    for i in range(len(used)):
        for j in range(i + 1, len(used)):
            pt = _line_intersection(used[i], used[j], exact)
            if pt is None:
                continue
            x, y = pt
            if all(L.residual(x, y) >= -tol for L in used):
                verts.append((x, y))
    # dedupe (exact in int mode, eps-snapped in float mode)
    uniq = []
    for x, y in verts:
        dup = False
        for ux, uy in uniq:
            if exact:
                dup = ux == x and uy == y
            else:
                dup = abs(float(ux - x)) <= 1e-7 and abs(float(uy - y)) <= 1e-7
            if dup:
                break
        if not dup:
            uniq.append((x, y))
    if not uniq:
        raise InfeasibleError("constraint system has empty intersection")

    cx = sum(v[0] for v in uniq) / len(uniq)
    cy = sum(v[1] for v in uniq) / len(uniq)
    uniq.sort(key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))
    by_y = sorted(uniq, key=lambda v: (float(-v[1]), float(v[0])))

    levels = []
    for _, y in by_y:
        if not levels or levels[-1] != y:
            levels.append(y)

    slab_pairs = []
    for j in range(len(levels) - 1):
        ymid = (levels[j] + levels[j + 1]) / (2 if not exact else Fraction(2))
        left = right = None
        left_bound = right_bound = None
        for L in used:
            if L.a == 0:
                continue
            bound = (Fraction(int(L.c)) - Fraction(int(L.b)) * ymid) / int(L.a) if exact \
                else (L.c - L.b * ymid) / L.a
            if L.a > 0:  # x >= bound
                if left_bound is None or bound > left_bound:
                    left, left_bound = L, bound
            else:  # x <= bound
                if right_bound is None or bound < right_bound:
                    right, right_bound = L, bound
        if left is None or right is None:
            raise InfeasibleError("strip unbounded in x; bounding box missing")
        slab_pairs.append((left, right))

    return FeasiblePolygon(
        vertices=by_y,
        levels=levels,
        slab_pairs=slab_pairs,
        bounded_without_box=bounded,
        constraints=used,
    )

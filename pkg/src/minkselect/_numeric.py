"""Numeric-mode plumbing: integer vs float coordinates and bound handling.

Two modes run through the whole library:

* ``int`` mode: all coordinates and constraint coefficients are (numpy)
  int64; every comparison is exact.  Rational bounds that arise from
  transformations are kept as ``fractions.Fraction`` scalars and reduced to
  integer thresholds at the comparison boundary (``rationalize_threshold``),
  so bulk arrays never leave int64.
* ``float`` mode: float64 arrays, with a boundary tolerance ``eps``.  A
  constraint ``a*x + b*y >= c`` is satisfied when the residual is ``>= -eps``
  and the strict form when it is ``> +eps``; engines realise the same rule by
  shifting the bound once (``effective_bound``) and comparing purely after
  that.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import InputError

DEFAULT_EPS = 1e-9

NEG_INF = float("-inf")
POS_INF = float("inf")


def detect_mode(*arrays) -> str:
    for arr in arrays:
        for v in np.asarray(arr).ravel().tolist():
            if isinstance(v, Fraction):
                continue
            if isinstance(v, float) and not float(v).is_integer():
                return "float"
    return "int"


def as_points(points, mode: str):
    """Coerce a sequence of (x, y) pairs into two 1-d arrays (xs, ys)."""
    arr = np.asarray(points, dtype=np.int64 if mode == "int" else np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("points must be a sequence of (x, y) pairs")
    if not np.all(np.isfinite(arr.astype(np.float64))):
        raise InputError("point coordinates must be finite")
    return arr[:, 0].copy(), arr[:, 1].copy()


def effective_bound(c, strict: bool, eps: float):
    """Shift a constraint bound once so later comparisons are tolerance-free.

    Non-strict ``sum >= c`` becomes ``sum >= c - eps``; strict ``sum > c``
    becomes ``sum > c + eps``.  With ``eps == 0`` this is the identity.
    """
    if eps == 0:
        return c
    return c + eps if strict else c - eps


def rationalize_threshold(t, strict_greater: bool):
    """Reduce a Fraction threshold to an equivalent integer one.

    For integer values v: ``v > p/q``  iff  ``v > floor(p/q)`` when p/q is an
    integer, else ``v >= floor(p/q) + 1``; similarly ``v >= p/q`` iff
    ``v >= ceil(p/q)``.  Returns ``(threshold, strict_greater)`` usable
    directly against int arrays.  Non-Fraction thresholds pass through.
    """
    if not isinstance(t, Fraction):
        return t, strict_greater
    if t.denominator == 1:
        return int(t), strict_greater
    # non-integral rational: > and >= coincide
    if strict_greater:
        return math.floor(t) + 1, False
    return math.ceil(t), False


def satisfies(value, bound_eff, strict: bool) -> bool:
    """Scalar feasibility test against an already-shifted bound."""
    return value > bound_eff if strict else value >= bound_eff

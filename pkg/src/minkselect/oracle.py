"""Exhaustive O(n^2) reference implementations.

These define ground truth for every query type: enumerate all pairwise sums,
classify feasibility with the same boundary rule the engines use, and answer
selection / ranking / finding by sorting and scanning.  Integer instances are
evaluated with exact arithmetic (Fractions for ratio objectives and rational
targets), so oracle-equality tests need no tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numeric import as_points, detect_mode
from .errors import NoFeasibleValueError, RankRangeError
from .geometry import Objective


@dataclass
class FeasibleEnumeration:
    p_idx: np.ndarray
    q_idx: np.ndarray
    sum_x: np.ndarray
    sum_y: np.ndarray

    def __len__(self):
        return len(self.p_idx)

    def values(self, objective: Objective) -> list:
        """Objective values per feasible pair, exact in integer mode."""
        out = []
        int_mode = self.sum_x.dtype.kind in "iu"
        for x, y in zip(self.sum_x.tolist(), self.sum_y.tolist()):
            if objective.kind == "linear":
                out.append(objective.p * x + objective.q * y)
            else:
                num = objective.q * y
                den = objective.p * x
                if den == 0:
                    out.append(math.inf)
                elif int_mode:
                    out.append(Fraction(num, den))
                else:
                    out.append(num / den)
        return out


def oracle_enumerate(P, Q, constraints, eps: float = 0.0, mode: str | None = None) -> FeasibleEnumeration:
    mode = mode or detect_mode(np.asarray(P, dtype=object), np.asarray(Q, dtype=object))
    px, py = as_points(P, mode)
    qx, qy = as_points(Q, mode)
    sx = px[:, None] + qx[None, :]
    sy = py[:, None] + qy[None, :]
    mask = np.ones(sx.shape, dtype=bool)
    for L in constraints:
        r = L.a * sx + L.b * sy - L.c
        mask &= (r > eps) if L.strict else (r >= -eps)
    pi, qi = np.nonzero(mask)  # row-major: lexicographic (p, q) order
    return FeasibleEnumeration(pi, qi, sx[pi, qi], sy[pi, qi])


def oracle_select(enum: FeasibleEnumeration, objective: Objective, k: int):
    vals = sorted(enum.values(objective), reverse=True)
    if not (1 <= k <= len(vals)):
        raise RankRangeError(f"k={k} outside [1, {len(vals)}]")
    return vals[k - 1]


def oracle_rank(enum: FeasibleEnumeration, objective: Objective, t) -> int:
    return sum(1 for v in enum.values(objective) if v > t) + 1


def oracle_find(enum: FeasibleEnumeration, objective: Objective, delta):
    """(distance, value, p, q) minimising |value - delta|, lexicographic ties."""
    if len(enum) == 0:
        raise NoFeasibleValueError("no feasible pair")
    int_mode = enum.sum_x.dtype.kind in "iu"
    if int_mode and not isinstance(delta, float):
        delta = Fraction(delta)
    best = None
    for v, p, q in zip(enum.values(objective), enum.p_idx.tolist(), enum.q_idx.tolist()):
        d = math.inf if v == math.inf else abs(v - delta)
        if best is None or d < best[0]:
            best = (d, v, p, q)
    return best

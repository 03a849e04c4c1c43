"""Sequence-analysis reductions.

A segment statistic over a sequence becomes a constrained pairwise-sum query
over prefix points: P holds (index-or-width, prefix-sum) and Q the negated
prefixes, so a pair p_j + q_{i-1} carries (length-or-width, segment sum).
Length bounds turn into a strip on x; k-th sum selection runs the windowed
strip decomposition, and density finding with a target runs the ratio
finder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .decomposition import construct_matrices, lcss_blocks
from .errors import InfeasibleError, InputError, RankRangeError
from .finding import find_ratio
from .geometry import HalfPlaneConstraint
from .sorted_matrix import ImplicitSortedMatrix, MatrixCollection

__all__ = ["Sequence", "WeightedSequence", "SegmentResult", "lcss_select", "sum_select", "density_find"]


@dataclass
class Sequence:
    values: list

    def __post_init__(self):
        if not self.values:
            raise InputError("sequence must be nonempty")

    def __len__(self):
        return len(self.values)


@dataclass
class WeightedSequence:
    pairs: list  # (value, width) with width > 0

    def __post_init__(self):
        if not self.pairs:
            raise InputError("sequence must be nonempty")
        for i, (_, w) in enumerate(self.pairs):
            if not w > 0:
                raise InputError(f"width at position {i + 1} must be positive")

    def __len__(self):
        return len(self.pairs)


@dataclass
class SegmentResult:
    i: int  # 1-based, inclusive
    j: int
    statistic: object  # segment sum or density
    distance: Optional[object] = None


def _prefix_arrays(values):
    vals = list(values)
    int_mode = all(isinstance(v, (int, np.integer)) or (isinstance(v, float) and v.is_integer()) for v in vals)
    dtype = np.int64 if int_mode else np.float64
    pre = np.zeros(len(vals) + 1, dtype=dtype)
    pre[1:] = np.cumsum(np.asarray(vals, dtype=dtype))
    return pre


class _LcssEngine:
    """Windowed matrix collection over feasible-length segments."""

    def __init__(self, seq, l: int, u: int):
        seq = seq.values if isinstance(seq, Sequence) else list(seq)
        n = len(seq)
        if not (1 <= l < u <= n):
            raise InputError("need 1 <= l < u <= len(sequence)")
        pre = _prefix_arrays(seq)
        idx = np.arange(n + 1, dtype=np.int64)
        # p_h = (h, prefix_h); q_i = (-i, -prefix_i); pair x = length, y = sum
        self.py = pre
        self.qy = -pre
        px = idx
        qx = -idx
        self.coll = MatrixCollection()
        for _, p_ids, q1, q2 in lcss_blocks(n, l, u):
            if len(q1):
                sub = construct_matrices(px[p_ids], pre[p_ids], qx[q1], -pre[q1], l)
                self._merge(sub, p_ids, q1)
            if len(q2):
                sub = construct_matrices(-px[p_ids], pre[p_ids], idx[q2], -pre[q2], -u)
                self._merge(sub, p_ids, q2)
        self.total = self.coll.total_entries

    def _merge(self, sub, p_ids, q_ids):
        for M in sub.matrices:
            self.coll.append(ImplicitSortedMatrix(M.rows, M.cols, p_ids[M.row_ids], q_ids[M.col_ids]))

    def select(self, k: int, rng=None):
        if self.total == 0:
            raise InfeasibleError("no feasible segment")
        if not (1 <= k <= self.total):
            raise RankRangeError(f"k={k} outside [1, {self.total}]")
        value = self.coll.select_kth_largest(k, rng=rng)
        return value, self._best_witness(value)

    def _best_witness(self, value):
        """Smallest (start, end) among segments attaining the value."""
        best = None
        for M in self.coll.matrices:
            pos = np.searchsorted(M.rows, value - M.cols, side="left")
            hi = np.searchsorted(M.rows, value - M.cols, side="right")
            for j in range(len(M.cols)):
                if pos[j] < hi[j]:
                    end = int(M.row_ids[pos[j]:hi[j]].min())
                    start = int(M.col_ids[j]) + 1
                    cand = (start, end)
                    if best is None or cand < best:
                        best = cand
        return best


def lcss_select(seq, l: int, u: int, k: int, rng=None):
    """k-th largest segment sum among segments with length in [l, u]."""
    eng = _LcssEngine(seq, l, u)
    value, (i, j) = eng.select(k, rng=rng)
    return SegmentResult(i, j, value)


def sum_select(seq, k: int, rng=None):
    """k-th largest segment sum over all nonempty segments."""
    seq = seq.values if isinstance(seq, Sequence) else list(seq)
    n = len(seq)
    if n == 1:
        if k != 1:
            raise RankRangeError("single-element sequence has one segment")
        return SegmentResult(1, 1, seq[0])
    return lcss_select(seq, 1, n, k, rng=rng)


def density_find(ws, l, u, delta, eps: float = 0.0) -> SegmentResult:
    """Feasible segment (width in [l, u]) with density closest to delta."""
    ws = ws if isinstance(ws, WeightedSequence) else WeightedSequence(list(ws))
    if not (0 < l < u):
        raise InputError("need 0 < l < u")
    svals = [s for s, _ in ws.pairs]
    wvals = [w for _, w in ws.pairs]
    pre_s = _prefix_arrays(svals)
    pre_w = _prefix_arrays(wvals)
    P = np.column_stack([pre_w, pre_s])
    Q = np.column_stack([-pre_w, -pre_s])
    cons = [HalfPlaneConstraint(1, 0, l), HalfPlaneConstraint(-1, 0, -u)]
    try:
        res = find_ratio(P, Q, cons, 1, 1, delta, eps=eps)
    except InfeasibleError:
        raise InfeasibleError("no segment with width in [l, u]")
    p, q = res.witness
    return SegmentResult(q + 1, p, res.value, res.distance)

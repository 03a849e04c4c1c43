"""Implicit sorted matrices (row vector + column vector) and selection /
ranking over collections of them.

A matrix is never materialised: entry (i, j) is rows[i] + cols[j], which is
nondecreasing along every row and column because both vectors are sorted.
Per-matrix queries use the classic monotone staircase walk (instrumented, at
most rows+cols cell visits).  Collection-level queries run on flattened
arrays with a vectorised per-segment binary search, and k-th selection is a
rank-space search whose pivots are random actual entries drawn uniformly from
the current candidate window, so it terminates exactly in expectation
O(log(total entries)) rounds of O(total side) counting.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import NEG_INF, POS_INF, rationalize_threshold
from .errors import RankRangeError

__all__ = [
    "ImplicitSortedMatrix",
    "MatrixCollection",
    "count_greater",
    "rank_in_collection",
    "select_kth_in_collection",
    "min_entry_at_least",
    "max_entry_below",
]


def _coerce_threshold(t, strict, int_mode):
    """Reduce Fraction thresholds to exact integer ones in int mode."""
    if isinstance(t, Fraction):
        if int_mode:
            return rationalize_threshold(t, strict)
        return float(t), strict
    return t, strict


class ImplicitSortedMatrix:
    """rows[i] + cols[j] with both vectors nondecreasing.

    ``row_ids``/``col_ids`` carry the provenance of each entry back to the
    originating points of P and Q.
    """

    def __init__(self, rows, cols, row_ids=None, col_ids=None):
        self.rows = np.asarray(rows)
        self.cols = np.asarray(cols)
        self.row_ids = None if row_ids is None else np.asarray(row_ids)
        self.col_ids = None if col_ids is None else np.asarray(col_ids)
        self.last_walk_cells = 0

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    @property
    def side(self) -> int:
        return len(self.rows) + len(self.cols)

    @property
    def n_entries(self) -> int:
        return len(self.rows) * len(self.cols)

    def entry(self, i, j):
        return self.rows[i] + self.cols[j]

    def _int_mode(self):
        return self.rows.dtype.kind in "iu"

    def count_greater(self, t) -> int:
        """|{(i, j): rows[i] + cols[j] > t}| via a staircase walk."""
        return self._count(t, strict=True)

    def count_at_least(self, t) -> int:
        return self._count(t, strict=False)

    def _count(self, t, strict):
        t, strict = _coerce_threshold(t, strict, self._int_mode())
        rows, cols = self.rows, self.cols
        n, m = len(rows), len(cols)
        if n == 0 or m == 0:
            return 0
        if t == POS_INF:
            self.last_walk_cells = 0
            return 0
        if t == NEG_INF:
            self.last_walk_cells = 0
            return n * m
        j = m
        count = 0
        cells = 0
        for i in range(n):
            ri = rows[i]
            if strict:
                while j > 0 and ri + cols[j - 1] > t:
                    j -= 1
                    cells += 1
            else:
                while j > 0 and ri + cols[j - 1] >= t:
                    j -= 1
                    cells += 1
            cells += 1
            count += m - j
        self.last_walk_cells = cells
        return count

    def min_entry_at_least(self, t, inclusive: bool = True):
        """Smallest entry >= t (or > t), with its (i, j); None when absent."""
        t, k_strict = _coerce_threshold(t, not inclusive, self._int_mode())
        inclusive = not k_strict
        rows, cols = self.rows, self.cols
        n, m = len(rows), len(cols)
        if n == 0 or m == 0:
            return None
        best = None
        j = m
        cells = 0
        for i in range(n):
            ri = rows[i]
            if inclusive:
                while j > 0 and ri + cols[j - 1] >= t:
                    j -= 1
                    cells += 1
            else:
                while j > 0 and ri + cols[j - 1] > t:
                    j -= 1
                    cells += 1
            cells += 1
            if j < m:
                v = ri + cols[j]
                if best is None or v < best[0]:
                    best = (v, i, j)
        self.last_walk_cells = cells
        return best

    def max_entry_below(self, t, inclusive: bool = False):
        """Largest entry < t (or <= t), with its (i, j); None when absent."""
        t, k_strict = _coerce_threshold(t, inclusive, self._int_mode())
        inclusive = k_strict
        rows, cols = self.rows, self.cols
        n, m = len(rows), len(cols)
        if n == 0 or m == 0:
            return None
        best = None
        j = 0
        cells = 0
        for i in range(n - 1, -1, -1):
            ri = rows[i]
            if inclusive:
                while j < m and ri + cols[j] <= t:
                    j += 1
                    cells += 1
            else:
                while j < m and ri + cols[j] < t:
                    j += 1
                    cells += 1
            cells += 1
            if j > 0:
                v = ri + cols[j - 1]
                if best is None or v > best[0]:
                    best = (v, i, j - 1)
        self.last_walk_cells = cells
        return best


def _seg_bisect(values, lo, hi, targets, right):
    """First index in [lo_i, hi_i) of the sorted segment of ``values`` where
    values[idx] > targets[i] (right=True) or >= targets[i] (right=False).
    """
    lo = lo.astype(np.int64, copy=True)
    hi = hi.astype(np.int64, copy=True)
    while True:
        active = lo < hi
        if not active.any():
            break
        mid = (lo + hi) >> 1
        probe = values[np.where(active, mid, 0)]
        go_right = (probe <= targets) if right else (probe < targets)
        go_right &= active
        stay = active & ~go_right
        lo[go_right] = mid[go_right] + 1
        hi[stay] = mid[stay]
    return lo


class MatrixCollection:
    def __init__(self, matrices=()):
        self.matrices = [M for M in matrices if M.n_entries > 0]
        self._flat = None

    def append(self, M: ImplicitSortedMatrix):
        if M.n_entries > 0:
            self.matrices.append(M)
            self._flat = None

    def extend(self, ms):
        for M in ms:
            self.append(M)

    @property
    def total_side(self) -> int:
        return sum(M.side for M in self.matrices)

    @property
    def total_entries(self) -> int:
        return sum(M.n_entries for M in self.matrices)

    def _int_mode(self):
        return bool(self.matrices) and self.matrices[0].rows.dtype.kind in "iu"

    def _flatten(self):
        # orient each matrix so the flattened "row" side is the shorter one
        if self._flat is not None:
            return self._flat
        rvals, roff_lo, roff_hi, cvals = [], [], [], []
        pos = 0
        for M in self.matrices:
            r, c = (M.rows, M.cols) if len(M.rows) <= len(M.cols) else (M.cols, M.rows)
            rvals.append(np.asarray(r))
            cvals.append(np.asarray(c))
            roff_lo.append(np.full(len(r), pos, dtype=np.int64))
            roff_hi.append(np.full(len(r), pos + len(c), dtype=np.int64))
            pos += len(c)
        if not rvals:
            self._flat = (np.empty(0), np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0))
        else:
            self._flat = (
                np.concatenate(rvals),
                np.concatenate(roff_lo),
                np.concatenate(roff_hi),
                np.concatenate(cvals),
            )
        return self._flat

    def _count(self, t, strict):
        t, strict = _coerce_threshold(t, strict, self._int_mode())
        if t == NEG_INF:
            return self.total_entries
        if t == POS_INF:
            return 0
        rows, lo, hi, cols = self._flatten()
        if len(rows) == 0:
            return 0
        if len(self.matrices) == 1:
            pos = np.searchsorted(cols, t - rows, side="right" if strict else "left")
            return int(len(rows) * len(cols) - pos.sum())
        targets = t - rows
        # entries > t  <=>  col > t - row; first such col via bisect
        pos = _seg_bisect(cols, lo, hi, targets, right=strict)
        return int(np.sum(hi - pos))

    def count_greater(self, t) -> int:
        return self._count(t, strict=True)

    def count_at_least(self, t) -> int:
        return self._count(t, strict=False)

    def rank_of(self, t) -> int:
        """Number of entries strictly greater than t, plus one."""
        return self.count_greater(t) + 1

    def _pos_gt(self, cols, wl, wh, value, rows):
        """Per row: first column position in [wl, wh) with row + col > value."""
        if value == NEG_INF:
            return wl.copy()
        if value == POS_INF:
            return wh.copy()
        if len(self.matrices) == 1:
            pos = np.searchsorted(cols, value - rows, side="right")
            return np.clip(pos, wl, wh)
        return _seg_bisect(cols, wl, wh, value - rows, right=True)

    _MATERIALIZE = 256

    def select_kth_largest(self, k: int, rng=None, window=None, with_rank: bool = False):
        """k-th largest entry over all matrices, multiset semantics.

        Quickselect on the entry values: the candidate window (lo, hi] shrinks
        around the answer with a random in-window entry as pivot, per-row
        window positions narrowing alongside so late rounds touch few rows.
        ``window=(lo, hi, count_greater(hi))`` warm-starts the search;
        ``with_rank`` also returns count_greater(answer).
        """
        total = self.total_entries
        if not (1 <= k <= total):
            raise RankRangeError(f"k={k} outside [1, {total}]")
        if rng is None:
            rng = np.random.default_rng(0)
        rows, off_lo, off_hi, cols = self._flatten()
        int_mode = self._int_mode()
        if window is None:
            hi = max(M.rows[-1] + M.cols[-1] for M in self.matrices)
            lo = min(M.rows[0] + M.cols[0] for M in self.matrices)
            lo = int(lo) - 1 if int_mode else NEG_INF
            cg_hi = 0
        else:
            lo, hi, cg_hi = window
        wl = self._pos_gt(cols, off_lo, off_hi, lo, rows)
        wh = self._pos_gt(cols, off_lo, off_hi, hi, rows)
        act = wh > wl
        rows_a, wl, wh = rows[act], wl[act], wh[act]

        def prev_value(v):
            return v - 1 if int_mode else float(np.nextafter(v, NEG_INF))

        while True:
            widths = wh - wl
            W = int(widths.sum())
            kk = k - cg_hi  # rank of the answer within (lo, hi]
            if W <= self._MATERIALIZE:
                vals = np.concatenate(
                    [cols[a:b] + r for r, a, b in zip(rows_a.tolist(), wl.tolist(), wh.tolist())]
                ) if W else np.empty(0, dtype=cols.dtype)
                vals[::-1].sort()
                value = vals[kk - 1]
                if with_rank:
                    return value, cg_hi + int((vals > value).sum())
                return value
            cum = np.cumsum(widths)
            r = int(rng.integers(W))
            ridx = int(np.searchsorted(cum, r, side="right"))
            offset = r - (int(cum[ridx - 1]) if ridx else 0)
            pivot = rows_a[ridx] + cols[int(wl[ridx]) + offset]
            if pivot == hi:
                # split off the entries equal to hi so the window shrinks
                wq = self._pos_gt(cols, wl, wh, prev_value(hi), rows_a)
                mult_hi = int((wh - wq).sum())
                if cg_hi + mult_hi >= k:
                    return (hi, cg_hi) if with_rank else hi
                cg_hi += mult_hi
                hi = prev_value(hi)
                wh = wq
            else:
                wp = self._pos_gt(cols, wl, wh, pivot, rows_a)
                above = int((wh - wp).sum())  # entries in (pivot, hi]
                if cg_hi + above >= k:
                    lo = pivot
                    wl = wp
                else:
                    hi = pivot
                    cg_hi += above
                    wh = wp
            act = wh > wl
            rows_a, wl, wh = rows_a[act], wl[act], wh[act]

    def locate(self, value):
        """Some (matrix, i, j) with entry == value, or None."""
        for M in self.matrices:
            pos = np.searchsorted(M.cols, value - M.rows)
            ok = pos < len(M.cols)
            if not ok.any():
                continue
            idx = np.flatnonzero(ok & (np.where(ok, M.cols[np.minimum(pos, len(M.cols) - 1)], 0) + M.rows == value))
            if len(idx):
                i = int(idx[0])
                return M, i, int(pos[i])
        return None


# --- spec-level functional wrappers ---------------------------------------


def count_greater(M: ImplicitSortedMatrix, t) -> int:
    return M.count_greater(t)


def rank_in_collection(coll: MatrixCollection, t) -> int:
    return coll.rank_of(t)


def select_kth_in_collection(coll: MatrixCollection, k: int, rng=None):
    return coll.select_kth_largest(k, rng=rng)


def min_entry_at_least(M: ImplicitSortedMatrix, t):
    hit = M.min_entry_at_least(t, inclusive=True)
    return None if hit is None else hit


def max_entry_below(M: ImplicitSortedMatrix, t):
    hit = M.max_entry_below(t, inclusive=False)
    return None if hit is None else hit

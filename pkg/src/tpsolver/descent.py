"""Search for the descent distance: the smallest gap between a moving row
and a fixed column.

Three strategies share one contract, returning ``(d, i, j, examined)``
where ``(i, j)`` achieves the minimum ``d`` and ``examined`` counts the
gaps actually evaluated:

* naive: full scan of moving rows x fixed columns, first minimum in
  row-major order;
* version A: same scan, started at a shifting position of the matrix and
  stopped at the first zero gap;
* version B: per-row mode only, reads cached branch minima, so one row of
  the cache is enough.

The scans are the hot loop of the whole solver and are compiled with numba.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .forest import FIXED, MOVING, NONE, ForestState

INT64_MAX = np.iinfo(np.int64).max

#: inverse golden ratio; successive start ranks r' = r + floor(K m n) mod m n
#: then spread as evenly as possible over the matrix
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@numba.njit(cache=True, nogil=True)
def _scan_naive(alpha, beta, c, row_on, col_on):
    m, n = c.shape
    best = INT64_MAX
    bi = -1
    bj = -1
    count = 0
    for i in range(m):
        if not row_on[i]:
            continue
        ai = alpha[i]
        for j in range(n):
            if col_on[j]:
                g = ai - beta[j] - c[i, j]
                count += 1
                if g < best:
                    best = g
                    bi = i
                    bj = j
    return best, bi, bj, count


@numba.njit(cache=True, nogil=True)
def _scan_from(alpha, beta, c, row_on, col_on, start):
    m, n = c.shape
    i0 = start // n
    j0 = start - i0 * n
    best = INT64_MAX
    bi = -1
    bj = -1
    count = 0
    for t in range(m + 1):
        i = (i0 + t) % m
        if not row_on[i]:
            continue
        lo = j0 if t == 0 else 0
        hi = j0 if t == m else n
        ai = alpha[i]
        for j in range(lo, hi):
            if col_on[j]:
                g = ai - beta[j] - c[i, j]
                count += 1
                if g < best:
                    best = g
                    bi = i
                    bj = j
                    if g == 0:
                        return best, bi, bj, count
    return best, bi, bj, count


class ScanCursor:
    """Start rank of the version A scan in ``[0, m n)``."""

    __slots__ = ("r", "size", "step")

    def __init__(self, m: int, n: int, r: int = 0):
        self.size = m * n
        self.step = math.floor(GOLDEN * self.size) % self.size if self.size else 0
        self.r = r % self.size

    def advance(self) -> int:
        self.r = (self.r + self.step) % self.size
        return self.r


_warm = False


def warmup() -> None:
    """Load the compiled scans once so that later timings exclude it."""
    global _warm
    if _warm:
        return
    z = np.zeros(1, dtype=np.int64)
    on = np.ones(1, dtype=np.bool_)
    c = np.zeros((1, 1), dtype=np.int64)
    c.flags.writeable = False  # instance matrices are frozen
    _scan_naive(z, z, c, on, on)
    _scan_from(z, z, c, on, on, 0)
    _warm = True


def _masks(state: ForestState):
    m = state.m
    member = state.member
    return member[:m] == MOVING, member[m : state.P] == FIXED


def _check(d, i, state):
    if i < 0:
        raise RuntimeError("descent with no moving row or no fixed column")
    if d < 0:
        raise RuntimeError(f"negative gap {d}: heights are inconsistent")


def find_naive(state: ForestState) -> tuple[int, int, int, int]:
    rows, cols = _masks(state)
    d, i, j, count = _scan_naive(state.alpha, state.beta, state.c, rows, cols)
    _check(d, i, state)
    return int(d), int(i), int(j), int(count)


def find_version_a(state: ForestState, cursor: ScanCursor) -> tuple[int, int, int, int]:
    rows, cols = _masks(state)
    d, i, j, count = _scan_from(state.alpha, state.beta, state.c, rows, cols, cursor.r)
    cursor.advance()
    _check(d, i, state)
    return int(d), int(i), int(j), int(count)


def apply_descent(state: ForestState, d: int) -> None:
    """Lower every node of the moving tree by ``d``."""
    if d:
        m = state.m
        member = state.member
        state.alpha[member[:m] == MOVING] -= d
        state.beta[member[m : state.P] == MOVING] -= d


# ---------------------------------------------------------------------------
# Version B: cached branch distances


class BranchDistances:
    """For every row ``i`` and column ``j``, the smallest gap between ``B_j``
    and any row of the branch headed by ``A_i``, and the row achieving it.

    Heights inside a branch move together, so the cache stores the gap
    relative to the head row, ``rel[i, j] = min(alpha_r - alpha_i - c_rj)``
    over rows ``r`` of the branch; the actual distance is
    ``alpha_i - beta_j + rel[i, j]``.  A row of the cache only goes stale when
    the branch's node set changes, which happens only along the main path.
    """

    def __init__(self, rel: np.ndarray, argrow: np.ndarray):
        self.rel = rel
        self.argrow = argrow

    @classmethod
    def from_state(cls, state: ForestState) -> "BranchDistances":
        m, n = state.m, state.n
        rel = np.empty((m, n), dtype=np.int64)
        arg = np.empty((m, n), dtype=np.int64)
        cache = cls(rel, arg)
        # postorder over every tree: children rows before their ancestors
        order = []
        for root in range(state.P, len(state.parent)):
            order.extend(state.subtree(root))
        for v in reversed(order):
            if v < m:
                cache.refresh_row(state, v)
        return cache

    def copy(self) -> "BranchDistances":
        return BranchDistances(self.rel.copy(), self.argrow.copy())

    def delta(self, state: ForestState) -> np.ndarray:
        """Current distances ``delta[i, j]``."""
        return state.alpha[:, None] - state.beta[None, :] + self.rel

    def refresh_row(self, state: ForestState, i: int) -> None:
        """Recompute row ``i`` from its own profits and its grandchildren rows."""
        alpha = state.alpha
        best = -state.c[i].astype(np.int64)
        arg = np.full(state.n, i, dtype=np.int64)
        ai = alpha[i]
        for col in state.children(i):
            for r in state.children(col):
                cand = self.rel[r] + (alpha[r] - ai)
                cand_arg = self.argrow[r]
                better = (cand < best) | ((cand == best) & (cand_arg < arg))
                np.copyto(best, cand, where=better)
                np.copyto(arg, cand_arg, where=better)
        self.rel[i] = best
        self.argrow[i] = arg

    def equals(self, other: "BranchDistances") -> bool:
        return np.array_equal(self.rel, other.rel) and np.array_equal(self.argrow, other.argrow)


def find_version_b(state: ForestState, cache: BranchDistances) -> tuple[int, int, int, int]:
    """Descent for a moving tree that is a single male branch under ``Q_k``."""
    q = state.active
    head = state.first_child[q]
    if head == NONE or state.next_sibling[head] != NONE:
        raise RuntimeError("version B needs exactly one row under the moving stop")
    rows, cols = _masks(state)
    vals = state.beta.copy()
    np.subtract(state.alpha[head] + cache.rel[head], vals, out=vals)
    vals[~cols] = INT64_MAX
    j = int(np.argmin(vals))
    d = int(vals[j])
    if d == INT64_MAX:
        raise RuntimeError("descent with no fixed column")
    _check(d, 0, state)
    return d, int(cache.argrow[head, j]), j, state.n


def update_branch_distances(cache: BranchDistances, state: ForestState, nodes: list[int]) -> list[int]:
    """Refresh the cache rows of every row on the (pre-capture) main path.

    Must be called after :func:`~tpsolver.forest.apply_capture`.  Rows are
    processed deepest first in the new trees so that each refresh reads
    up-to-date grandchildren.  Returns the refreshed rows.
    """
    m = state.m
    dirty = {v for v in nodes if v < m}
    if not dirty:
        return []
    depth = {}
    parent = state.parent
    for v in dirty:
        d, u = 0, v
        while parent[u] != NONE:
            u = parent[u]
            d += 1
            if u in depth:
                d += depth[u]
                break
        depth[v] = d
    order = sorted(dirty, key=lambda v: -depth[v])
    for v in order:
        cache.refresh_row(state, v)
    return order

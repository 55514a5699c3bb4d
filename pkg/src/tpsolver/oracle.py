"""Independent reference solvers for cross-checking on small instances.

:func:`oracle_solve` runs successive shortest paths on the equivalent
min-cost flow problem with costs ``c_sup - c``; :func:`brute_force_solve`
enumerates every integer feasible flow.  Neither shares code with the
parametric tree solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance, validate

DEFAULT_MAX_CELLS = 400
_INF = np.iinfo(np.int64).max // 4


@dataclass
class OracleResult:
    cost: int
    flows: np.ndarray
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    augmentations: int = 0


def oracle_solve(inst: Instance, max_cells: int = DEFAULT_MAX_CELLS) -> OracleResult:
    """Maximize ``sum(c f)`` by successive shortest augmenting paths.

    Costs ``w = c_sup - c`` are positive, so zero potentials are a valid
    start; Dijkstra on reduced costs finds each shortest path from the
    source (supplies) to the sink (demands).  The final potentials give dual
    heights ``alpha = c_sup + pi_row`` and ``beta = pi_col``.
    """
    rep = validate(inst)
    if not rep:
        raise ValueError("invalid instance: " + "; ".join(rep.failures))
    m, n = inst.m, inst.n
    if m * n > max_cells:
        raise ValueError(f"oracle is capped at {max_cells} cells (instance has {m * n})")

    c_sup = int(inst.c.max()) + 1
    w = c_sup - inst.c.astype(np.int64)
    flow = np.zeros((m, n), dtype=np.int64)
    supply = inst.a.astype(np.int64).copy()  # residual s -> row
    demand = inst.b.astype(np.int64).copy()  # residual col -> t
    sent_row = np.zeros(m, dtype=np.int64)   # residual row -> s
    sent_col = np.zeros(n, dtype=np.int64)   # residual t -> col
    pi_s = 0
    pi_t = 0
    pi_r = np.zeros(m, dtype=np.int64)
    pi_c = np.zeros(n, dtype=np.int64)
    steps = 0

    while supply.sum() > 0:
        # Dijkstra over s, rows, cols, t with reduced costs (all >= 0)
        dr = np.full(m, _INF, dtype=np.int64)
        dc = np.full(n, _INF, dtype=np.int64)
        dt = _INF
        pred_r = np.full(m, -1, dtype=np.int64)  # -1: from s, else column index
        pred_c = np.full(n, -1, dtype=np.int64)  # row index
        done_r = np.zeros(m, dtype=bool)
        done_c = np.zeros(n, dtype=bool)
        pred_t = -1
        on = supply > 0
        dr[on] = pi_s - pi_r[on]
        while True:
            cand_r = np.where(done_r, _INF, dr)
            cand_c = np.where(done_c, _INF, dc)
            ir = int(np.argmin(cand_r))
            jc = int(np.argmin(cand_c))
            best = min(cand_r[ir], cand_c[jc], dt)
            if best >= _INF:
                raise RuntimeError("sink unreachable: instance is unbalanced")
            if dt == best:
                break
            if cand_r[ir] == best:
                done_r[ir] = True
                nd = best + w[ir] + pi_r[ir] - pi_c
                upd = (~done_c) & (nd < dc)
                dc[upd] = nd[upd]
                pred_c[upd] = ir
            else:
                done_c[jc] = True
                if demand[jc] > 0:
                    nd = best + pi_c[jc] - pi_t
                    if nd < dt:
                        dt = nd
                        pred_t = jc
                back = flow[:, jc] > 0
                nd = best - w[:, jc] + pi_c[jc] - pi_r
                upd = back & (~done_r) & (nd < dr)
                dr[upd] = nd[upd]
                pred_r[upd] = jc

        # bottleneck along t <- col <- row <- ... <- s
        path = []
        j = pred_t
        amount = demand[j]
        while True:
            i = int(pred_c[j])
            path.append((i, j))
            jb = int(pred_r[i])
            if jb < 0:
                amount = min(amount, supply[i])
                break
            amount = min(amount, flow[i, jb])
            path.append((i, -1 - jb))  # backward edge col jb -> row i
            j = jb
        amount = int(amount)
        for i, j in path:
            if j >= 0:
                flow[i, j] += amount
            else:
                flow[i, -1 - j] -= amount
        i0 = path[-1][0]
        supply[i0] -= amount
        sent_row[i0] += amount
        demand[pred_t] -= amount
        sent_col[pred_t] += amount

        # potentials: pi += min(dist, dist_t) keeps every reduced cost >= 0
        pi_r += np.minimum(dr, dt)
        pi_c += np.minimum(dc, dt)
        pi_t += dt
        steps += 1

    cost = inst.cost(flow)
    return OracleResult(cost, flow, c_sup + pi_r, pi_c.copy(), steps)


def brute_force_solve(inst: Instance, limit: int = 2_000_000) -> OracleResult:
    """Exhaustive search over integer feasible flows (tiny instances only).

    Integral optima exist, so maximizing over integer matrices is exact.
    """
    rep = validate(inst)
    if not rep:
        raise ValueError("invalid instance: " + "; ".join(rep.failures))
    m, n = inst.m, inst.n
    a = [int(x) for x in inst.a]
    col_left = [int(x) for x in inst.b]
    c = [[int(x) for x in row] for row in inst.c]
    best = [None, None]
    visited = [0]
    f = [[0] * n for _ in range(m)]

    def fill(i: int, j: int, row_left: int, value: int) -> None:
        visited[0] += 1
        if visited[0] > limit:
            raise ValueError("brute force search space too large")
        if i == m:
            if all(x == 0 for x in col_left) and (best[0] is None or value > best[0]):
                best[0] = value
                best[1] = [r[:] for r in f]
            return
        if j == n - 1:
            x = row_left
            if x > col_left[j]:
                return
            f[i][j] = x
            col_left[j] -= x
            nxt = a[i + 1] if i + 1 < m else 0
            fill(i + 1, 0, nxt, value + c[i][j] * x)
            col_left[j] += x
            f[i][j] = 0
            return
        for x in range(min(row_left, col_left[j]) + 1):
            f[i][j] = x
            col_left[j] -= x
            fill(i, j + 1, row_left - x, value + c[i][j] * x)
            col_left[j] += x
        f[i][j] = 0

    fill(0, 0, a[0], 0)
    flows = np.array(best[1], dtype=np.int64)
    return OracleResult(int(best[0]), flows)

"""Cycle engine of the parametric tree method.

One cycle lowers the moving tree until a moving row touches a fixed column
(descent), adds that contact edge, pushes the largest possible force along
the path ``Q ... P`` (readjustment) and deletes an edge whose force dropped
to zero (breaking).  The run ends when the moving stop carries nothing.
The heights are dual variables and the forces on row-column edges are the
flows; both are certified at the end by complementary slackness.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from . import forest as fo
from .bounds import signature_later, z_sup
from .descent import (
    BranchDistances,
    ScanCursor,
    apply_descent,
    find_naive,
    find_version_a,
    find_version_b,
    update_branch_distances,
    warmup,
)
from .forest import Direction, ForestState, MainPath
from .instance import Instance, validate


class Mode(enum.Enum):
    SINGLE = "single"
    PER_ROW = "per-row"


class Descent(enum.Enum):
    NAIVE = "naive"
    A = "a"
    B = "b"


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveOptions:
    mode: Mode = Mode.SINGLE
    descent: Descent = Descent.NAIVE
    c_sup: int | None = None
    verify_each_cycle: bool = False
    trace: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "descent", Descent(self.descent))
        if self.descent is Descent.B and self.mode is not Mode.PER_ROW:
            raise ValueError("version B descent requires the per-row mode")


@dataclass(frozen=True)
class CycleEvent:
    cycle: int
    d: int
    i_c: int  # 1-based
    j_c: int  # 1-based
    lam: int
    break_parent: str
    break_child: str
    direction: Direction
    stop: str = "Q"

    def line(self) -> str:
        return "\t".join(
            str(x)
            for x in (self.cycle, self.d, self.i_c, self.j_c, self.lam,
                      self.break_parent, self.break_child, self.direction.value)
        )


TRACE_HEADER = "# cycle\td\ti_c\tj_c\tlambda\tbreak_parent\tbreak_child\tdirection"


def format_trace(events) -> str:
    return "\n".join([TRACE_HEADER, *(e.line() for e in events)]) + "\n"


@dataclass
class CertificateReport:
    violations: dict[str, list[str]] = field(default_factory=dict)
    primal: int = 0
    dual: int = 0

    def add(self, check: str, witness: str) -> None:
        self.violations.setdefault(check, []).append(witness)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"certified optimal (cost {self.primal})"
        return "; ".join(f"{k}: {', '.join(v[:3])}" for k, v in sorted(self.violations.items()))


@dataclass
class SolveReport:
    flows: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    cost: int
    cycles: int
    elapsed: float
    trace: list[CycleEvent] | None = None
    certificate: CertificateReport | None = None
    examined: int = 0  # gaps evaluated by the descent scans

    def triplets(self) -> list[tuple[int, int, int]]:
        """Nonzero flows as 1-based ``(i, j, f)``."""
        rows, cols = np.nonzero(self.flows)
        return [(int(i) + 1, int(j) + 1, int(self.flows[i, j])) for i, j in zip(rows, cols)]


# ---------------------------------------------------------------------------
# Steps


def descent_step(state: ForestState) -> tuple[int, int, int]:
    """Naive descent: find the minimal gap and lower the moving tree by it."""
    d, i, j, _ = find_naive(state)
    apply_descent(state, d)
    return d, i, j


def descent_version_a(state: ForestState, cursor: ScanCursor) -> tuple[int, int, int]:
    d, i, j, _ = find_version_a(state, cursor)
    apply_descent(state, d)
    return d, i, j


def descent_version_b(state: ForestState, cache: BranchDistances) -> tuple[int, int, int]:
    d, i, j, _ = find_version_b(state, cache)
    apply_descent(state, d)
    return d, i, j


@dataclass
class Readjustment:
    lam: int
    path: MainPath
    break_index: int

    @property
    def breaking_edge(self) -> tuple[int, int]:
        return self.path.edge(self.break_index)


def contact_and_readjust(state: ForestState, contact: tuple[int, int]) -> Readjustment:
    """Insert the contact edge ``(i_c, j_c)`` (0-based) with zero force and
    push ``lambda`` along the main path.

    ``lambda`` is the smallest force on the odd-numbered edges; it is added
    to the even edges and taken from the odd ones.  Among odd edges left at
    zero force the one nearest ``Q`` is chosen to break.
    """
    i_c, j_c = contact
    if state.contact is not None:
        raise SolverError("a contact edge is already pending")
    if fo.gamma(state, i_c, j_c) != 0:
        raise SolverError(f"contact A{i_c + 1}-B{j_c + 1} has nonzero gap")
    state.contact = (i_c, j_c, 0)
    path = fo.main_path(state)
    force = state.force
    nodes, k = path.nodes, path.k
    L = path.n_edges
    # all odd edges are tree edges (the contact edge is even)
    odd_holders = [nodes[e] if e <= k else nodes[e - 1] for e in range(1, L + 1, 2)]
    lam = min(force[v] for v in odd_holders)
    if lam:
        for e in range(1, L + 1):
            if e == k + 1:
                continue
            v = nodes[e] if e <= k else nodes[e - 1]
            force[v] += -lam if e % 2 else lam
    state.contact = (i_c, j_c, lam)
    for t, v in enumerate(odd_holders):
        if force[v] == 0:
            return Readjustment(lam, path, 2 * t + 1)
    raise SolverError("no odd edge reached zero force")


def extract_solution(state: ForestState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flows from the row-column edges, plus the final heights."""
    if state.active != fo.NONE or state.contact is not None:
        raise SolverError("extract_solution called before termination")
    m, n, P = state.m, state.n, state.P
    flows = np.zeros((m, n), dtype=np.int64)
    for v in range(m + n):
        p = state.parent[v]
        if p == fo.NONE:
            raise SolverError(f"{state.label(v)} is detached at termination")
        if v < m and m <= p < P:
            flows[v, p - m] = state.force[v]
        elif v >= m and p < m:
            flows[p, v - m] = state.force[v]
        elif state.force[v] != 0:
            raise SolverError(f"stop edge {state.label(p)}-{state.label(v)} still carries {state.force[v]}")
    return flows, state.alpha.copy(), state.beta.copy()


def verify_optimality(inst: Instance, flows, alpha, beta) -> CertificateReport:
    """Certify optimality by feasibility, dual feasibility and complementary
    slackness; also checks that the primal and dual objectives coincide."""
    rep = CertificateReport()
    f = np.asarray(flows, dtype=np.int64)
    alpha = np.asarray(alpha, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    m, n = inst.m, inst.n
    if f.shape != (m, n):
        rep.add("shape", f"flows {f.shape} vs {(m, n)}")
        return rep
    rs = f.sum(axis=1)
    for i in np.flatnonzero(rs != inst.a):
        rep.add("row sums", f"row {i + 1}: {rs[i]} != {inst.a[i]}")
    cs = f.sum(axis=0)
    for j in np.flatnonzero(cs != inst.b):
        rep.add("column sums", f"column {j + 1}: {cs[j]} != {inst.b[j]}")
    for i, j in np.argwhere(f < 0)[:5]:
        rep.add("nonnegativity", f"f[{i + 1},{j + 1}] = {f[i, j]}")
    g = alpha[:, None] - beta[None, :] - inst.c
    for i, j in np.argwhere(g < 0)[:5]:
        rep.add("dual feasibility", f"gamma[{i + 1},{j + 1}] = {g[i, j]}")
    for i, j in np.argwhere((f != 0) & (g != 0))[:5]:
        rep.add("complementary slackness", f"f[{i + 1},{j + 1}] = {f[i, j]} with gamma {g[i, j]}")
    rep.primal = inst.cost(f)
    rep.dual = (sum(int(x) * int(y) for x, y in zip(inst.a, alpha))
                - sum(int(x) * int(y) for x, y in zip(inst.b, beta)))
    if rep.primal != rep.dual:
        rep.add("cost identity", f"dual {rep.dual} != primal {rep.primal}")
    return rep


# ---------------------------------------------------------------------------
# Main loop


def height_bound(inst: Instance, c_sup: int) -> int:
    """Bound on ``|alpha|``, ``|beta|`` over a run: heights along any tree path
    differ by at most the profit span per edge."""
    span = int(inst.c.max()) - int(inst.c.min()) + abs(int(inst.c.max())) + 1
    return abs(c_sup) + 2 * (inst.m + inst.n + 2) * span


def check_overflow(inst: Instance, c_sup: int) -> None:
    limit = 2**62
    if height_bound(inst, c_sup) >= limit:
        raise OverflowError("profit range too wide: heights could leave the int64 range")
    if inst.total >= limit:
        raise OverflowError("total weight too large for int64 forces")


class _Verifier:
    """Per-cycle audit used with ``verify_each_cycle``."""

    def __init__(self, state: ForestState, cache: BranchDistances | None):
        self.state = state
        self.cache = cache
        self.snap()

    def snap(self):
        st = self.state
        self.sig_moving = fo.extract_signature(st, "moving")
        self.sig_fixed = fo.extract_signature(st, "fixed")
        self.flow_total = self._row_col_force()

    def _row_col_force(self) -> int:
        st = self.state
        total = 0
        for v in range(st.m + st.n):
            p = st.parent[v]
            if p != fo.NONE and p < st.P and st.is_row(v) != st.is_row(p):
                total += st.force[v]
        return total

    def after_cycle(self, cycle: int, lam: int, sub_run_over: bool) -> None:
        st = self.state
        rep = fo.check_properties(st)
        if not rep:
            raise SolverError(f"cycle {cycle}: {rep}")
        sig_m = fo.extract_signature(st, "moving") if not sub_run_over else ()
        sig_f = fo.extract_signature(st, "fixed")
        if not signature_later(self.sig_moving, sig_m):
            raise SolverError(f"cycle {cycle}: moving signature {self.sig_moving} -> {sig_m} did not advance")
        if not signature_later(self.sig_fixed, sig_f):
            raise SolverError(f"cycle {cycle}: fixed signature {self.sig_fixed} -> {sig_f} did not advance")
        total = self._row_col_force()
        if total != self.flow_total + lam:
            raise SolverError(f"cycle {cycle}: row-column force {self.flow_total} -> {total}, lambda {lam}")
        if self.cache is not None and not self.cache.equals(BranchDistances.from_state(st)):
            raise SolverError(f"cycle {cycle}: stale branch distance cache")
        self.sig_moving = sig_m
        self.sig_fixed = sig_f
        self.flow_total = total


@dataclass
class RunResult:
    cycles: int
    examined: int
    events: list[CycleEvent] | None


def run(state: ForestState, opts: SolveOptions) -> RunResult:
    """Repeat descent, contact, readjustment and breaking until termination.

    In per-row mode the rows are released in index order and each sub-run
    ends when its stop carries nothing.
    """
    # sub-run k only involves the first k rows, so it is bounded by z_sup(k, n)
    if opts.mode is Mode.PER_ROW:
        budget = sum(z_sup(k, state.n) for k in range(1, state.m + 1))
    else:
        budget = z_sup(state.m, state.n)
    events = [] if opts.trace else None
    cursor = ScanCursor(state.m, state.n) if opts.descent is Descent.A else None
    cache = BranchDistances.from_state(state) if opts.descent is Descent.B else None
    verifier = None
    cycles = 0
    examined = 0

    if opts.mode is Mode.PER_ROW:
        stops = range(state.m)
    else:
        stops = [None]

    for k in stops:
        if k is not None:
            state.release(k)
        if opts.verify_each_cycle:
            if verifier is None:
                verifier = _Verifier(state, cache)
            else:
                verifier.snap()
            rep = fo.check_properties(state)
            if not rep:
                raise SolverError(f"before release {k}: {rep}")
        while True:
            if opts.descent is Descent.NAIVE:
                d, i, j, cnt = find_naive(state)
            elif opts.descent is Descent.A:
                d, i, j, cnt = find_version_a(state, cursor)
            else:
                d, i, j, cnt = find_version_b(state, cache)
            apply_descent(state, d)
            examined += cnt
            readj = contact_and_readjust(state, (i, j))
            parent, child = readj.breaking_edge
            outcome = fo.apply_capture(state, (parent, child), readj.path)
            if cache is not None:
                update_branch_distances(cache, state, readj.path.nodes)
            cycles += 1
            if cycles > budget:
                raise SolverError(f"cycle budget {budget} exceeded")
            done = outcome.direction is Direction.TERMINATION
            if events is not None:
                events.append(CycleEvent(cycles, d, i + 1, j + 1, readj.lam, state.label(parent),
                                         state.label(child), outcome.direction,
                                         state.label(state.active)))
            if done:
                if state.first_child[state.P] == fo.NONE and (k is not None and k < state.m - 1):
                    raise SolverError("fixed tree emptied before all rows were released")
                state.active = fo.NONE
            if verifier is not None:
                verifier.after_cycle(cycles, readj.lam, done)
            if done:
                break
    return RunResult(cycles, examined, events)


def solve(inst: Instance, opts: SolveOptions | None = None, certify: bool = True) -> SolveReport:
    """Solve ``inst`` to optimality and (by default) certify the result."""
    opts = opts or SolveOptions()
    rep = validate(inst)
    if not rep:
        raise ValueError("invalid instance: " + "; ".join(rep.failures))
    c_sup = opts.c_sup if opts.c_sup is not None else int(inst.c.max()) + 1
    check_overflow(inst, c_sup)
    warmup()
    t0 = time.perf_counter()
    state = fo.init_forest(inst, c_sup, per_row=opts.mode is Mode.PER_ROW)
    res = run(state, opts)
    flows, alpha, beta = extract_solution(state)
    elapsed = time.perf_counter() - t0
    report = SolveReport(flows, alpha, beta, inst.cost(flows), res.cycles, elapsed, res.events,
                         examined=res.examined)
    if certify:
        report.certificate = verify_optimality(inst, flows, alpha, beta)
        if not report.certificate:
            raise SolverError(f"result failed certification: {report.certificate}")
    return report


__all__ = [
    "CertificateReport", "CycleEvent", "Descent", "Mode", "Readjustment", "SolveOptions",
    "SolveReport", "SolverError", "contact_and_readjust", "descent_step", "descent_version_a",
    "descent_version_b", "extract_solution", "format_trace", "run", "solve", "verify_optimality",
]

"""Bipartite forest state of the parametric tree method.

Nodes are numbered densely: rows ``0..m-1``, columns ``m..m+n-1``, the
fixed stop ``P`` at ``m+n`` and the moving stop(s) after it.  With a single
moving stop ``Q`` is node ``m+n+1``; when rows are dropped one by one each
row ``k`` gets its own stop ``Q_k`` at ``m+n+1+k``.

Trees are stored as triply linked trees (parent, eldest child, next
sibling) rooted at the stops.  The force on the edge between a node and its
parent is kept on the child.  Rows and ``P`` are male, columns and ``Q``
stops female; every edge joins a male to a female node.

The algorithm's state between cycles is two trees: the *moving* tree under
the active ``Q`` stop and the *fixed* tree under ``P``.  During a cycle a
single contact edge between a moving row and a fixed column fuses them;
that edge lives in :attr:`ForestState.contact` until :func:`apply_capture`
splits the tree again.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

NONE = -1

FIXED = 0
MOVING = 1
#: Row still hanging on its own, not yet released stop (drop-one-by-one).
IDLE = 2


class Direction(enum.Enum):
    MOVING_GAINS = "moving-gains"
    FIXED_GAINS = "fixed-gains"
    TERMINATION = "termination"


class ForestError(RuntimeError):
    pass


class ForestState:
    """Mutable state of one solve.  Single owner; not thread safe."""

    def __init__(self, inst, c_sup: int, per_row: bool = False):
        self.inst = inst
        self.m = m = inst.m
        self.n = n = inst.n
        self.c = inst.c
        self.c_sup = int(c_sup)
        self.per_row = per_row
        self.P = m + n
        self.n_stops = m if per_row else 1
        size = m + n + 1 + self.n_stops
        self.alpha = np.full(m, self.c_sup, dtype=np.int64)
        self.beta = np.zeros(n, dtype=np.int64)
        self.parent = [NONE] * size
        self.first_child = [NONE] * size
        self.next_sibling = [NONE] * size
        self.force = [0] * size
        self.member = np.full(size, FIXED, dtype=np.int8)
        #: the Q stop of the moving tree, or NONE between sub-runs / at the end
        self.active = NONE
        #: pending contact edge ``(row, column, force)`` while the trees are fused
        self.contact: tuple[int, int, int] | None = None

    # -- node helpers -------------------------------------------------------

    def stop_q(self, k: int = 0) -> int:
        return self.P + 1 + k

    def is_row(self, v: int) -> bool:
        return 0 <= v < self.m

    def is_col(self, v: int) -> bool:
        return self.m <= v < self.P

    def is_q(self, v: int) -> bool:
        return v > self.P

    def is_male(self, v: int) -> bool:
        return v < self.m or v == self.P

    def label(self, v: int) -> str:
        if v < self.m:
            return f"A{v + 1}"
        if v < self.P:
            return f"B{v - self.m + 1}"
        if v == self.P:
            return "P"
        return f"Q{v - self.P}" if self.per_row else "Q"

    def children(self, v: int):
        u = self.first_child[v]
        while u != NONE:
            yield u
            u = self.next_sibling[u]

    def subtree(self, v: int) -> list[int]:
        """Nodes of the subtree rooted at ``v`` in preorder."""
        out = []
        stack = [v]
        fc, ns = self.first_child, self.next_sibling
        while stack:
            u = stack.pop()
            out.append(u)
            w = fc[u]
            while w != NONE:
                stack.append(w)
                w = ns[w]
        return out

    def root(self, v: int) -> int:
        while self.parent[v] != NONE:
            v = self.parent[v]
        return v

    # -- link surgery -------------------------------------------------------

    def link(self, child: int, parent: int, force: int) -> None:
        self.parent[child] = parent
        self.next_sibling[child] = self.first_child[parent]
        self.first_child[parent] = child
        self.force[child] = force

    def unlink(self, child: int) -> None:
        p = self.parent[child]
        u = self.first_child[p]
        if u == child:
            self.first_child[p] = self.next_sibling[child]
        else:
            ns = self.next_sibling
            while ns[u] != child:
                u = ns[u]
            ns[u] = ns[child]
        self.parent[child] = NONE
        self.next_sibling[child] = NONE
        self.force[child] = 0

    def release(self, k: int) -> None:
        """Make row ``k``'s own stop the moving stop (drop-one-by-one mode)."""
        q = self.stop_q(k)
        if self.active != NONE:
            raise ForestError("release while another stop is still moving")
        self.active = q
        self.member[q] = MOVING
        for v in self.subtree(q):
            self.member[v] = MOVING

    def gamma_matrix(self) -> np.ndarray:
        return self.alpha[:, None] - self.beta[None, :] - self.c

    def moving_rows(self) -> np.ndarray:
        return self.member[: self.m] == MOVING

    def fixed_cols(self) -> np.ndarray:
        return self.member[self.m : self.P] == FIXED

    def moving_cols(self) -> np.ndarray:
        return self.member[self.m : self.P] == MOVING


def init_forest(inst, c_sup: int | None = None, per_row: bool = False) -> ForestState:
    """Initial state: every row on its stop, every column hanging from ``P``,
    rows at height ``c_sup`` and columns at 0.

    With ``per_row`` each row sits on its own stop and stays idle until
    released; otherwise all rows hang from one moving stop ``Q``.
    """
    cmax = int(inst.c.max())
    if c_sup is None:
        c_sup = cmax + 1
    if c_sup <= cmax:
        raise ValueError(f"c_sup = {c_sup} must exceed max profit {cmax}")
    st = ForestState(inst, c_sup, per_row)
    m, n = st.m, st.n
    # link in reverse so that eldest children come out in index order
    for j in reversed(range(n)):
        st.link(m + j, st.P, int(inst.b[j]))
    if per_row:
        for i in range(m):
            st.link(i, st.stop_q(i), int(inst.a[i]))
        st.member[:m] = IDLE
        st.member[st.P + 1 :] = IDLE
    else:
        q = st.stop_q()
        for i in reversed(range(m)):
            st.link(i, q, int(inst.a[i]))
        st.member[:m] = MOVING
        st.member[q] = MOVING
        st.active = q
    return st


def gamma(state: ForestState, i: int, j: int) -> int:
    """Distance ``alpha_i - beta_j - c_ij`` (0-based indices)."""
    return int(state.alpha[i]) - int(state.beta[j]) - int(state.c[i, j])


# ---------------------------------------------------------------------------
# Main path and capture


@dataclass
class MainPath:
    """The path ``Q ... A_ic B_jc ... P`` through the fused tree.

    ``nodes[k]`` is the contact row, so edge ``e`` (1-based, joining
    ``nodes[e-1]`` and ``nodes[e]``) is the contact edge for ``e == k + 1``.
    """

    nodes: list[int]
    k: int

    @property
    def n_edges(self) -> int:
        return len(self.nodes) - 1

    def child_of(self, e: int) -> int:
        """Node that stores the force of edge ``e`` (undefined for the contact)."""
        return self.nodes[e] if e <= self.k else self.nodes[e - 1]

    def edge(self, e: int) -> tuple[int, int]:
        """Edge ``e`` as ``(parent, child)`` in the pre-capture orientation.

        The contact edge is reported as ``(row, column)``.
        """
        if e <= self.k + 1:
            return self.nodes[e - 1], self.nodes[e]
        return self.nodes[e], self.nodes[e - 1]


def main_path(state: ForestState) -> MainPath:
    if state.contact is None:
        raise ForestError("main path needs a contact edge: the state has two trees")
    ic, jc, _ = state.contact
    up = [ic]
    v = ic
    while state.parent[v] != NONE:
        v = state.parent[v]
        up.append(v)
    up.reverse()
    v = state.m + jc
    down = [v]
    while state.parent[v] != NONE:
        v = state.parent[v]
        down.append(v)
    if up[0] != state.active or down[-1] != state.P:
        raise ForestError("contact does not join the moving and the fixed tree")
    return MainPath(up + down, len(up) - 1)


def edge_force(state: ForestState, path: MainPath, e: int) -> int:
    if e == path.k + 1:
        return state.contact[2]
    return state.force[path.child_of(e)]


@dataclass
class CaptureOutcome:
    direction: Direction
    transplanted: int
    #: the side that received the transplanted branch
    gained_moving: bool


def apply_capture(state: ForestState, breaking_edge: tuple[int, int], path: MainPath | None = None
                  ) -> CaptureOutcome:
    """Delete the zero-force ``breaking_edge`` and re-hang the cut-off branch.

    ``breaking_edge`` is ``(parent, child)`` in the pre-capture orientation
    and must be an odd-numbered edge of the main path.  The branch below it
    changes sides through the contact edge: the path from its head to the
    contact node is reversed, forces travel with their edges and the whole
    branch flips between moving and fixed.
    """
    if path is None:
        path = main_path(state)
    parent, child = breaking_edge
    nodes, k = path.nodes, path.k
    try:
        if state.parent[child] != parent:
            raise ValueError
        e = nodes.index(child) if child in nodes[: k + 1] else nodes.index(child) + 1
    except ValueError:
        raise ForestError(f"{state.label(parent)}-{state.label(child)} is not on the main path") from None
    if e == k + 1 or e % 2 == 0:
        raise ForestError("breaking edge must be odd-numbered")
    if state.force[child] != 0:
        raise ForestError(
            f"breaking edge {state.label(parent)}-{state.label(child)} carries force {state.force[child]}"
        )

    ic, jc, contact_force = state.contact
    col_c = state.m + jc
    branch = state.subtree(child)
    state.unlink(child)

    if e <= k:
        # moving tree loses the branch headed by row nodes[e]; the segment
        # nodes[e..k] is re-hung below the contact column
        seg = nodes[e : k + 1]
        old = [state.force[v] for v in seg]
        for t in range(len(seg) - 1, 0, -1):
            state.unlink(seg[t])
        for t in range(1, len(seg)):
            state.link(seg[t - 1], seg[t], old[t])
        state.link(seg[-1], col_c, contact_force)
        flag = FIXED
        gained_moving = False
    else:
        # fixed tree loses the branch headed by column nodes[e-1]; the segment
        # nodes[k+1..e-1] is re-hung below the contact row
        seg = nodes[k + 1 : e]
        old = [state.force[v] for v in seg]
        for t in range(len(seg) - 1, 0, -1):
            state.unlink(seg[t - 1])
        for t in range(1, len(seg)):
            state.link(seg[t], seg[t - 1], old[t - 1])
        state.link(seg[0], ic, contact_force)
        flag = MOVING
        gained_moving = True

    member = state.member
    for v in branch:
        member[v] = flag
    state.contact = None

    q = state.active
    if state.first_child[q] == NONE or state.first_child[state.P] == NONE:
        direction = Direction.TERMINATION
    else:
        direction = Direction.MOVING_GAINS if gained_moving else Direction.FIXED_GAINS
    return CaptureOutcome(direction, child, gained_moving)


# ---------------------------------------------------------------------------
# Properties


@dataclass
class PropertyReport:
    violations: dict[str, list[str]] = field(default_factory=dict)

    def add(self, prop: str, witness: str) -> None:
        self.violations.setdefault(prop, []).append(witness)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "P1-P7 hold"
        return "; ".join(f"{p}: {', '.join(w[:3])}" for p, w in sorted(self.violations.items()))


def _tree_edges(state: ForestState):
    for v, p in enumerate(state.parent):
        if p != NONE:
            yield p, v, state.force[v]
    if state.contact is not None:
        ic, jc, f = state.contact
        yield ic, state.m + jc, f


def check_properties(state: ForestState) -> PropertyReport:
    """Audit the state against P1-P7.

    P1  edges join a male node (row, P) to a female node (column, Q)
    P2  links are consistent and acyclic; one or two live trees
    P3  two proper trees while a stop moves; membership flags agree
    P4  every gap is nonnegative
    P5  tree edges between rows and columns have zero gap
    P6  forces are nonnegative
    P7  each row and column weight equals the forces on its edges

    Idle rows, which hang on their own unreleased stop, form extra two-node
    trees and are accepted.
    """
    rep = PropertyReport()
    m, n, P = state.m, state.n, state.P
    label = state.label
    parent, fc, ns = state.parent, state.first_child, state.next_sibling
    size = len(parent)

    # P1: male-female edges of the allowed kinds
    for u, v, _ in _tree_edges(state):
        pu, pv = (u, v) if state.is_male(u) else (v, u)
        ok = state.is_male(pu) and not state.is_male(pv)
        if ok and pu == P and not state.is_col(pv):
            ok = False
        if ok and state.is_q(pv) and not state.is_row(pu):
            ok = False
        if not ok:
            rep.add("P1", f"{label(u)}-{label(v)}")

    # P2: link consistency, acyclicity, one or two (active) trees
    for v in range(size):
        seen = 0
        for w in state.children(v):
            seen += 1
            if parent[w] != v:
                rep.add("P2", f"{label(w)} listed under {label(v)} but parent is {parent[w]}")
            if seen > size:
                rep.add("P2", f"sibling loop under {label(v)}")
                break
        p = parent[v]
        if p != NONE and v not in state.children(p):
            rep.add("P2", f"{label(v)} missing from children of {label(p)}")
    roots = {}
    for v in range(size):
        r, steps = v, 0
        while parent[r] != NONE and steps <= size:
            r = parent[r]
            steps += 1
        if steps > size:
            rep.add("P2", f"cycle through {label(v)}")
            continue
        roots[v] = r
    for v, r in roots.items():
        if r < P:
            rep.add("P2", f"{label(v)} in a tree without a stop (root {label(r)})")
    for v in range(m):
        r = roots.get(v)
        if r is not None and state.member[v] == IDLE:
            if r != v + P + 1 or fc[r] != v or ns[v] != NONE or fc[v] != NONE:
                rep.add("P2", f"idle {label(v)} not alone on its stop")

    # P3: two proper trees while a stop is moving; flags match the trees
    q = state.active
    if state.contact is None and q != NONE:
        if fc[q] == NONE:
            rep.add("P3", f"moving tree {label(q)} is empty")
        if fc[P] == NONE:
            rep.add("P3", "fixed tree P is empty")
    for v, r in roots.items():
        if v >= P:
            continue
        expect = IDLE if state.member[v] == IDLE else (MOVING if r == q and q != NONE else FIXED)
        if state.contact is not None and state.member[v] != IDLE:
            continue  # trees are fused: membership refers to the pre-contact sides
        if state.member[v] != expect:
            rep.add("P3", f"{label(v)} flagged {int(state.member[v])} but in tree of {label(r)}")

    # P4: gaps are nonnegative
    g = state.gamma_matrix()
    bad = np.argwhere(g < 0)
    if bad.size:
        i, j = bad[0]
        rep.add("P4", f"gamma[{i + 1},{j + 1}] = {g[i, j]}")

    # P5, P6
    for u, v, f in _tree_edges(state):
        if state.is_row(u) and state.is_col(v):
            i, j = u, v - m
        elif state.is_col(u) and state.is_row(v):
            i, j = v, u - m
        else:
            i = None
        if i is not None and g[i, j] != 0:
            rep.add("P5", f"edge A{i + 1}-B{j + 1} with gamma {g[i, j]}")
        if f < 0:
            rep.add("P6", f"{label(u)}-{label(v)} force {f}")

    # P7: weights balanced by adjacent forces
    total = [0] * size
    for u, v, f in _tree_edges(state):
        total[u] += f
        total[v] += f
    for i in range(m):
        if total[i] != int(state.inst.a[i]):
            rep.add("P7", f"A{i + 1}: {total[i]} != {int(state.inst.a[i])}")
    for j in range(n):
        if total[m + j] != int(state.inst.b[j]):
            rep.add("P7", f"B{j + 1}: {total[m + j]} != {int(state.inst.b[j])}")
    return rep


# ---------------------------------------------------------------------------
# Signatures


def extract_signature(state: ForestState, which: str = "moving") -> tuple[int, ...]:
    """Level counts ``(g1, g2, ...)`` of the moving or fixed tree, root excluded."""
    if which == "moving":
        root = state.active
        if root == NONE:
            return ()
    elif which == "fixed":
        root = state.P
    else:
        raise ValueError("which must be 'moving' or 'fixed'")
    counts = []
    level = list(state.children(root))
    while level:
        counts.append(len(level))
        level = [w for v in level for w in state.children(v)]
    return tuple(counts)


def tree_counts(state: ForestState, root: int) -> tuple[int, int]:
    """Numbers of rows and columns in the tree under ``root``."""
    nodes = state.subtree(root)
    rows = sum(1 for v in nodes if state.is_row(v))
    cols = sum(1 for v in nodes if state.is_col(v))
    return rows, cols

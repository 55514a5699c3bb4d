import numpy as np
import pytest

from tpsolver import forest as fo
from tpsolver.forest import FIXED, IDLE, MOVING, NONE, Direction, ForestError
from tpsolver.instance import Instance
from tpsolver.solver import contact_and_readjust, descent_step


def cycle(state):
    d, i, j = descent_step(state)
    readj = contact_and_readjust(state, (i, j))
    out = fo.apply_capture(state, readj.breaking_edge, readj.path)
    return d, readj, out


def test_init_gaps(table1):
    s = fo.init_forest(table1, 100)
    g = s.gamma_matrix()
    assert g[0, 0] == 74
    assert fo.gamma(s, 2, 0) == 6
    assert g.tolist() == [[74, 36, 67, 38], [37, 73, 87, 86], [6, 96, 96, 48]]
    assert fo.check_properties(s).ok


def test_init_one_by_one():
    s = fo.init_forest(Instance([5], [5], [[7]]), 8)
    assert fo.gamma(s, 0, 0) == 1


def test_default_and_invalid_upper_stop(table1):
    assert fo.init_forest(table1).c_sup == 95
    with pytest.raises(ValueError):
        fo.init_forest(table1, 94)


def test_children_in_index_order(table1):
    s = fo.init_forest(table1, 100)
    assert list(s.children(s.stop_q())) == [0, 1, 2]
    assert list(s.children(s.P)) == [3, 4, 5, 6]
    assert [s.force[v] for v in s.children(s.P)] == [44, 52, 13, 37]


def test_per_row_init_is_idle(table1):
    s = fo.init_forest(table1, 100, per_row=True)
    assert (s.member[:3] == IDLE).all()
    assert s.active == NONE
    assert [s.parent[i] for i in range(3)] == [s.stop_q(0), s.stop_q(1), s.stop_q(2)]
    assert fo.check_properties(s).ok
    s.release(0)
    assert s.member[0] == MOVING and s.member[1] == IDLE
    assert fo.check_properties(s).ok
    with pytest.raises(ForestError):
        s.release(1)


def test_negated_force_is_reported(table1):
    s = fo.init_forest(table1, 100)
    s.force[0] = -s.force[0]
    rep = fo.check_properties(s)
    assert "P6" in rep.violations
    assert "Q-A1" in rep.violations["P6"][0]


def test_broken_sibling_chain_is_reported(table1):
    s = fo.init_forest(table1, 100)
    s.next_sibling[3] = 5  # skip B2
    assert not fo.check_properties(s).ok


def test_signatures_at_start(table1):
    s = fo.init_forest(table1, 100)
    assert fo.extract_signature(s) == (3,)
    assert fo.extract_signature(s, "fixed") == (4,)


def test_signature_of_layered_tree():
    # Q -> A6, A5; A5 -> B4, B6; B4 -> A2, A3
    s = fo.ForestState(Instance([0] * 6, [0] * 6, np.zeros((6, 6), dtype=int)), 1)
    q = s.stop_q()
    s.active = q
    s.link(5, q, 0)
    s.link(4, q, 0)
    s.link(6 + 3, 4, 0)
    s.link(6 + 5, 4, 0)
    s.link(1, 6 + 3, 0)
    s.link(2, 6 + 3, 0)
    assert fo.extract_signature(s) == (2, 2, 2)


def _scene():
    """Moving: Q-A5-B4-A3 and Q-A2.  Fixed: P-B3-A1-B1-A4 and P-B2.
    Contact between A3 and B1."""
    s = fo.ForestState(Instance([0] * 5, [0] * 4, np.zeros((5, 4), dtype=int)), 1)
    col = lambda j: 5 + j - 1  # noqa: E731
    q = s.stop_q()
    s.active = q
    s.link(1, q, 1)
    s.link(4, q, 1)
    s.link(col(4), 4, 1)
    s.link(2, col(4), 1)
    s.link(col(2), s.P, 1)
    s.link(col(3), s.P, 1)
    s.link(0, col(3), 1)
    s.link(col(1), 0, 0)
    s.link(3, col(1), 1)
    for v in s.subtree(q):
        s.member[v] = MOVING
    s.contact = (2, 0, 0)
    return s, col


def test_main_path_through_contact():
    s, col = _scene()
    path = fo.main_path(s)
    assert [s.label(v) for v in path.nodes] == ["Q", "A5", "B4", "A3", "B1", "A1", "B3", "P"]
    assert path.k == 3 and path.n_edges == 7
    assert path.edge(4) == (2, col(1))
    assert path.edge(5) == (0, col(1))
    # nodes alternate between the male (rows, P) and female (columns, Q) sides
    sides = [s.is_male(v) for v in path.nodes]
    assert all(x != y for x, y in zip(sides, sides[1:]))


def test_capture_moves_branch_to_moving_tree():
    s, col = _scene()
    out = fo.apply_capture(s, (0, col(1)))
    assert out.direction is Direction.MOVING_GAINS
    assert out.transplanted == col(1)
    assert s.parent[col(1)] == 2 and s.parent[3] == col(1)
    assert s.member[col(1)] == MOVING and s.member[3] == MOVING
    assert s.member[0] == FIXED
    assert s.contact is None


def test_capture_rejects_even_or_loaded_edges():
    s, col = _scene()
    with pytest.raises(ForestError):
        fo.apply_capture(s, (col(3), 0))  # edge 6 is even
    with pytest.raises(ForestError):
        fo.apply_capture(s, (s.P, col(3)))  # edge 7 carries force


def test_worked_example_first_cycles(table1):
    s = fo.init_forest(table1, 100)
    d, readj, out = cycle(s)
    assert d == 6
    assert [s.label(v) for v in readj.path.nodes] == ["Q", "A3", "B1", "P"]
    assert readj.lam == 44 and out.direction is Direction.MOVING_GAINS
    cycle(s)
    d, readj, out = cycle(s)
    assert d == 2
    assert [s.label(v) for v in readj.breaking_edge] == ["Q", "A1"]
    # row 1 and its daughter column 2 now belong to the fixed tree
    assert s.member[0] == FIXED and s.member[3 + 1] == FIXED
    assert out.direction is Direction.FIXED_GAINS
    assert fo.check_properties(s).ok


def test_row_counts_split_between_trees(table1):
    s = fo.init_forest(table1, 100)
    for _ in range(4):
        cycle(s)
        p, q = fo.tree_counts(s, s.stop_q())
        p2, q2 = fo.tree_counts(s, s.P)
        assert p + p2 == s.m and q + q2 == s.n

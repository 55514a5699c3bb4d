import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpsolver import forest as fo
from tpsolver.descent import (
    BranchDistances,
    ScanCursor,
    apply_descent,
    find_version_b,
    update_branch_distances,
)
from tpsolver.instance import GeneratorConfig, Instance, gen_random, gen_worst_case
from tpsolver.solver import (
    Descent,
    Mode,
    SolveOptions,
    SolverError,
    contact_and_readjust,
    descent_step,
    extract_solution,
    format_trace,
    solve,
    verify_optimality,
)

COMBOS = [
    ("single", "naive"),
    ("single", "a"),
    ("per-row", "naive"),
    ("per-row", "a"),
    ("per-row", "b"),
]


def one_cycle(state):
    d, i, j = descent_step(state)
    readj = contact_and_readjust(state, (i, j))
    fo.apply_capture(state, readj.breaking_edge, readj.path)
    return d, i, j, readj


def test_table1_solution(table1, table2):
    rep = solve(table1, SolveOptions(c_sup=100, trace=True))
    assert np.array_equal(rep.flows, table2)
    assert rep.cost == 9987
    assert rep.cycles == 6
    assert [e.d for e in rep.trace] == [6, 30, 2, 10, 29, 10]
    assert rep.certificate.ok


def test_table1_trace_matches_golden(table1, data_dir):
    rep = solve(table1, SolveOptions(c_sup=100, trace=True))
    assert format_trace(rep.trace) == (data_dir / "table1_trace.tsv").read_text()


def test_single_cell():
    rep = solve(Instance([5], [5], [[7]]))
    assert rep.flows.tolist() == [[5]]
    assert rep.cost == 35
    assert rep.cycles == 1


def test_all_zero_weights():
    rep = solve(Instance([0, 0], [0, 0, 0], [[1, 2, 3], [4, 5, 6]]))
    assert not rep.flows.any()
    assert rep.certificate.ok


# -- steps ---------------------------------------------------------------------


def test_first_descents(table1):
    s = fo.init_forest(table1, 100)
    d, i, j, readj = one_cycle(s)
    assert (d, i + 1, j + 1) == (6, 3, 1)
    assert readj.lam == 44
    assert [s.label(v) for v in readj.breaking_edge] == ["P", "B1"]
    d, i, j, _ = one_cycle(s)
    assert (d, i + 1, j + 1) == (30, 1, 2)


def test_third_cycle_breaks_below_q(table1):
    s = fo.init_forest(table1, 100)
    one_cycle(s)
    one_cycle(s)
    _, _, _, readj = one_cycle(s)
    assert [s.label(v) for v in readj.breaking_edge] == ["Q", "A1"]
    assert readj.lam == 34


def test_zero_gap_gives_zero_descent():
    # both rows tie on column 1, so the second contact is immediate
    inst = Instance([1, 1], [1, 1], [[5, 1], [5, 1]])
    s = fo.init_forest(inst, 6)
    one_cycle(s)
    d, _, _ = descent_step(s)
    assert d == 0


def test_contact_must_be_tight(table1):
    s = fo.init_forest(table1, 100)
    with pytest.raises(SolverError):
        contact_and_readjust(s, (0, 0))


def test_extract_before_end_fails(table1):
    with pytest.raises(SolverError):
        extract_solution(fo.init_forest(table1, 100))


def test_scan_cursor_steps():
    cur = ScanCursor(10, 10)
    assert cur.r == 0
    assert cur.advance() == 61
    assert cur.advance() == 22


def test_version_b_requires_per_row():
    with pytest.raises(ValueError):
        SolveOptions(mode="single", descent="b")
    opts = SolveOptions(mode="per-row", descent="b")
    assert opts.mode is Mode.PER_ROW and opts.descent is Descent.B


# -- certificate -----------------------------------------------------------------


def test_certificate_accepts_optimum(table1):
    rep = solve(table1, SolveOptions(c_sup=100))
    cert = verify_optimality(table1, rep.flows, rep.alpha, rep.beta)
    assert cert.ok and cert.primal == cert.dual == 9987


def test_certificate_rejects_moved_unit(table1, table2):
    rep = solve(table1, SolveOptions(c_sup=100))
    f = table2.copy()
    f[0, 1] -= 1
    f[0, 0] += 1
    f[2, 0] -= 1
    f[2, 1] += 1
    cert = verify_optimality(table1, f, rep.alpha, rep.beta)
    assert not cert.ok
    assert "complementary slackness" in cert.violations


def test_certificate_rejects_infeasible(table1, table2):
    rep = solve(table1, SolveOptions(c_sup=100))
    f = table2.copy()
    f[1, 2] += 1
    cert = verify_optimality(table1, f, rep.alpha, rep.beta)
    assert {"row sums", "column sums"} <= set(cert.violations)


# -- modes and strategies ---------------------------------------------------------


@pytest.mark.parametrize("mode, descent", COMBOS)
def test_every_combination_solves_table1(table1, mode, descent):
    rep = solve(table1, SolveOptions(mode=mode, descent=descent, verify_each_cycle=True))
    assert rep.cost == 9987


@pytest.mark.parametrize("n, cycles", [(5, 46), (10, 1534)])
def test_worst_case_cycles(n, cycles):
    assert solve(gen_worst_case(n)).cycles == cycles


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_combinations_agree(m, n, c_max, seed):
    a_max = n * 3
    inst = gen_random(GeneratorConfig(m, n, a_max, m * 3, c_max, seed))
    costs = {solve(inst, SolveOptions(mode=mo, descent=de)).cost for mo, de in COMBOS}
    assert len(costs) == 1


def test_negative_profits():
    inst = Instance([2, 3], [4, 1], [[-5, -9], [-1, -20]])
    rep = solve(inst, SolveOptions(verify_each_cycle=True))
    best = max(
        inst.cost(np.array([[x, 2 - x], [4 - x, x - 1]]))
        for x in range(1, 3)
    )
    assert rep.cost == best


def test_overflow_is_rejected():
    big = 2**61
    with pytest.raises(OverflowError):
        solve(Instance([1], [1], [[big]]))


# -- branch distance cache -----------------------------------------------------------


def test_cache_matches_recomputation_every_cycle():
    for seed in range(10):
        inst = gen_random(GeneratorConfig(7, 5, 10, 14, 35, seed))
        s = fo.init_forest(inst, per_row=True)
        cache = BranchDistances.from_state(s)
        for k in range(inst.m):
            s.release(k)
            while True:
                d, i, j, _ = find_version_b(s, cache)
                apply_descent(s, d)
                readj = contact_and_readjust(s, (i, j))
                on_path = set(readj.path.nodes)
                before = cache.copy()
                out = fo.apply_capture(s, readj.breaking_edge, readj.path)
                update_branch_distances(cache, s, readj.path.nodes)
                assert cache.equals(BranchDistances.from_state(s))
                for r in set(range(s.m)) - on_path:
                    assert np.array_equal(cache.rel[r], before.rel[r])
                if out.direction is fo.Direction.TERMINATION:
                    s.active = fo.NONE
                    break


def test_cache_distance_is_branch_minimum(table1):
    s = fo.init_forest(table1, 100, per_row=True)
    cache = BranchDistances.from_state(s)
    # every branch is a single row at the start
    assert np.array_equal(cache.delta(s), s.gamma_matrix())
    assert (cache.argrow == np.arange(3)[:, None]).all()


def test_stop_labels_in_per_row_trace(table1):
    rep = solve(table1, SolveOptions(mode="per-row", trace=True))
    stops = [e.stop for e in rep.trace]
    assert stops[0] == "Q1" and stops[-1] == "Q3"
    assert [k for k, _ in itertools.groupby(stops)] == ["Q1", "Q2", "Q3"]

import tracemalloc

import pytest

from pfaffham import generators as gen
from pfaffham.another_hc import (MinDegreeError, OpStats, ReadOnlyInput, RegisterBudgetError,
                                 RegisterFile, another_cycle, another_cycle_logspace,
                                 another_cycle_reference, build_d_graph, find_s_avoiding_cycle,
                                 five_cycles, four_anchored_cycles, logspace_cycle)
from pfaffham.graph import GraphError, HamCycle, validate_cycle
from pfaffham.oracle import enumerate_cycles
from pfaffham.orientations import orientation_from_cycle
from pfaffham.witness import build_f_lambda, chi_of_cycle, cycle_to_matching

from conftest import CUBE_H


def d_graph(ctx, h):
    f = build_f_lambda(ctx, chi_of_cycle(ctx, h).restrict_left(ctx))
    return build_d_graph(f, cycle_to_matching(f, h))


@pytest.fixture
def cube_ctx(cube):
    return orientation_from_cycle(cube, CUBE_H, cube.edge_id(0, 4))


def anchored_ok(g, h2, h, ctx):
    return (bool(validate_cycle(g, h2)) and h2.contains_edge(ctx.s, ctx.t)
            and not h2.same_cycle(h))


def test_d_graph_degrees_cube(cube, cube_ctx):
    cat = enumerate_cycles(cube, anchor=cube.edge_id(0, 4))
    for h in cat.cycles:
        ctx = orientation_from_cycle(cube, h, cube.edge_id(0, 4))
        d = d_graph(ctx, h)
        assert d.in_degree(ctx.s) == 0
        assert all(d.out_degree(l) >= 1 for l in ctx.bip.left)


def test_d_graph_c4_has_sink(c4):
    ctx = orientation_from_cycle(c4, HamCycle([0, 1, 2, 3]), c4.edge_id(0, 3))
    d = d_graph(ctx, HamCycle([0, 1, 2, 3]))
    assert min(d.out_degree(l) for l in ctx.bip.left) == 0
    with pytest.raises(GraphError):
        find_s_avoiding_cycle(d, ctx.s)


def test_s_avoiding_cycle_cube(cube_ctx):
    d = d_graph(cube_ctx, CUBE_H)
    cyc = find_s_avoiding_cycle(d, cube_ctx.s)
    assert len(cyc) >= 2
    assert all(a != cube_ctx.s for a, _, _ in cyc)
    assert all(cyc[i][1] == cyc[(i + 1) % len(cyc)][0] for i in range(len(cyc)))
    assert len(cyc) <= len(cube_ctx.bip.left) - 1


def test_another_cycle_cube(cube, cube_ctx):
    cat = enumerate_cycles(cube, anchor=cube.edge_id(0, 4))
    h2 = another_cycle(cube_ctx, CUBE_H)
    assert anchored_ok(cube, h2, CUBE_H, cube_ctx)
    assert any(h2.same_cycle(c) for c in cat.cycles)
    assert h2.contains_edge(0, 1) and h2.contains_edge(0, 4)


def test_reference_agrees_with_array_version(cube, cube_ctx):
    assert another_cycle_reference(cube_ctx, CUBE_H).same_cycle(another_cycle(cube_ctx, CUBE_H))


def test_another_cycle_twice(cube, cube_ctx):
    h2 = another_cycle(cube_ctx, CUBE_H)
    h3 = another_cycle(orientation_from_cycle(cube, h2, cube.edge_id(0, 4)), h2)
    assert anchored_ok(cube, h3, h2, cube_ctx)


def test_another_cycle_chorded16():
    inst = gen.chorded_cycle(16, 3, seed=0)
    g, h = inst.g, inst.cycle
    ctx = orientation_from_cycle(g, h, g.edge_id(h.order[0], h.order[1]))
    assert anchored_ok(g, another_cycle(ctx, h), h, ctx)


def test_degree_two_rejected(c4):
    ctx = orientation_from_cycle(c4, HamCycle([0, 1, 2, 3]), 0)
    with pytest.raises(MinDegreeError, match="minimum degree 3 required"):
        another_cycle(ctx, HamCycle([0, 1, 2, 3]))


def test_op_count_linear():
    per = []
    for n in (1000, 8000):
        inst = gen.chorded_cycle(n, 3, seed=1, with_embedding=False)
        g, h = inst.g, inst.cycle
        st = OpStats()
        another_cycle(orientation_from_cycle(g, h, g.edge_id(h.order[0], h.order[1])), h, st)
        per.append(st.ops / n)
    assert per[1] < 1.2 * per[0]


@pytest.mark.parametrize("n", [8, 48, 500])
def test_logspace_contract(n):
    inst = gen.chorded_cycle(n, 3, seed=n)
    g, h = inst.g, inst.cycle
    e = g.edge_id(h.order[0], h.order[1])
    rep = {}
    h2 = logspace_cycle(g, h, e, rep)
    assert validate_cycle(g, h2) and not h2.same_cycle(h)
    assert h2.contains_edge(int(g.eu[e]), int(g.ev[e]))
    assert rep["peak_registers"] <= 8


def test_logspace_cube_in_catalog(cube):
    e = cube.edge_id(0, 4)
    h2 = logspace_cycle(cube, CUBE_H, e)
    assert not h2.same_cycle(CUBE_H)
    assert any(h2.same_cycle(c) for c in enumerate_cycles(cube, anchor=e).cycles)


def test_logspace_heap_is_flat():
    peaks = []
    for n in (400, 3200):
        inst = gen.chorded_cycle(n, 3, seed=1)
        g, h = inst.g, inst.cycle
        e = g.edge_id(h.order[0], h.order[1])
        tape = ReadOnlyInput(g, h, e)
        tracemalloc.start()
        for _ in another_cycle_logspace(g, h, e, tape=tape):
            pass
        peaks.append(tracemalloc.get_traced_memory()[1])
        tracemalloc.stop()
    assert max(peaks) < 32_000


def test_register_budget():
    r = RegisterFile(10, budget=2)
    r["a"], r["b"] = 1, 2
    with pytest.raises(RegisterBudgetError):
        r["c"] = 3


def test_four_cycles_cube(cube, cube_ctx):
    four = four_anchored_cycles(cube_ctx, CUBE_H)
    cat = enumerate_cycles(cube, anchor=cube.edge_id(0, 4))
    assert {c.edge_keys() for c in four} == cat.edge_sets()


def test_four_cycles_cl8():
    inst = gen.prism(8)
    g = inst.g
    cat = enumerate_cycles(g)
    for h in cat.cycles[:4]:
        e = g.edge_id(h.order[0], h.order[1])
        four = four_anchored_cycles(orientation_from_cycle(g, h, e), h)
        assert len({c.edge_keys() for c in four}) == 4
        assert {c.edge_keys() for c in four} <= cat.edge_sets()


def test_five_cycles_cube(cube, cube_ctx):
    five = five_cycles(cube_ctx, CUBE_H)
    assert len({c.edge_keys() for c in five}) == 5

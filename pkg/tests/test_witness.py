from collections import Counter

import pytest

from pfaffham.graph import GraphError, HamCycle
from pfaffham.oracle import enumerate_cycles, enumerate_matchings
from pfaffham.orientations import context_from_orientation, kasteleyn_orientation, orientation_from_cycle
from pfaffham.witness import (BadColoring, LeftColoring, VertexColoring, build_f_lambda,
                              chi_of_cycle, cycle_to_matching, induced_orientation,
                              matching_edges, matching_to_cycle, recover_cycle, transpose_ports)

from conftest import CUBE_H, catalog


@pytest.fixture
def cube_ctx(cube):
    return orientation_from_cycle(cube, CUBE_H, cube.edge_id(0, 4))


@pytest.fixture
def c4_ctx(c4):
    return orientation_from_cycle(c4, HamCycle([0, 1, 2, 3]), c4.edge_id(0, 3))


def test_chi_c4(c4_ctx):
    assert chi_of_cycle(c4_ctx, HamCycle([0, 1, 2, 3])).color == (0, 1, 0, 1)


def test_chi_cube_round_trip(cube_ctx):
    chi = chi_of_cycle(cube_ctx, CUBE_H)
    assert chi[0] == 0 and chi[4] == 1
    assert recover_cycle(cube_ctx, chi).same_cycle(CUBE_H)


def test_chi_t_is_one_everywhere():
    for inst in catalog(12):
        g = inst.g
        pf = kasteleyn_orientation(g, inst.emb)
        for e in range(g.m):
            ctx = context_from_orientation(g, e, pf)
            for h in enumerate_cycles(g, anchor=e).cycles:
                assert chi_of_cycle(ctx, h)[ctx.t] == 1


def test_induced_orientation_proper_is_pf_e(cube_ctx):
    proper = VertexColoring([bin(v).count("1") % 2 for v in range(8)])
    assert induced_orientation(cube_ctx, proper) == cube_ctx.pf_e


def test_induced_orientation_all_zero(cube_ctx, cube):
    chi = VertexColoring([1 if v == 4 else 0 for v in range(8)])
    o = induced_orientation(cube_ctx, chi)
    for e, (u, v) in enumerate(cube.edges):
        flipped = o.bits[e] != cube_ctx.pf_e.bits[e]
        assert flipped == (4 not in (u, v))


def test_induced_contains_directed_cycle(cube_ctx, cube):
    o = induced_orientation(cube_ctx, chi_of_cycle(cube_ctx, CUBE_H))
    order = CUBE_H.anchored(0, 4).order
    assert all(o.has_arc(cube, a, b) for a, b in zip(order, order[1:]))


def test_proper_coloring_of_cube_is_this_cycles_coloring(cube_ctx):
    # with this anchor and cycle, chi_H is exactly the proper 2-coloring
    proper = VertexColoring([bin(v).count("1") % 2 for v in range(8)])
    assert recover_cycle(cube_ctx, proper).same_cycle(CUBE_H)


def test_bad_coloring_detected(cube_ctx):
    chi = VertexColoring([1 if v == 4 else 0 for v in range(8)])
    res = recover_cycle(cube_ctx, chi)
    assert isinstance(res, BadColoring) and not res


def test_chi_t_zero_is_precondition_error(cube_ctx):
    with pytest.raises(GraphError):
        recover_cycle(cube_ctx, VertexColoring([0] * 8))


def test_f_lambda_c4(c4_ctx):
    f = build_f_lambda(c4_ctx, LeftColoring({0: 0, 2: 0}))
    assert len(f.nodes) == 8
    assert len(f.edges) == 7
    assert f.neighbors((0, 0)) == [(3, 0)]


def test_f_lambda_port_nodes_share_neighborhoods(cube_ctx):
    chi = chi_of_cycle(cube_ctx, CUBE_H)
    f = build_f_lambda(cube_ctx, chi.restrict_left(cube_ctx))
    assert f.neighbors((cube_ctx.s, 0)) == [(cube_ctx.t, 0)]
    for l in cube_ctx.bip.left:
        if l != cube_ctx.s:
            assert sorted(f.neighbors((l, 0))) == sorted(f.neighbors((l, 1)))


def test_c4_matchings(c4_ctx):
    f = build_f_lambda(c4_ctx, LeftColoring({0: 0, 2: 0}))
    ms = enumerate_matchings(f)
    assert len(ms) == 2
    for m in ms:
        assert matching_to_cycle(f, m).same_cycle(HamCycle([0, 1, 2, 3]))
        assert frozenset({(0, 0), (3, 0)}) in matching_edges(m)
        assert len(matching_edges(m)) == 4


def test_matching_round_trip_and_port_transpose(cube_ctx):
    f = build_f_lambda(cube_ctx, chi_of_cycle(cube_ctx, CUBE_H).restrict_left(cube_ctx))
    m = cycle_to_matching(f, CUBE_H)
    assert matching_to_cycle(f, m).same_cycle(CUBE_H)
    for l in cube_ctx.bip.left:
        if l != cube_ctx.s:
            assert matching_to_cycle(f, transpose_ports(m, l)).same_cycle(CUBE_H)


def test_cube_matching_groups(cube_ctx):
    f = build_f_lambda(cube_ctx, chi_of_cycle(cube_ctx, CUBE_H).restrict_left(cube_ctx))
    groups = Counter(matching_to_cycle(f, m).canonical().order for m in enumerate_matchings(f))
    assert set(groups.values()) == {8}


def test_infeasible_lambda_has_no_matchings(c4_ctx):
    assert enumerate_matchings(build_f_lambda(c4_ctx, LeftColoring({0: 0, 2: 1}))) == []


def test_lambda_s_must_be_zero(c4_ctx):
    with pytest.raises(GraphError):
        build_f_lambda(c4_ctx, LeftColoring({0: 1, 2: 0}))

import pytest

from pfaffham.graph import (GraphError, NotBipartiteError, bipartition, parse_cycle,
                            parse_graph, serialize_cycle, serialize_graph, validate_cycle)
from pfaffham import generators as gen

from conftest import CUBE_H


def test_parse_c4():
    g = parse_graph("p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n")
    assert (g.n, g.m) == (4, 4)
    assert g.edges == [(0, 1), (1, 2), (2, 3), (0, 3)]


def test_parse_cube_file(cube):
    g = parse_graph(serialize_graph(cube))
    assert (g.n, g.m) == (8, 12)
    assert all(bin(u ^ v).count("1") == 1 for u, v in g.edges)


def test_loop_reports_line():
    with pytest.raises(GraphError) as exc:
        parse_graph("p 2 1\ne 0 0\n")
    assert exc.value.line == 2
    assert "loop" in str(exc.value)


@pytest.mark.parametrize("text", ["p 2 2\ne 0 1\ne 1 0\n", "e 0 1\n", "p 2 1\ne 0 5\n",
                                  "p 3 2\ne 0 1 2\ne 1 2\n", "p 2 1\ne 0 1 0\n", "p 2 2\ne 0 1\n"])
def test_malformed_graphs(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_weights_round_trip():
    g = parse_graph("p 3 3\ne 0 1 1/2\ne 1 2 3\ne 0 2 2.5\n")
    assert parse_graph(serialize_graph(g)).weights == g.weights


def test_bipartition_c4(c4):
    side = bipartition(c4).side
    assert side[0] != side[1] != side[2] != side[3]


def test_bipartition_cube_is_popcount_parity(cube):
    assert bipartition(cube).side == tuple(bin(v).count("1") % 2 for v in range(8))


def test_triangle_not_bipartite():
    with pytest.raises(NotBipartiteError):
        bipartition(parse_graph("p 3 3\ne 0 1\ne 1 2\ne 2 0\n"))


def test_validate_cycle(cube, c4):
    assert validate_cycle(cube, CUBE_H)
    bad = validate_cycle(cube, list(range(8)))
    assert not bad and bad.position == 1
    assert validate_cycle(c4, [0, 1, 2, 3])


def test_validate_repeated_vertex(cube):
    v = validate_cycle(cube, [0, 1, 3, 2, 6, 7, 5, 5])
    assert not v and "repeated" in v.message


def test_cycle_round_trip():
    assert parse_cycle(serialize_cycle(CUBE_H)) == CUBE_H


def test_anchored_and_same_cycle():
    h = CUBE_H.anchored(0, 4)
    assert h.order[0] == 0 and h.order[-1] == 4
    assert h.same_cycle(CUBE_H)
    with pytest.raises(GraphError):
        CUBE_H.anchored(0, 3)


@pytest.mark.parametrize("inst", [gen.cube(), gen.grid(3, 4), gen.prism(8), gen.chorded_cycle(40, 3, seed=2)])
def test_generators_planted_cycles(inst):
    assert validate_cycle(inst.g, inst.cycle)
    inst.emb.validate(inst.g)
    bipartition(inst.g)

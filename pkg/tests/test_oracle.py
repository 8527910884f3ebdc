from collections import Counter
from fractions import Fraction

import pytest

from pfaffham import generators as gen
from pfaffham.graph import GraphError, HamCycle
from pfaffham.oracle import (brute_tsp, enumerate_cycles, enumerate_cycles_forcing,
                             enumerate_matchings, parse_catalog, serialize_catalog)
from pfaffham.orientations import orientation_from_cycle
from pfaffham.witness import LeftColoring, build_f_lambda, chi_of_cycle, matching_to_cycle

from conftest import CUBE_H


def test_cube_catalog(cube):
    cat = enumerate_cycles(cube)
    assert len(cat) == 6
    assert cat.edge_counts == [4] * 12
    assert len(cat.edge_sets()) == 6


def test_small_counts(c4):
    assert len(enumerate_cycles(c4)) == 1
    assert len(enumerate_cycles(gen.complete4().g)) == 3


def test_size_gate():
    with pytest.raises(GraphError):
        enumerate_cycles(gen.grid(5, 6).g)


@pytest.mark.parametrize("inst", [gen.cube(), gen.grid(4, 4), gen.prism(10), gen.chorded_cycle(20, 3, seed=3),
                                  gen.complete4(), gen.grid(4, 5)])
def test_forcing_matches_backtracker(inst):
    slow = {c.edge_keys() for c in enumerate_cycles(inst.g).cycles}
    fast = {c.edge_keys() for c in enumerate_cycles_forcing(inst.g)}
    assert slow == fast


def test_forcing_with_forced_edge(cube):
    e = cube.edge_id(0, 4)
    got = enumerate_cycles_forcing(cube, forced_in=[e])
    assert len(got) == 4 and all(c.contains_edge(0, 4) for c in got)
    assert len(enumerate_cycles_forcing(cube, max_cycles=2)) == 2


def test_c4_matching_groups(c4):
    ctx = orientation_from_cycle(c4, HamCycle([0, 1, 2, 3]), c4.edge_id(0, 3))
    f = build_f_lambda(ctx, LeftColoring({0: 0, 2: 0}))
    groups = Counter(matching_to_cycle(f, m).canonical().order for m in enumerate_matchings(f))
    assert list(groups.values()) == [2]


def test_cube_matching_groups(cube):
    ctx = orientation_from_cycle(cube, CUBE_H, cube.edge_id(0, 4))
    f = build_f_lambda(ctx, chi_of_cycle(ctx, CUBE_H).restrict_left(ctx))
    groups = Counter(matching_to_cycle(f, m).canonical().order for m in enumerate_matchings(f))
    assert set(groups.values()) == {2 ** 3}


def test_brute_tsp(c4, cube):
    assert brute_tsp(c4, [Fraction(x) for x in (1, 2, 3, 4)]) == 10
    assert brute_tsp(cube) == 8
    assert brute_tsp(gen.star3().g) is None


def test_catalog_round_trip(cube):
    cat = enumerate_cycles(cube)
    assert parse_catalog(serialize_catalog(cat)).cycles == cat.cycles

from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from fivelist import generators as gen
from fivelist.harness import validate_coloring
from fivelist.listcolor import ColoringError, enumerate_colorings, solve
from fivelist.thomassen import HypothesisError, extend_short_cycle, thomassen_extend


def test_triangle_example():
    e = gen.cycle_graph(3)
    col = thomassen_extend(e, 0, {0: {1}, 1: {2}, 2: {1, 2, 3}}, xy=(0, 1))
    assert col == {0: 1, 1: 2, 2: 3}


def test_c5_exhaustive_over_palette():
    e = gen.cycle_graph(5)
    rng = random.Random(0)
    for _ in range(300):
        lists = {v: frozenset(rng.sample(range(1, 7), 3)) for v in range(5)}
        lists[0] = frozenset({rng.randint(1, 6)})
        lists[1] = frozenset(rng.sample(sorted(set(range(1, 7)) - lists[0]), 1))
        col = thomassen_extend(e, 0, lists, xy=(0, 1))
        assert validate_coloring(e, lists, col) == []


def test_w5_random_rims():
    w = gen.wheel(5)
    rng = random.Random(1)
    for _ in range(1000):
        lists = {v: frozenset(rng.sample(range(1, 8), 3)) for v in range(5)}
        lists[5] = frozenset(rng.sample(range(1, 8), 5))
        assert validate_coloring(w, lists, thomassen_extend(w, 0, lists)) == []


@given(st.integers(4, 14), st.integers(0, 10_000), st.integers(0, 10_000))
def test_thomassen_never_fails(n, seed, lseed):
    e, outer = gen.near_triangulation(n, seed)
    rng = random.Random(lseed)
    rim = set(e.faces[outer].walk)
    lists = {v: frozenset(rng.sample(range(1, 7), 3 if v in rim else 5)) for v in e.vertices}
    col = thomassen_extend(e, outer, lists)
    assert validate_coloring(e, lists, col) == []


def test_hypothesis_errors():
    w = gen.wheel(5)
    lists = {v: frozenset({1, 2, 3}) for v in w.vertices}
    with pytest.raises(HypothesisError, match="interior vertex 5"):
        thomassen_extend(w, 0, lists)
    lists[5] = frozenset(range(1, 6))
    lists[2] = frozenset({1, 2})
    with pytest.raises(HypothesisError):
        thomassen_extend(w, 0, lists, xy=(0, 1))
    with pytest.raises(HypothesisError, match="not planar"):
        thomassen_extend(gen.torus_grid(3, 3), 0, {v: {1, 2, 3, 4, 5} for v in range(9)})


def test_forced_precolor_respected():
    w = gen.wheel(5)
    lists = {v: frozenset({1, 2, 3}) for v in range(5)}
    lists[5] = frozenset(range(1, 6))
    col = thomassen_extend(w, 0, lists, xy=(0, 1), precolor={0: 3, 1: 2})
    assert (col[0], col[1]) == (3, 2)


# ------------------------------------------------------------ short cycle
def test_triangle_around_vertex():
    e = gen.k4()
    outer = next(f.index for f in e.faces if 3 not in f.walk)
    lists = {v: frozenset(range(1, 6)) for v in range(4)}
    col = extend_short_cycle(e, outer, {0: 1, 1: 2, 2: 3}, lists)
    assert col[3] in {4, 5}


def test_wheel_4_all_colorings():
    w = gen.wheel(4)
    lists = {v: frozenset(range(1, 6)) for v in w.vertices}
    rim = {v: frozenset(w.adjacency[v]) & set(range(4)) for v in range(4)}
    count = 0
    for phi in enumerate_colorings(rim, {v: lists[v] for v in range(4)}):
        col = extend_short_cycle(w, 0, phi, lists)
        assert validate_coloring(w, lists, col, extends=phi) == []
        count += 1
    assert count == 5 * 4 * 4 * 4 - 5 * 4 * 4 + 5 * 4  # chromatic polynomial of C4 at 5


@given(st.integers(4, 12), st.integers(0, 10_000), st.integers(0, 10_000))
def test_short_cycle_matches_oracle(n, seed, lseed):
    e = gen.planar_triangulation(n, seed) if n > 4 else gen.k4()
    rng = random.Random(lseed)
    outer = rng.randrange(len(e.faces))
    walk = e.faces[outer].walk
    lists = {v: frozenset(rng.sample(range(1, 8), 5)) for v in e.vertices}
    cadj = {v: frozenset(w for w in e.adjacency[v] if w in walk) for v in walk}
    for phi in list(enumerate_colorings(cadj, {v: lists[v] for v in walk}))[:40]:
        col = extend_short_cycle(e, outer, phi, lists)
        assert solve(e, lists, phi) is not None
        assert validate_coloring(e, lists, col, extends=phi) == []


def test_short_cycle_errors():
    e = gen.cycle_graph(5)
    lists = {v: frozenset({1, 2, 3}) for v in range(5)}
    with pytest.raises(HypothesisError):
        extend_short_cycle(e, 0, {v: 1 + v % 3 for v in range(5)}, lists)
    t = gen.k4()
    outer = next(f.index for f in t.faces if 3 not in f.walk)
    with pytest.raises(ColoringError):
        extend_short_cycle(t, outer, {0: 1, 1: 1, 2: 2}, {v: frozenset(range(1, 6)) for v in range(4)})

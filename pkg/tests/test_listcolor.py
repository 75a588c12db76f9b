from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from fivelist import generators as gen
from fivelist.embedding import BudgetExceeded
from fivelist.listcolor import (
    ColoringError,
    check_coloring,
    extends,
    is_inert,
    is_thomassen_face,
    reduce,
    solve,
    union_colorings,
)

TRI = {0: {1, 2}, 1: {0, 2}, 2: {0, 1}}


def naive_colorable(adj, lists) -> bool:
    vs = sorted(adj)
    for combo in product(*(sorted(lists[v]) for v in vs)):
        col = dict(zip(vs, combo))
        if all(col[u] != col[w] for u in vs for w in adj[u]):
            return True
    return False


def test_solve_examples():
    assert solve(TRI, {v: {1, 2, 3} for v in TRI}) is not None
    assert solve(TRI, {v: {1, 2} for v in TRI}) is None
    assert solve(gen.k4(), {v: {1, 2, 3} for v in range(4)}) is None


def test_extends_examples():
    lists = {v: {1, 2, 3} for v in TRI}
    assert extends({0: 1}, TRI, lists)
    assert not extends({0: 1}, TRI, {v: {1, 2} for v in TRI})
    assert not extends({0: 1}, gen.k4(), {v: {1, 2, 3} for v in range(4)})


def test_reduce_examples():
    path = {"u": {"v"}, "v": {"u", "w"}, "w": {"v"}}
    lists = {"u": {1, 2}, "v": {1, 2, 3}, "w": {1, 4}}
    assert reduce(path, lists, {}) == {k: frozenset(v) for k, v in lists.items()}
    edge = {"u": {"v"}, "v": {"u"}}
    assert reduce(edge, {"u": {1}, "v": {1, 2}}, {"u": 1}) == {"v": frozenset({2})}
    out = reduce(path, lists, {"u": 1, "w": 1}, keep={"w"})
    assert out == {"v": frozenset({2, 3}), "w": frozenset({1})}
    with pytest.raises(ColoringError):
        reduce(edge, {"u": {1}, "v": {1}}, {"u": 1, "v": 1})


def test_union_examples():
    g = {"u": {"v"}, "v": {"u"}, "x": set()}
    assert union_colorings(g, {"u": 1}, {}) == {"u": 1}
    assert union_colorings(g, {"u": 1}, {"x": 1}) == {"u": 1, "x": 1}
    with pytest.raises(ColoringError) as ex:
        union_colorings(g, {"u": 1}, {"v": 1})
    assert ex.value.witness == ("u", "v")


lists_st = st.lists(st.frozensets(st.integers(1, 5), min_size=0, max_size=4), min_size=7, max_size=7)


@given(st.integers(5, 7), st.integers(0, 500), lists_st)
def test_solve_sound_and_complete(n, seed, raw):
    e = gen.planar_triangulation(n, seed)
    lists = {v: raw[i] for i, v in enumerate(e.vertices)}
    col = solve(e, lists)
    if col is None:
        assert not naive_colorable(e.adjacency, lists)
    else:
        assert check_coloring(e, lists, col, total=True) == []


@given(st.integers(5, 8), st.integers(0, 500), st.data())
def test_reduce_then_solve_matches_extends(n, seed, data):
    e = gen.planar_triangulation(n, seed)
    lists = {v: frozenset(data.draw(st.frozensets(st.integers(1, 4), min_size=2, max_size=4))) for v in e.vertices}
    v0 = e.vertices[0]
    phi = {v0: min(lists[v0])}
    red = reduce(e, lists, phi)
    rest = {v: {w for w in e.adjacency[v] if w not in phi} for v in e.vertices if v not in phi}
    assert (solve(rest, red) is not None) == extends(phi, e, lists)


@given(st.dictionaries(st.integers(0, 5), st.integers(1, 3), max_size=3),
       st.dictionaries(st.integers(0, 5), st.integers(1, 3), max_size=3))
def test_union_commutes(phi, psi):
    g = {v: set() for v in range(6)}
    if any(phi[v] != psi[v] for v in phi.keys() & psi.keys()):
        return
    assert union_colorings(g, phi, psi) == union_colorings(g, psi, phi)


def test_inert_examples():
    w = gen.wheel(5)
    lists = {v: frozenset(range(1, 6)) for v in w.vertices}
    assert is_inert([], {}, w, lists).inert
    # hub with a 5-list and 5 rim neighbours: never greedy, but inert when the rim uses <= 4 colors
    lists3 = dict(lists)
    lists3[5] = frozenset({1, 2, 3})
    rep = is_inert([5], {}, w, lists3)
    assert not rep.inert and rep.witness is not None
    assert {rep.witness[v] for v in range(5)} >= {1, 2, 3}


def test_inert_greedy_vertex():
    path = {0: {1}, 1: {0, 2}, 2: {1}}
    lists = {0: {1, 2}, 1: {1, 2, 3}, 2: {2, 3}}
    assert is_inert([1], {}, path, lists).inert


def test_inert_depends_on_uncolored_part_only():
    w = gen.wheel(5)
    lists = {v: frozenset(range(1, 6)) for v in w.vertices}
    phi = {0: 1, 1: 2}
    assert is_inert([0, 1, 5], phi, w, lists).inert == is_inert([5], phi, w, lists).inert


def test_inert_budget():
    e = gen.planar_triangulation(12, 3)
    lists = {v: frozenset(range(1, 6)) for v in e.vertices}
    with pytest.raises(BudgetExceeded):
        is_inert([e.vertices[0]], {}, e, lists, budget=3)


def test_thomassen_face_examples():
    tri = (0, 1, 2)
    assert is_thomassen_face(tri, {v: {1, 2, 3} for v in tri})
    assert not is_thomassen_face((0, 1, 2, 3), {0: set(), 1: {1, 2, 3}, 2: set(), 3: {1, 2, 3}})
    c5 = (0, 1, 2, 3, 4)
    assert is_thomassen_face(c5, {0: {1}, 1: {2}, 2: {1, 2, 3}, 3: {1, 2, 3}, 4: {1, 2, 3}})

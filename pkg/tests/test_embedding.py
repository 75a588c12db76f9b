from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fivelist import generators as gen
from fivelist.embedding import (
    INF,
    EmbeddingError,
    Subgraph,
    ball,
    build_embedding,
    distance,
    edge_width,
    face_width,
    faces,
    is_contractible,
    is_short_inseparable,
    k_chords,
    natural_chord_partition,
    natural_partition,
    separating_cycles,
    short_cycles,
    sphere,
)


def brute_edge_width(e, max_len=8):
    lens = [len(c) for c in short_cycles(e, max_len) if not is_contractible(e, c)]
    return min(lens, default=INF)


# ----------------------------------------------------------- construction
def test_k4_faces_and_genus():
    e = gen.k4()
    assert len(e.faces) == 4 and e.genus == 0
    assert all(len(f.walk) == 3 and f.is_cycle for f in faces(e))


def test_c5_two_faces():
    e = gen.cycle_graph(5)
    assert [len(f.walk) for f in e.faces] == [5, 5]
    assert e.genus == 0


def test_torus_3x3_euler():
    e = gen.torus_grid(3, 3)
    assert (len(e.vertices), e.num_edges, len(e.faces), e.genus) == (9, 18, 9, 1)


def test_single_edge_degenerate_face():
    e = build_embedding([0, 1], {0: [1], 1: [0]})
    (f,) = e.faces
    assert f.walk == (0, 1) and not f.is_cycle


def test_torus_4x4_has_16_quads():
    e = gen.torus_grid(4, 4)
    assert len(e.faces) == 16 and all(len(f.walk) == 4 for f in e.faces)


@pytest.mark.parametrize(
    "rot",
    [
        {0: [1, 1], 1: [0, 0]},  # parallel edge
        {0: [1], 1: []},  # dangling end
        {0: [0]},  # loop
    ],
)
def test_rejects_bad_rotations(rot):
    with pytest.raises(EmbeddingError):
        build_embedding(sorted(rot), rot)


# ------------------------------------------------------------- invariants
embeddings = st.one_of(
    st.builds(gen.planar_triangulation, st.integers(5, 16), st.integers(0, 10_000)),
    st.builds(gen.torus_grid, st.integers(3, 5), st.integers(3, 5)),
    st.builds(gen.torus_gadget, st.integers(3, 5), st.integers(3, 5), st.integers(0, 50),
              st.sampled_from(["hub", "square", "square_hub", "diag"])),
)


@given(embeddings)
def test_euler_and_dart_partition(e):
    assert len(e.vertices) - e.num_edges + len(e.faces) == 2 - 2 * e.genus
    darts = [d for f in e.faces for d in f.darts]
    assert sorted(darts) == list(range(e.num_darts))


@given(embeddings)
def test_face_width_at_most_edge_width(e):
    assert face_width(e) <= edge_width(e)


@given(embeddings)
def test_short_inseparable_definition(e):
    assert is_short_inseparable(e) == (edge_width(e) > 4 and not separating_cycles(e, 4))


@given(st.builds(gen.torus_gadget, st.integers(3, 4), st.integers(3, 4), st.integers(0, 50),
                 st.sampled_from(["hub", "square", "diag"])))
def test_edge_width_matches_enumeration(e):
    assert edge_width(e) == brute_edge_width(e)


@given(st.integers(5, 14), st.integers(0, 10_000))
def test_natural_partition_identity(n, seed):
    e = gen.planar_triangulation(n, seed)
    every = Subgraph(frozenset(e.vertices), frozenset(e.edges))
    for c in short_cycles(e, 4)[:6]:
        g0, g1 = natural_partition(e, c)
        assert g0 | g1 == every
        assert g0 & g1 == Subgraph.from_cycle(c)


# ---------------------------------------------------------- width examples
def test_widths_planar_infinite():
    assert edge_width(gen.k4()) == INF and face_width(gen.k4()) == INF


@pytest.mark.parametrize("n", [3, 4])
def test_torus_widths(n):
    e = gen.torus_grid(n, n)
    assert edge_width(e) == n and face_width(e) == n


def test_contractibility_on_torus():
    e = gen.torus_grid(3, 3)
    assert not is_contractible(e, (0, 1, 2))
    assert is_contractible(e, e.faces[0].walk)


def test_distances():
    w = gen.wheel(5)
    assert sphere(w, [5], 1) == frozenset(range(5))
    assert ball(w, [0, 2], 0) == frozenset({0, 2})
    assert distance(gen.torus_grid(4, 4), [0], [10]) == 4
    with pytest.raises(EmbeddingError):
        distance(w, [], [1])


# ------------------------------------------------------ separating cycles
def test_separating_examples():
    assert separating_cycles(gen.k4(), 4) == []
    assert len(separating_cycles(gen.octahedron(), 4)) >= 2
    assert separating_cycles(gen.wheel(5), 4) == []
    assert is_short_inseparable(gen.k4())
    assert not is_short_inseparable(gen.octahedron())
    assert not is_short_inseparable(gen.torus_grid(3, 3))


def test_wheel_rim_partition():
    w = gen.wheel(5)
    sides = sorted(natural_partition(w, tuple(range(5))), key=lambda s: len(s.vertices))
    assert sides[0].vertices == frozenset(range(5))
    assert sides[1].vertices == frozenset(range(6))


def test_nested_squares_inner_side():
    e = gen.nested_cycles([4, 4, 4], hub=False)
    inner = (8, 9, 10, 11)
    sizes = sorted(len(s.vertices) for s in natural_partition(e, inner))
    assert sizes[0] == 4


# ------------------------------------------------------------------ chords
def test_wheel_two_chords():
    w = gen.wheel(5)
    rim = Subgraph.from_cycle(tuple(range(5)))
    ch = k_chords(w, rim, 2)
    assert all(c[1] == 5 and len(c) == 3 for c in ch)
    # every pair of rim vertices, adjacent pairs included
    assert len(ch) == 10


def test_square_diagonal_one_chord():
    e = build_embedding(range(4), {0: [1, 2, 3], 1: [2, 0], 2: [3, 0, 1], 3: [0, 2]})
    sq = Subgraph.from_cycle((0, 1, 2, 3))
    assert k_chords(e, sq, 1) == [(0, 2)]
    outer = next(f for f in e.faces if len(f.walk) == 4)
    g0, g1 = natural_chord_partition(e, outer, (0, 2))
    assert g0 & g1 == Subgraph.from_edges([(0, 2)], (0, 2))
    assert sorted(len(g.vertices) for g in (g0, g1)) == [3, 3]


@given(st.integers(5, 12), st.integers(0, 1000), st.integers(1, 2))
def test_short_chords_are_proper(n, seed, k):
    e, outer = gen.near_triangulation(n, seed)
    h = Subgraph.from_cycle(e.faces[outer].walk)
    for c in k_chords(e, h, k):
        assert c[0] != c[-1]

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivelist import generators as gen
from fivelist.charts import (
    Chart,
    ChartError,
    NotQualifying,
    SepIndex,
    TilingParams,
    annulus_region,
    check_fw_bounds,
    classify_red_blue,
    cycle_intersection_decompose,
    ext_int,
    fw_star,
    intersection_identities,
    is_tessellation,
    is_tiling,
    select_sdr,
    sim,
    triangulate_preserving,
    validate_chart,
    verify_augmentation,
)
from fivelist.embedding import (
    INF,
    Subgraph,
    build_embedding,
    distance,
    face_width,
    is_short_inseparable,
    separating_cycles,
    short_cycles,
)
from fivelist.harness import compare_sep, gen_marked_faces, nested_squares


def _lists(e, k=5):
    return {v: frozenset(range(k)) for v in e.vertices}


def _nested(layers: int, stellated: int = 0, seed: int = 0):
    e = nested_squares(layers, stellated, seed)
    return e, gen.outer_face_index(e, range(4))


# ------------------------------------------------------------- params
def test_tiling_params_formulas():
    p = TilingParams(0, 2, 1)
    assert p.delta == pytest.approx(4.2)
    assert p.alpha == pytest.approx(7 * 4.2 * math.log2(4.2) + 3)
    assert TilingParams(1, 2, 1).delta == pytest.approx(4.2 * 6)


# ------------------------------------------------------------- charts
def test_validate_single_face_passes():
    e = gen.icosahedron()
    ch = Chart(e, [0], 0, _lists(e))
    assert validate_chart(ch).ok


def test_validate_close_faces_fail_clause_1():
    e = gen.planar_grid(4, 6)
    quads = [f.index for f in e.faces if len(f.walk) == 4]
    a = quads[0]
    b = next(f for f in quads if distance(e, e.faces[a].walk, e.faces[f].walk) == 1)
    ch = Chart(e, [a, b], a, _lists(e), alpha=2)
    rep = validate_chart(ch)
    assert "1" in rep.clauses()
    wit = next(w for c, _, w in rep.failures if c == "1")
    assert len(wit) == 2


def test_validate_long_precolored_path_fails_3i():
    e = gen.cycle_graph(8)
    walk = e.faces[0].walk
    ch = Chart(e, [0], 0, _lists(e), ppaths={0: walk[:6]}, k=4)
    assert "3i" in validate_chart(ch).clauses()


def test_validate_short_list_on_face_fails_3ii():
    e = gen.cycle_graph(6)
    li = _lists(e)
    li[e.faces[0].walk[0]] = frozenset({1, 2})
    assert "3ii" in validate_chart(Chart(e, [0], 0, li)).clauses()


def test_chart_rejects_root_outside():
    e = gen.k4()
    with pytest.raises(ChartError):
        Chart(e, [0], 1, {})


# ------------------------------------------------------ tessellations
def test_icosahedron_is_tessellation():
    e = gen.icosahedron()
    assert is_tessellation(Chart(e, [0], 0, _lists(e)))


def test_octahedron_equators_separate():
    # no separating triangles, but each equator square has a pole on either side
    e = gen.octahedron()
    assert separating_cycles(e, 3) == []
    assert len(separating_cycles(e, 4)) == 3
    assert not is_short_inseparable(e)


def test_tiling_desk_params_on_planar():
    e = gen.icosahedron()
    ok, bad = is_tiling(Chart(e, [0], 0, _lists(e)), TilingParams(0, 2, 1))
    assert ok, bad


def test_tiling_reports_failed_clause():
    e = gen.planar_grid(3, 3)
    ok, bad = is_tiling(Chart(e, [0], 0, _lists(e)), TilingParams(0, 2, 1))
    assert not ok and "chord-triangulated" in bad


# ---------------------------------------------------------------- fw*
def test_fw_star_sphere_is_inf():
    assert fw_star(gen.icosahedron()) == INF


def test_fw_star_c4xc4():
    e = gen.torus_grid(4, 4)
    assert face_width(e) == 4
    assert fw_star(e) == 4


@pytest.mark.parametrize("kind", ["hub", "square", "square_hub", "diag"])
def test_fw_bounds_on_gadgets(kind):
    e = gen.torus_gadget(4, 4, 1, kind)
    b = check_fw_bounds(e)
    assert b.ok, b


@pytest.mark.parametrize("m,n", [(3, 3), (3, 5), (5, 4), (6, 6)])
def test_fw_sandwich_grids(m, n):
    b = check_fw_bounds(gen.torus_grid(m, n))
    assert b.fw >= b.fw_star >= b.fw / 5
    assert b.ok


# -------------------------------------------------- triangulation
def test_triangulate_identity_when_done():
    e = gen.icosahedron()
    aug = triangulate_preserving(e, [0], 1)
    assert aug.added == []


def test_triangulate_one_square():
    e = gen.octahedron()
    u = 0
    v = e.rotation[u][0]
    rot = {w: [z for z in e.rotation[w] if {w, z} != {u, v}] for w in e.vertices}
    g = build_embedding(list(e.vertices), rot)
    sq = next(f.index for f in g.faces if len(f.walk) == 4)
    other = next(f.index for f in g.faces if f.index != sq)
    aug = triangulate_preserving(g, [other], 1)
    assert len(aug.added) == 1
    assert verify_augmentation(g, [other], 1, aug).ok


def test_triangulate_rejects_close_faces():
    e = gen.planar_grid(4, 4)
    with pytest.raises(ChartError):
        triangulate_preserving(e, [0, 1], 5)


@pytest.mark.parametrize("alpha,k,torus", [(4, 2, False), (5, 3, False), (4, 2, True)])
def test_triangulate_marked_faces(alpha, k, torus):
    e, faces = gen_marked_faces(alpha, k, 3, torus=torus)
    aug = triangulate_preserving(e, faces, alpha)
    rep = verify_augmentation(e, faces, alpha, aug)
    assert rep.ok, rep


# ------------------------------------------------------- regions
def test_annulus_region_empty_family_is_interior():
    e, outer = _nested(3)
    ch = Chart(e, [outer], outer, {})
    d = (4, 5, 6, 7)
    assert annulus_region(ch, d) == ext_int(ch, d)[1]


def test_annulus_between_nested_squares():
    e, outer = _nested(3)
    ch = Chart(e, [outer], outer, {})
    a = annulus_region(ch, (4, 5, 6, 7), [(8, 9, 10, 11)])
    assert a.vertices == frozenset(range(4, 12))


def test_root_inside_swaps_sides():
    e, outer = _nested(3)
    hub_face = next(f.index for f in e.faces if 12 in f.walk)
    d = (4, 5, 6, 7)
    ext0, int0 = ext_int(Chart(e, [outer], outer, {}), d)
    ext1, int1 = ext_int(Chart(e, [hub_face], hub_face, {}), d)
    assert (ext0, int0) == (int1, ext1)


# ------------------------------------------------------------ Sep
def test_no_separating_cycles():
    e = gen.icosahedron()
    si = SepIndex(Chart(e, [0], 0, {}))
    assert si.sep == []


def test_three_nested_squares():
    e, outer = _nested(4)
    si = SepIndex(Chart(e, [outer], outer, {}))
    a, b, c = (4, 5, 6, 7), (8, 9, 10, 11), (12, 13, 14, 15)
    assert set(si.descendants(a)) == {b, c}
    assert si.immediate_descendants(a) == [b]
    assert si.immediate_descendants(b) == [c]
    assert si.is_maximal(a) and not si.is_maximal(b)
    assert si.is_minimal(c)


def test_red_blue():
    e, outer = _nested(3)
    inner = next(f.index for f in e.faces if 12 in f.walk)
    band = next(f.index for f in e.faces if set(f.walk) == {4, 5, 8, 9})
    # vacuous blue: no designated face inside
    assert classify_red_blue(Chart(e, [outer], outer, {}), (8, 9, 10, 11)) == "blue"
    # a designated face inside D not covered by a descendant
    assert classify_red_blue(Chart(e, [outer, band], outer, {}), (4, 5, 6, 7)) == "red"
    # the descendant covers it
    assert classify_red_blue(Chart(e, [outer, inner], outer, {}), (4, 5, 6, 7)) == "blue"


def test_sim_via_shared_face():
    e, outer = _nested(3)
    inner = next(f.index for f in e.faces if 12 in f.walk)
    ch = Chart(e, [outer, inner], outer, {})
    assert sim(ch, (4, 5, 6, 7), (8, 9, 10, 11), 1, 1)
    assert not sim(ch, (4, 5, 6, 7), (8, 9, 10, 11), 0, 0)


def test_select_sdr_no_descendants():
    e, outer = _nested(2)
    ch = Chart(e, [outer, next(f.index for f in e.faces if 8 in f.walk)], outer, {})
    assert select_sdr(ch, (4, 5, 6, 7), 3, 1) == []


@pytest.mark.parametrize("layers,stell,seed", [(3, 0, 0), (4, 1, 1), (5, 2, 2), (4, 3, 3)])
@pytest.mark.parametrize("delta,gamma", [(1, 1), (3, 2)])
def test_sep_matches_naive(layers, stell, seed, delta, gamma):
    e, outer = _nested(layers, stell, seed)
    faces = [outer] + [f.index for f in e.faces if f.index != outer][seed::5][:3]
    diffs = compare_sep(Chart(e, faces, outer, {}), delta, gamma)
    assert diffs == []


# --------------------------------------------------- intersections
def test_intersection_disjoint_squares():
    e = gen.torus_grid(6, 6)
    with pytest.raises(NotQualifying):
        cycle_intersection_decompose(Chart(e, [0], 0, {}), e.faces[0].walk, e.faces[1].walk)


def _pairs(e):
    ch = Chart(e, [0], 0, {})
    cycles = short_cycles(e, 4)
    for c0 in cycles:
        for c1 in cycles:
            if c0 == c1:
                continue
            try:
                x = cycle_intersection_decompose(ch, c0, c1)
            except ChartError:
                continue
            yield c0, c1, x


def _shared(c0, c1) -> int:
    return len(Subgraph.from_cycle(c0).edges & Subgraph.from_cycle(c1).edges)


def test_intersection_edge_disjoint_example():
    e = gen.planar_triangulation(12, 0)
    c0, c1, x = next((a, b, x) for a, b, x in _pairs(e) if x.edge_disjoint and len(a) == len(b) == 4)
    ii, ie, ei, ee = x.lengths()
    assert ii + ee == 8 and ie + ei == 8
    assert all(intersection_identities(x, 4, 4).values())


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_intersection_corrected_statement(seed):
    # both pair sums lose exactly the shared edges between them, never more
    e = gen.planar_triangulation(12, seed)
    for c0, c1, x in _pairs(e):
        ii, ie, ei, ee = x.lengths()
        total = len(c0) + len(c1)
        s = _shared(c0, c1)
        assert ii + ee <= total and ie + ei <= total
        assert (ii + ee) + (ie + ei) == 2 * total - 2 * s
        assert (total - ii - ee) % 2 == 0 and (total - ie - ei) % 2 == 0
        if len(c0) == len(c1) == 4:
            assert len({ii % 2, ie % 2, ei % 2, ee % 2}) == 1
        if s == 0:
            assert ii + ee == total and ie + ei == total

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivelist import generators as gen
from fivelist.annulus import (
    AnnulusHypothesisError,
    Lens,
    annulus_color,
    color_lens,
    delta_L,
    frame_subgraph,
    halve_minus,
    halve_plus,
    iterate_inward,
    link_coloring,
    one_step,
    radius,
    reduced_list,
    ring_context,
    split_frame,
    tw,
    unsplit,
)
from fivelist.embedding import bfs_distances
from fivelist.harness import gen_lists, instances
from fivelist.listcolor import is_inert, solve
from fivelist.skeleton import delta_sets, ndepth


def _rotations(e):
    return {v: list(e.rotation[v]) for v in e.vertices}


def _random_psi(e, cycle, lists, rng):
    for _ in range(200):
        psi = {}
        for v in cycle:
            opts = [c for c in lists[v] if all(psi.get(w) != c for w in e.adjacency[v])]
            if not opts:
                break
            psi[v] = rng.choice(opts)
        else:
            return psi
    pytest.skip("no proper boundary coloring drawn")


def _ring(kind: str, seed: int):
    """First ring fixture at or after ``seed`` with NDepth(C) >= 2."""
    for s in range(seed, seed + 200):
        try:
            if kind == "deep":
                e, _, outer = gen.deep_ring(8, 2, s)
            else:
                e, _, outer = gen.shared_ring(8, 2, s)
        except RuntimeError:
            continue
        cyc = tuple(e.faces[outer].walk)
        if ndepth(e, cyc, outer, cap=2) >= 2:
            return e, outer, cyc
    raise RuntimeError("no ring fixture found")


# --------------------------------------------------------------- radius
def test_radius_examples():
    assert radius(4) == 4
    assert radius(8) == 5
    assert radius(9) == 6


# -------------------------------------------------------------- delta_L
def test_delta_empty_without_colors():
    e, outer, cyc = _ring("deep", 0)
    lists = {v: frozenset(range(5)) for v in e.vertices}
    assert delta_L(e, cyc, outer, lists, {}) == frozenset()


def test_delta_member_with_three_colors_removed():
    e, outer, cyc = _ring("deep", 1)
    _, d2p = delta_sets(e, cyc, outer)
    y = sorted(d2p)[0]
    lists = {v: frozenset(range(5)) for v in e.vertices}
    nb = [w for w in e.adjacency[y] if w in cyc]
    assert len(nb) == 3
    col = dict(zip(nb, (0, 1, 2)))
    assert y in delta_L(e, cyc, outer, lists, col)
    assert len(reduced_list(e, lists, col, y)) == 2


def test_u1_vertex_never_in_delta():
    e, outer, cyc = _ring("deep", 2)
    lists = {v: frozenset(range(5)) for v in e.vertices}
    psi = _random_psi(e, cyc, lists, random.Random(0))
    cs = set(cyc)
    u1 = [v for v in e.vertices if v not in cs and sum(w in cs for w in e.adjacency[v]) == 1]
    assert u1
    dl = delta_L(e, cyc, outer, lists, psi)
    assert not dl & set(u1)
    assert all(len(reduced_list(e, lists, psi, v)) >= 4 for v in u1)


def test_tw_empty_with_large_lists():
    e, outer, cyc = _ring("deep", 3)
    lists = {v: frozenset(range(9)) for v in e.vertices}
    ctx = ring_context(e, cyc, outer, lists, _random_psi(e, cyc, lists, random.Random(1)))
    assert tw(ctx, ctx.psi) == frozenset()


def test_tw_contains_vertex_with_two_colors_left():
    e, outer, cyc = _ring("deep", 3)
    lists = {v: frozenset(range(5)) for v in e.vertices}
    ctx = ring_context(e, cyc, outer, lists, {v: 0 for v in cyc[:1]})
    y = sorted(delta_sets(e, cyc, outer)[1])[0]
    nb = [w for w in e.adjacency[y] if w in cyc]
    col = dict(zip(nb, (0, 1, 2)))
    assert y in tw(ctx, col)
    assert tw(ctx, col) <= delta_L(e, cyc, outer, lists, col)


# --------------------------------------------------- Link and Halve procedures
def _shared_ctx(seed: int):
    e, outer, cyc = _ring("shared", seed)
    rng = random.Random(seed)
    lists = {v: frozenset(rng.sample(range(7), 5)) for v in e.vertices}
    psi = _random_psi(e, cyc, lists, rng)
    ctx = ring_context(e, cyc, outer, lists, psi)
    comps = ctx.components()
    assert comps, "shared rings keep part of C on C*"
    return ctx, comps


def _assert_halve(ctx, q, res, col):
    full = dict(col)
    full.update(res.coloring)
    unc = [v for v in q if v not in res.coloring]
    assert set(unc) <= set(ctx.mid)
    assert len(res.tw) <= res.bound
    rep = is_inert(set(unc), full, ctx.e, ctx.lists)
    assert rep.inert


def test_link_single_vertex():
    ctx, comps = _shared_ctx(0)
    p = comps[0][0]
    c = min(ctx.lpsi(p))
    res = link_coloring(ctx, (p,), ("point", p, c))
    assert res.coloring == {p: c}


def test_link_edge_with_sets():
    ctx, comps = _shared_ctx(1)
    q = next(q for q in comps if len(q) >= 2)[:2]
    a, b = sorted(ctx.lpsi(q[0])), sorted(ctx.lpsi(q[1]))
    res = link_coloring(ctx, q, ("sets", a[:2], b[:2]))
    assert res.coloring[q[0]] in a[:2] and res.coloring[q[1]] in b[:2]
    assert res.coloring[q[0]] != res.coloring[q[1]]


def test_link_rejects_interior_point():
    ctx, comps = _shared_ctx(2)
    q = max(comps, key=len)
    if len(q) < 3:
        pytest.skip("component too short")
    with pytest.raises(AnnulusHypothesisError):
        link_coloring(ctx, q, ("point", q[1], min(ctx.lpsi(q[1]))))


@pytest.mark.parametrize("seed", range(8))
def test_halve_minus_and_plus_clauses(seed):
    ctx, comps = _shared_ctx(seed)
    for q in comps:
        res = halve_minus(ctx, q)
        _assert_halve(ctx, q, res, ctx.psi)
        assert res.bound == sum(v in ctx.delta_before() for v in q) // 2
        x = q[0]
        c = sorted(ctx.lpsi(x))[seed % len(ctx.lpsi(x))]
        res2 = halve_plus(ctx, q, x, c)
        assert res2.coloring[x] == c
        _assert_halve(ctx, q, res2, ctx.psi)


def test_halve_minus_empty_delta_has_no_tw():
    e, outer, cyc = _ring("shared", 5)
    lists = {v: frozenset(range(9)) for v in e.vertices}
    psi = _random_psi(e, cyc, lists, random.Random(5))
    ctx = ring_context(e, cyc, outer, lists, psi)
    assert not ctx.delta_before()
    for q in ctx.components():
        assert halve_minus(ctx, q).tw == frozenset()


def test_halve_plus_rejects_bad_color():
    ctx, comps = _shared_ctx(3)
    q = comps[0]
    bad = next(c for c in range(50) if c not in ctx.lpsi(q[0]))
    with pytest.raises(AnnulusHypothesisError):
        halve_plus(ctx, q, q[0], bad)


# -------------------------------------------------------------- one step
def test_ring_context_rejects_short_cycle():
    e = gen.k4()
    lists = {v: frozenset(range(5)) for v in e.vertices}
    with pytest.raises(AnnulusHypothesisError):
        ring_context(e, tuple(e.faces[0].walk), 0, lists, {})


def test_one_step_empty_delta_stays_empty():
    e, outer, cyc = _ring("deep", 4)
    lists = {v: frozenset(range(9)) for v in e.vertices}
    psi = _random_psi(e, cyc, lists, random.Random(4))
    res = one_step(ring_context(e, cyc, outer, lists, psi))
    assert not res.delta_before and not res.delta_after


def test_one_step_three_halves_to_two():
    for seed in range(40):
        e, outer, cyc = _ring("deep", seed)
        try:
            inst = gen_lists(e, "adversarial-Delta_L", seed, outer=outer, target=3)
        except ValueError:
            continue
        res = one_step(ring_context(e, cyc, outer, inst.lists, inst.psi))
        assert len(res.delta_before) == 3
        assert len(res.delta_after) <= 2
        return
    pytest.skip("no fixture realised |Delta_L| = 3")


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_one_step_property(seed):
    docs = instances("onestep", seed, 1)
    doc = docs[0]
    cyc = tuple(doc.e.faces[doc.outer].walk)
    res = one_step(ring_context(doc.e, cyc, doc.outer, doc.lists, doc.precolor))
    assert len(res.delta_after) <= -(-len(res.delta_before) // 2)
    z = set(res.w1.vertices) - set(res.psi)
    assert is_inert(z, res.psi, doc.e, doc.lists).inert


# ------------------------------------------------------------ iteration
def _deep_disc(seed: int):
    e, _, outer = gen.deep_ring(6, 6, seed)
    return e, outer, tuple(e.faces[outer].walk)


def test_iterate_inward_chain():
    e, outer, cyc = _deep_disc(0)
    rng = random.Random(0)
    lists = {v: frozenset(rng.sample(range(7), 5)) for v in e.vertices}
    psi = _random_psi(e, cyc, lists, rng)
    res = iterate_inward(e, cyc, psi, lists, outer)
    assert res.r == radius(len(cyc))
    assert len(res.chain) == res.r
    for a, b in zip(res.chain, res.chain[1:]):
        assert b <= -(-a // 2)
    assert res.chain[-1] <= 1
    assert all(x.thomassen for x in res.residual)
    assert is_inert(res.skipped, res.psi, e, lists).inert


def test_iterate_inward_depth_guard():
    e, _, outer = gen.deep_ring(8, 2, 0)
    cyc = tuple(e.faces[outer].walk)
    lists = {v: frozenset(range(5)) for v in e.vertices}
    with pytest.raises(AnnulusHypothesisError):
        iterate_inward(e, cyc, _random_psi(e, cyc, lists, random.Random(0)), lists, outer)


# ----------------------------------------------------------------- lens
def test_color_lens_requires_total_tau():
    doc = instances("lens", 0, 1)[0]
    cyc = tuple(doc.e.faces[doc.outer].walk)
    tau = dict(doc.precolor)
    tau.pop(cyc[0])
    with pytest.raises(AnnulusHypothesisError):
        color_lens(doc.e, cyc, doc.outer, doc.lists, tau)


@pytest.mark.parametrize("seed", range(4))
def test_color_lens_postconditions(seed):
    doc = instances("lens", seed, 1)[0]
    e, outer = doc.e, doc.outer
    cyc = tuple(e.faces[outer].walk)
    assert Lens(e, cyc, outer, doc.lists, dict(doc.precolor), radius(len(cyc)) * len(cyc)).check() == []
    res = color_lens(e, cyc, outer, doc.lists, doc.precolor)
    assert all(res.psi[v] == c for v, c in doc.precolor.items())
    dist = bfs_distances(e, cyc)
    assert all(dist[v] <= res.r * res.n for v in res.K.vertices)
    assert all(x.thomassen for x in res.residual)
    unc = set(res.K.vertices) - set(res.psi)
    assert is_inert(unc, res.psi, e, doc.lists).inert


def test_color_lens_triangulated_disc_is_skeleton():
    e, outer = gen.wheel(5), 0
    cyc = tuple(e.faces[outer].walk)
    lists = {v: frozenset(range(5)) for v in e.vertices}
    tau = solve(e, lists)
    res = color_lens(e, cyc, outer, lists, {v: tau[v] for v in cyc})
    assert not res.inward
    assert set(res.psi) >= set(cyc)


# -------------------------------------------------------- vertex splitting
def test_split_concentric_squares_length():
    e, F, F2, P = gen.two_hole(0, 2, quad=True)
    fr = split_frame(e, F, F2, P)
    assert len(fr.cycle) == len(F) + len(F2) + 2 * (len(P) - 1)
    if len(F) == len(F2) == 4:
        assert len(fr.cycle) == 12
    for u, us in fr.pairs:
        assert not fr.g.has_edge(u, us)


@pytest.mark.parametrize("plen", [0, 1, 2])
@pytest.mark.parametrize("seed", range(5))
def test_split_round_trip(plen, seed):
    e, F, F2, P = gen.two_hole(seed, plen)
    fr = split_frame(e, F, F2, P)
    back = unsplit(fr)
    assert list(back.vertices) == list(e.vertices)
    assert _rotations(back) == _rotations(e)


def test_split_rejects_bad_path():
    e, F, F2, P = gen.two_hole(1, 2)
    with pytest.raises(AnnulusHypothesisError):
        split_frame(e, F, F2, tuple(reversed(P)))


# ------------------------------------------------------------- theorem
def test_annulus_plen0_constants():
    doc = next(d for d in instances("annulus", 0, 3) if d.params["plen"] == 0)
    e = doc.e
    F, F2 = tuple(e.faces[doc.outer].walk), tuple(e.faces[doc.cfaces[0]].walk)
    P = doc.ppaths[doc.cfaces[0]]
    res = annulus_color(e, F, F2, P, doc.precolor, doc.lists)
    assert (res.n, res.r) == (8, 5)


@pytest.mark.parametrize("seed", range(6))
def test_annulus_postconditions(seed):
    doc = instances("annulus", seed, 1)[0]
    e = doc.e
    F, F2 = tuple(e.faces[doc.outer].walk), tuple(e.faces[doc.cfaces[0]].walk)
    P = doc.ppaths[doc.cfaces[0]]
    res = annulus_color(e, F, F2, P, doc.precolor, doc.lists)
    assert res.checks["two_edge_connected"] and res.checks["within_ball"]
    assert res.checks["residual_thomassen"] and res.checks["frame_in_K"]
    assert frame_subgraph(F, F2, P) <= res.K
    unc = set(res.K.vertices) - set(res.psi)
    assert is_inert(unc, res.psi, e, doc.lists).inert


def test_annulus_needs_frame_colors():
    doc = instances("annulus", 0, 1)[0]
    e = doc.e
    F, F2 = tuple(e.faces[doc.outer].walk), tuple(e.faces[doc.cfaces[0]].walk)
    phi = dict(doc.precolor)
    phi.pop(F[0])
    with pytest.raises(AnnulusHypothesisError):
        annulus_color(e, F, F2, doc.ppaths[doc.cfaces[0]], phi, doc.lists)


def test_ndepth_of_ring_fixtures():
    e, outer, cyc = _ring("deep", 0)
    assert ndepth(e, cyc, outer, cap=2) >= 2

"""Delta sets, split cycles, the w/F tower, nonsplit depth and skeletons.

Everything here is relative to a planar embedding together with a designated
*outer* face index. For a cycle C, ``Int(C)`` is the closed side of C not
containing the outer face.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import networkx as nx

from .embedding import (
    INF,
    Embedding,
    EmbeddingError,
    Subgraph,
    bfs_distances,
    cycle_sides,
    region_subgraph,
)

Vertex = Hashable


class SkeletonError(RuntimeError):
    """A precondition failed or a step the construction relies on is missing."""


# ------------------------------------------------------------------ discs
@dataclass(frozen=True)
class Disc:
    """The closed side Int(C) of a cycle C (the side away from the outer face)."""

    cycle: tuple
    faces: frozenset
    vertices: frozenset
    edges: frozenset

    @property
    def strict(self) -> frozenset:
        return self.vertices - set(self.cycle)

    def subgraph(self) -> Subgraph:
        return Subgraph(self.vertices, self.edges)

    def adjacency(self, e: Embedding) -> dict:
        return {v: frozenset(w for w in e.adjacency[v] if frozenset((v, w)) in self.edges) for v in self.vertices}


def disc(e: Embedding, cycle: Sequence[Vertex], outer: int) -> Disc:
    if e.genus != 0:
        raise EmbeddingError("discs are only defined here for planar embeddings")
    cycle = tuple(cycle)
    sides = cycle_sides(e, cycle)
    if sides is None:
        raise EmbeddingError("cycle does not separate")
    inner = sides.faces[1 - sides.side_with_face(outer)]
    sub = region_subgraph(e, inner, Subgraph.from_cycle(cycle))
    return Disc(cycle, frozenset(inner), sub.vertices, sub.edges)


def cycle_position(cycle: Sequence[Vertex]) -> dict:
    return {v: i for i, v in enumerate(cycle)}


def cycle_dist(n: int, i: int, j: int) -> int:
    d = abs(i - j) % n
    return min(d, n - d)


# ------------------------------------------------------------ delta sets
def cycle_neighbors(e: Embedding, d: Disc) -> dict:
    """N(u) on the cycle for every strictly interior vertex u."""
    cs = set(d.cycle)
    return {u: frozenset(w for w in e.adjacency[u] if w in cs) for u in d.strict}


def two_path(cycle: Sequence[Vertex], nbrs: frozenset):
    """(a, b, c) if nbrs induce a length-two subpath a-b-c of the cycle, else None."""
    n = len(cycle)
    if len(nbrs) != 3 or n < 4:
        return None
    pos = cycle_position(cycle)
    for v in nbrs:
        i = pos[v]
        a, c = cycle[(i - 1) % n], cycle[(i + 1) % n]
        if a in nbrs and c in nbrs:
            return (a, v, c)
    return None


def delta_sets(e: Embedding, cycle: Sequence[Vertex], outer: int, *, d: Disc | None = None) -> tuple:
    """(Delta^{>=3}(C), Delta^{2p}(C)) as frozensets."""
    d = d or disc(e, cycle, outer)
    cyc = tuple(cycle)
    nb = cycle_neighbors(e, d)
    d3 = frozenset(u for u, ns in nb.items() if len(ns) >= 3)
    if len(cyc) == 3:
        d2p = frozenset(u for u in d3 if len(nb[u]) == 3)
    else:
        d2p = frozenset(u for u in d3 if two_path(cyc, nb[u]) is not None)
    return d3, d2p


def is_k_triangulated(e: Embedding, cycle: Sequence[Vertex], k: int, outer: int, *, d: Disc | None = None,
                      witness: bool = False):
    """Every face of Int(C) at a vertex of B_k(C), except C itself, is a triangle."""
    d = d or disc(e, cycle, outer)
    dist = bfs_distances(e, d.cycle, d.adjacency(e))
    for f in sorted(d.faces):
        face = e.faces[f]
        if len(face.walk) == 3:
            continue
        if any(dist.get(v, INF) <= k for v in face.walk):
            return (False, face.walk) if witness else False
    return (True, None) if witness else True


def chords(e: Embedding, cycle: Sequence[Vertex], outer: int, *, d: Disc | None = None) -> list:
    """Chords of C lying in Int(C), lexicographic by vertex index."""
    d = d or disc(e, cycle, outer)
    n = len(cycle)
    cedges = {frozenset((cycle[i], cycle[(i + 1) % n])) for i in range(n)}
    cs = set(cycle)
    out = []
    for ed in d.edges:
        if ed <= cs and ed not in cedges:
            out.append(tuple(sorted(ed, key=e.index.__getitem__)))
    return sorted(out, key=lambda p: (e.index[p[0]], e.index[p[1]]))


def far_two_chords(e: Embedding, cycle: Sequence[Vertex], outer: int, *, d: Disc | None = None, far: int = 3) -> list:
    """2-chords a-u-b of C in Int(C) whose ends are at cycle distance >= far."""
    d = d or disc(e, cycle, outer)
    pos = cycle_position(cycle)
    n = len(cycle)
    out = []
    for u, ns in cycle_neighbors(e, d).items():
        ns = sorted(ns, key=e.index.__getitem__)
        for i in range(len(ns)):
            for j in range(i + 1, len(ns)):
                if cycle_dist(n, pos[ns[i]], pos[ns[j]]) >= far:
                    out.append((ns[i], u, ns[j]))
    return sorted(out, key=lambda t: (e.index[t[0]], e.index[t[2]], e.index[t[1]]))


@dataclass(frozen=True)
class SplitReport:
    split: bool
    reasons: tuple  # every condition 1-4 that fires
    anomaly: str | None = None

    @property
    def reason(self) -> int | None:
        return self.reasons[0] if self.reasons else None

    def __bool__(self) -> bool:
        return self.split


def is_split(e: Embedding, cycle: Sequence[Vertex], outer: int, *, d: Disc | None = None) -> SplitReport:
    """The four split conditions, evaluated literally.

    A nonsplit cycle with empty Delta^{2p} (an apex over a 4-cycle) is
    reported with ``anomaly='apex'``: no condition fires but the tower
    cannot start.
    """
    cycle = tuple(cycle)
    if len(cycle) <= 3:
        raise SkeletonError("split/nonsplit is only defined for cycles of length > 3")
    d = d or disc(e, cycle, outer)
    reasons = []
    if not is_k_triangulated(e, cycle, 0, outer, d=d):
        reasons.append(1)
    d3, d2p = delta_sets(e, cycle, outer, d=d)
    if not d3:
        reasons.append(2)
    if chords(e, cycle, outer, d=d):
        reasons.append(3)
    if far_two_chords(e, cycle, outer, d=d):
        reasons.append(4)
    anomaly = "apex" if not reasons and not d2p else None
    return SplitReport(bool(reasons), tuple(reasons), anomaly)


# ------------------------------------------------------------------ towers
@dataclass
class Tower:
    """Levels (H^i, C^i) of the one-layer growth from a nonsplit cycle C."""

    base: tuple
    levels: list = field(default_factory=list)  # [(Subgraph H^i, tuple C^i)]

    @property
    def r(self) -> int:
        return len(self.levels) - 1

    @property
    def w(self) -> Subgraph:
        return self.levels[-1][0]

    @property
    def F(self) -> tuple:
        return self.levels[-1][1]


def grow_tower(e: Embedding, cycle: Sequence[Vertex], outer: int, *, check_nonsplit: bool = True) -> Tower:
    cycle = tuple(cycle)
    if len(cycle) <= 3:
        raise SkeletonError("tower needs |V(C)| > 3")
    if check_nonsplit:
        rep = is_split(e, cycle, outer)
        if rep.split:
            raise SkeletonError(f"cycle is split (reason {rep.reason})")
    near = {v for v, dd in bfs_distances(e, cycle, disc(e, cycle, outer).adjacency(e)).items() if dd <= 1}
    h = Subgraph.from_cycle(cycle)
    tower = Tower(cycle, [(h, cycle)])
    cur = cycle
    while True:
        dc = disc(e, cur, outer)
        _, d2p = delta_sets(e, cur, outer, d=dc)
        grow = sorted((u for u in d2p if u in near), key=e.index.__getitem__)
        if not grow:
            return tower
        nb = cycle_neighbors(e, dc)
        repl = {}
        new_edges = []
        for u in grow:
            a, b, c = two_path(cur, nb[u])
            if b in repl:
                raise SkeletonError(f"two tower vertices share the midpoint {b!r}")
            repl[b] = u
            new_edges += [(u, a), (u, b), (u, c)]
        nxt = tuple(repl.get(v, v) for v in cur)
        n = len(nxt)
        for i in range(n):
            if not e.has_edge(nxt[i], nxt[(i + 1) % n]):
                raise SkeletonError("tower step does not produce a cycle")
            new_edges.append((nxt[i], nxt[(i + 1) % n]))
        h = h | Subgraph.from_edges(new_edges)
        tower.levels.append((h, nxt))
        cur = nxt


@dataclass
class WK:
    """w^k(C) and F^k(C) plus the per-step record."""

    w: Subgraph
    F: tuple
    steps: list  # list of F^0, F^1, ..., F^k
    stalled: bool = False  # a nonsplit F^j whose tower cannot start


def wk_tower(e: Embedding, cycle: Sequence[Vertex], k: int, outer: int) -> WK:
    cycle = tuple(cycle)
    if len(cycle) <= 3:
        raise SkeletonError("w^k needs |V(C)| > 3")
    w = Subgraph.from_cycle(cycle)
    cur = cycle
    steps = [cur]
    stalled = False
    for _ in range(k):
        if stalled or is_split(e, cur, outer).split:
            steps.append(cur)
            continue
        t = grow_tower(e, cur, outer, check_nonsplit=False)
        if t.r == 0:
            stalled = True
        w = w | t.w
        cur = t.F
        steps.append(cur)
    return WK(w, cur, steps, stalled)


def ndepth(e: Embedding, cycle: Sequence[Vertex], outer: int, *, cap: int | None = None):
    """Least r with F^r(C) split; inf for triangles and for stalled towers.

    With ``cap`` the search stops early and returns ``cap`` once it is clear
    the depth is at least ``cap``.
    """
    cycle = tuple(cycle)
    if len(cycle) == 3:
        return INF
    cur = cycle
    r = 0
    while True:
        if cap is not None and r >= cap:
            return cap
        if is_split(e, cur, outer).split:
            return r
        t = grow_tower(e, cur, outer, check_nonsplit=False)
        if t.r == 0:
            return INF
        cur = t.F
        r += 1


# -------------------------------------------------------------- skeletons
@dataclass(frozen=True)
class SkeletonFace:
    cycle: tuple
    kind: int | None  # 1 or 2, None when neither condition holds


@dataclass
class SkeletonResult:
    K: Subgraph
    k: int
    r: int
    cycle: tuple
    faces: list  # SkeletonFace per inward-facing face
    log: list = field(default_factory=list)


def _split_cycle(cycle: tuple, a: Vertex, b: Vertex, middle: Sequence[Vertex] = ()) -> tuple:
    n = len(cycle)
    i, j = cycle.index(a), cycle.index(b)
    arc1 = [cycle[(i + t) % n] for t in range((j - i) % n + 1)]
    arc2 = [cycle[(j + t) % n] for t in range((i - j) % n + 1)]
    mid = list(middle)
    return tuple(arc1 + mid[::-1]), tuple(arc2 + mid)


def _build(e: Embedding, cycle: tuple, k: int, r: int, outer: int, log: list) -> Subgraph:
    c = Subgraph.from_cycle(cycle)
    if len(cycle) == 3 or r == 0:
        log.append(("trivial", cycle))
        return c
    m = ndepth(e, cycle, outer, cap=r)
    if m >= r:
        log.append(("deep", cycle))
        return c
    wk = wk_tower(e, cycle, m, outer)
    cs = wk.F
    dc = disc(e, cs, outer)
    ch = chords(e, cs, outer, d=dc)
    if ch:
        a, b = ch[0]
        parts = _split_cycle(cs, a, b)
        extra = Subgraph.from_edges([(a, b)])
    else:
        d3, _ = delta_sets(e, cs, outer, d=dc)
        if not d3:
            log.append(("flat", cs))
            return wk.w
        two = far_two_chords(e, cs, outer, d=dc)
        if not two:
            raise SkeletonError(f"split cycle {cs!r} has no chord or far 2-chord")
        a, u, b = two[0]
        parts = _split_cycle(cs, a, b, [u])
        extra = Subgraph.from_edges([(a, u), (u, b)])
    log.append(("split", cs, parts))
    out = wk.w | extra
    for part in parts:
        out = out | _build(e, part, k - (m + 1), r, outer, log)
    return out


def build_skeleton(e: Embedding, cycle: Sequence[Vertex], k: int, r: int, outer: int) -> SkeletonResult:
    """A (k, r)-skeleton of C, following the recursive construction."""
    cycle = tuple(cycle)
    if k < r * (len(cycle) - 3):
        raise SkeletonError(f"need k >= r(|V(C)|-3) = {r * (len(cycle) - 3)}")
    ok, bad = is_k_triangulated(e, cycle, k + r, outer, witness=True)
    if not ok:
        raise SkeletonError(f"C is not (k+r)-triangulated: face {bad!r}")
    log: list = []
    K = _build(e, cycle, k, r, outer, log)
    faces = [SkeletonFace(f, classify_face(e, f, r, len(cycle), outer)) for f in inward_faces(e, K, cycle, outer)]
    return SkeletonResult(K, k, r, cycle, faces, log)


def inward_faces(e: Embedding, K: Subgraph, cycle: Sequence[Vertex], outer: int) -> list:
    """Facial walks of K other than the one on the exterior side of C."""
    sub = e.restrict(K.edges, K.vertices)
    ext_dart = None
    cs = set(cycle)
    side = cycle_sides(e, cycle)
    ext_faces = side.faces[side.side_with_face(outer)] if side else {outer}
    for f in ext_faces:
        for dd in e.faces[f].darts:
            u, v = e.tail(dd), e.head(dd)
            if u in cs and v in cs and frozenset((u, v)) in K.edges:
                ext_dart = (u, v)
                break
        if ext_dart:
            break
    if ext_dart is None:
        raise SkeletonError("could not locate the exterior face of K")
    ext = sub.face_of(sub.dart(*ext_dart))
    return [tuple(f.walk) for f in sub.faces if f.index != ext]


def classify_face(e: Embedding, face: Sequence[Vertex], r: int, n: int, outer: int) -> int | None:
    face = tuple(face)
    if len(set(face)) != len(face):
        return None
    d = disc(e, face, outer)
    d3, _ = delta_sets(e, face, outer, d=d)
    if not d3 and not chords(e, face, outer, d=d):
        return 1
    if len(face) <= n and ndepth(e, face, outer, cap=r) >= r:
        return 2
    return None


@dataclass
class SkeletonReport:
    ok: bool
    problems: list
    faces: list  # SkeletonFace

    def __bool__(self) -> bool:
        return self.ok


def verify_skeleton(e: Embedding, cycle: Sequence[Vertex], K: Subgraph, k: int, r: int, outer: int) -> SkeletonReport:
    """Check the (k, r)-skeleton definition from scratch."""
    cycle = tuple(cycle)
    problems = []
    csub = Subgraph.from_cycle(cycle)
    if not csub <= K:
        problems.append("C is not contained in K")
    d = disc(e, cycle, outer)
    if not K <= d.subgraph():
        problems.append("K leaves Int(C)")
    g = nx.Graph()
    g.add_nodes_from(K.vertices)
    g.add_edges_from(tuple(x) for x in K.edges)
    if not nx.is_biconnected(g):
        problems.append("K is not 2-connected")
    dist = bfs_distances(e, cycle, d.adjacency(e))
    far = [v for v in K.vertices if dist.get(v, INF) > k]
    if far:
        problems.append(f"vertices outside B_k(C): {sorted(far, key=e.index.__getitem__)[:5]!r}")
    faces = []
    if not problems or "K is not 2-connected" not in problems:
        try:
            for f in inward_faces(e, K, cycle, outer):
                kind = classify_face(e, f, r, len(cycle), outer)
                faces.append(SkeletonFace(f, kind))
                if kind is None:
                    problems.append(f"inward face {f!r} satisfies neither condition")
        except (EmbeddingError, SkeletonError) as ex:
            problems.append(str(ex))
    return SkeletonReport(not problems, problems, faces)


def log2ceil(n: int) -> int:
    return math.ceil(math.log2(n))

"""Charts, tilings, modified face-width and the separating-cycle classification.

Interiors and exteriors of contractible cycles are taken relative to the
chart's root face: the exterior is the side containing the root.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .embedding import (
    INF,
    BudgetExceeded,
    Embedding,
    EmbeddingError,
    Subgraph,
    bfs_distances,
    build_embedding,
    canonical_cycle,
    cycle_sides,
    disc_side,
    distance,
    edge_width,
    face_width,
    is_short_inseparable,
    region_subgraph,
    separating_cycles,
    short_cycles,
)
from .generators import add_chord
from .listcolor import solve


class ChartError(ValueError):
    """Malformed chart or a violated precondition of a chart operation."""


# ------------------------------------------------------------------ types
@dataclass(frozen=True)
class TilingParams:
    """Desk-scale constants; the formulas for delta and alpha are kept as is."""

    g: int
    beta: float = 2.0
    gamma: float = 1.0

    @property
    def delta(self) -> float:
        return 2.1 * self.beta * 6 ** self.g

    @property
    def alpha(self) -> float:
        d = self.delta
        return 7 * d * math.log2(d) + 3 * self.gamma


@dataclass
class Chart:
    e: Embedding
    faces: tuple  # indices of the designated facial subgraphs
    root: int
    lists: dict
    ppaths: dict = field(default_factory=dict)  # face index -> vertex sequence (closed when first == last)
    alpha: int = 1
    k: int = 4

    def __post_init__(self) -> None:
        self.faces = tuple(self.faces)
        if self.root not in self.faces:
            raise ChartError("root face must be one of the designated faces")
        for f in self.faces:
            if not 0 <= f < len(self.e.faces):
                raise ChartError(f"no face with index {f}")

    def face(self, f: int):
        return self.e.faces[f]

    def ppath(self, f: int) -> Subgraph:
        seq = tuple(self.ppaths.get(f, ()))
        if not seq:
            return Subgraph(frozenset(), frozenset())
        if len(seq) > 2 and seq[0] == seq[-1]:
            return Subgraph.from_cycle(seq[:-1])
        return Subgraph.from_edges(zip(seq, seq[1:]), seq)

    def designated_vertices(self) -> frozenset:
        out: set = set()
        for f in self.faces:
            out |= self.face(f).vertices
        return frozenset(out)


# ------------------------------------------------------------- validation
@dataclass
class ChartReport:
    ok: bool
    failures: list  # (clause, message, witness)

    def clauses(self) -> set:
        return {c for c, _, _ in self.failures}


def shortest_path(e: Embedding, xs: Iterable, ys: Iterable) -> list | None:
    xs, ys = set(xs), set(ys)
    par = {x: None for x in xs}
    q = deque(xs)
    while q:
        u = q.popleft()
        if u in ys:
            path = [u]
            while par[path[-1]] is not None:
                path.append(par[path[-1]])
            return path[::-1]
        for w in e.adjacency[u]:
            if w not in par:
                par[w] = u
                q.append(w)
    return None


def validate_chart(chart: Chart, lists: Mapping | None = None) -> ChartReport:
    """Clause-by-clause check of the (alpha, k)-chart conditions."""
    e = chart.e
    lists = chart.lists if lists is None else lists
    fails = []
    fs = chart.faces
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            a, b = chart.face(fs[i]).vertices, chart.face(fs[j]).vertices
            d = distance(e, a, b)
            if d < chart.alpha:
                fails.append(("1", f"faces {fs[i]} and {fs[j]} at distance {d} < {chart.alpha}", shortest_path(e, a, b)))
    marked = chart.designated_vertices()
    for v in e.vertices:
        if v not in marked and len(lists.get(v, ())) < 5:
            fails.append(("2", f"vertex {v!r} has a list of size {len(lists.get(v, ()))}", v))
    for f in fs:
        h = chart.face(f)
        p = chart.ppath(f)
        if not p.vertices <= h.vertices or not p.edges <= h.edge_set():
            fails.append(("3", f"precolored part of face {f} is not a subgraph of it", f))
            continue
        if p.vertices and not nx.is_connected(_nx(p)):
            fails.append(("3", f"precolored part of face {f} is disconnected", f))
        if len(p.edges) > chart.k:
            fails.append(("3i", f"precolored part of face {f} has {len(p.edges)} > {chart.k} edges", f))
        if p.vertices:
            sub = e.induced_adjacency(p.vertices)
            if solve(sub, {v: lists.get(v, ()) for v in p.vertices}) is None:
                fails.append(("3i", f"precolored part of face {f} is not colorable", f))
        for v in sorted(h.vertices - p.vertices, key=e.index.__getitem__):
            if len(lists.get(v, ())) < 3:
                fails.append(("3ii", f"vertex {v!r} of face {f} has a list of size {len(lists.get(v, ()))}", v))
    return ChartReport(not fails, fails)


def _nx(sub: Subgraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(sub.vertices)
    g.add_edges_from(tuple(x) for x in sub.edges)
    return g


def face_graph(e: Embedding, face) -> nx.Graph:
    vs = face.vertices
    g = nx.Graph()
    g.add_nodes_from(vs)
    g.add_edges_from((u, w) for u in vs for w in e.adjacency[u] if w in vs)
    return g


def is_chord_triangulated(chart: Chart) -> bool:
    marked = set(chart.faces)
    return all(nx.is_chordal(face_graph(chart.e, f)) for f in chart.e.faces if f.index not in marked)


def is_tessellation(chart: Chart) -> bool:
    return is_short_inseparable(chart.e) and is_chord_triangulated(chart)


def is_tiling(chart: Chart, params: TilingParams) -> tuple:
    """(verdict, failed clause labels) for the tiling conditions at the given constants."""
    bad = []
    if not is_chord_triangulated(chart):
        bad.append("chord-triangulated")
    c2 = Chart(chart.e, chart.faces, chart.root, chart.lists, chart.ppaths, alpha=math.ceil(params.alpha), k=4)
    rep = validate_chart(c2)
    bad += [f"chart-{c}" for c in sorted(rep.clauses())]
    if fw_star(chart.e) < params.delta:
        bad.append("fw*")
    for f in chart.faces:
        h = chart.face(f)
        p = chart.ppath(f)
        path_ok = len(p.edges) <= 1
        cycle_ok = h.is_cycle and len(h) <= 4 and p == h.subgraph()
        if not (path_ok or cycle_ok):
            bad.append(f"precolor-shape-{f}")
    return (not bad, bad)


# ------------------------------------------------------------ fw star
def _stops(e: Embedding, use_discs: bool = True, use_midpoints: bool = True) -> list:
    """Stops (faces, then disc sides of short cycles) as lists of (point, doubled position)."""
    coc = e.cocycles
    g2 = 2 * e.genus
    out = []

    def walk_points(darts):
        pos = [0] * g2
        pts = []
        for d in darts:
            pts.append((("v", e.tail(d)), tuple(2 * x for x in pos)))
            if use_midpoints:
                pts.append((("m", d >> 1), tuple(2 * x + y for x, y in zip(pos, coc[d]))))
            pos = [x + y for x, y in zip(pos, coc[d])]
        if any(pos):
            raise EmbeddingError("stop boundary is not null-homologous")
        return pts

    for f in e.faces:
        out.append((("face", f.index), walk_points(f.darts)))
    if use_discs:
        for c in short_cycles(e, 4):
            if disc_side(e, c) is None:
                continue
            out.append((("disc", c), walk_points(e.cycle_darts(c))))
    return out


def _shortest_nontrivial_cover(e: Embedding, stops: list, budget: int) -> float:
    nodes: dict = {}

    def nid(x):
        if x not in nodes:
            nodes[x] = len(nodes)
        return nodes[x]

    adj: list = []
    edges = []  # (a, b, vector a->b)
    for s, pts in stops:
        si = nid(("stop", s))
        for p, pos in pts:
            pi = nid(p)
            edges.append((pi, si, tuple(-x for x in pos)))
    adj = [[] for _ in nodes]
    for k, (a, b, vec) in enumerate(edges):
        adj[a].append((b, k, vec))
        adj[b].append((a, k, tuple(-x for x in vec)))
    n = len(nodes)
    if n * len(edges) > budget:
        raise BudgetExceeded(f"fw* search needs about {n * len(edges)} steps (> {budget})")
    roots = [i for x, i in nodes.items() if x[0] != "stop"]
    best = INF
    for r in roots:
        dist = [-1] * n
        hom: list = [None] * n
        pedge = [-1] * n
        dist[r] = 0
        hom[r] = (0,) * (2 * e.genus)
        order = [r]
        q = deque([r])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w, k, vec in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    hom[w] = tuple(a + b for a, b in zip(hom[u], vec))
                    pedge[w] = k
                    order.append(w)
                    q.append(w)
        for u in order:
            for w, k, vec in adj[u]:
                if dist[w] < 0 or k == pedge[w] or k == pedge[u]:
                    continue
                length = dist[u] + dist[w] + 1
                if length >= best:
                    continue
                h = tuple(a + b - c for a, b, c in zip(hom[u], vec, hom[w]))
                if any(h):
                    best = length
    return best if best == INF else best // 2


def fw_star(e: Embedding, *, budget: int = 50_000_000) -> float:
    """Modified face-width via covering triples (inf on the sphere).

    A covering curve is a closed walk alternating between points (vertices
    and edge midpoints) and stops (faces, or disc sides of contractible
    cycles of length at most four); its weight is the number of stops.
    A minimal covering walk visits each stop once, so this equals the
    number of distinct stops. Noncontractibility is tested by homology,
    which is exact on the torus and gives an upper bound on higher genus.
    """
    if e.genus == 0:
        return INF
    return _shortest_nontrivial_cover(e, _stops(e), budget)


def radial_face_width(e: Embedding) -> float:
    """Face-width recomputed through the stop graph (faces and vertices only)."""
    if e.genus == 0:
        return INF
    return _shortest_nontrivial_cover(e, _stops(e, use_discs=False, use_midpoints=False), 10**9)


def side_embedding(e: Embedding, cycle: Sequence, side: int) -> Embedding:
    """G intersected with the closure of one side of a contractible cycle."""
    sides = cycle_sides(e, cycle)
    if sides is None:
        raise ChartError("cycle does not separate the surface")
    sub = region_subgraph(e, sides.faces[side], Subgraph.from_cycle(cycle))
    return e.restrict(sub.edges, sub.vertices)


@dataclass
class FwBounds:
    fw: float
    fw_star: float
    sandwich: bool
    sides: list  # (cycle, side, fw* of that side, ok)

    @property
    def ok(self) -> bool:
        return self.sandwich and all(s[3] for s in self.sides)


def check_fw_bounds(e: Embedding, *, sides: bool = True) -> FwBounds:
    fw = face_width(e)
    fs = fw_star(e)
    sandwich = fw >= fs and (fs == INF or fs >= fw / 5)
    rows = []
    if sides:
        for c in separating_cycles(e, 4):
            for s in (0, 1):
                sub = side_embedding(e, c, s)
                v = fw_star(sub)
                rows.append((c, s, v, v >= fs))
    return FwBounds(fw, fs, sandwich, rows)


# ------------------------------------------------- triangulation augmentation
@dataclass
class Augmentation:
    e: Embedding
    added: list  # edges in insertion order
    faces: tuple  # designated faces re-indexed in the output
    steps: list = field(default_factory=list)  # (face walk, chordless cycle, j)


def _locate(e: Embedding, walk: Sequence) -> int:
    return e.face_with_dart(walk[0], walk[1]).index


def _chordless_bad(e: Embedding, face) -> list:
    g = face_graph(e, face)
    if nx.is_chordal(g):
        return []
    cyc = [canonical_cycle(e, c) for c in nx.chordless_cycles(g) if len(c) >= 4]
    return sorted(cyc, key=lambda c: (len(c), [e.index[v] for v in c]))


def triangulate_preserving(e: Embedding, cfaces: Iterable[int], alpha: int) -> Augmentation:
    """Add edges inside non-designated faces until each is chord-triangulated.

    Each step joins v_j and v_{j+2} on a chordless cycle v_1..v_k of a bad
    face, for the least j whose pair set B_j is empty.
    """
    walks = [e.faces[f].walk for f in cfaces]
    for i in range(len(walks)):
        for j in range(i + 1, len(walks)):
            if distance(e, walks[i], walks[j]) < alpha:
                raise ChartError("designated faces closer than alpha")
    rot = {v: list(e.rotation[v]) for v in e.vertices}
    cur = e
    added, steps = [], []
    while True:
        marked = {_locate(cur, w) for w in walks}
        target = None
        for f in cur.faces:
            if f.index in marked:
                continue
            bad = _chordless_bad(cur, f)
            if bad:
                target = (f, bad[0])
                break
        if target is None:
            break
        f, cyc = target
        dists = [bfs_distances(cur, w) for w in walks]
        k = len(cyc)
        chosen = None
        for j in range(k):
            a, b = cyc[j], cyc[(j + 2) % k]
            bj = [(s, t) for s in range(len(walks)) for t in range(len(walks))
                  if s != t and dists[s][a] + dists[t][b] <= alpha - 2]
            if not bj:
                chosen = j
                break
        if chosen is None:
            raise ChartError(f"no admissible diagonal in chordless cycle {cyc} of face {f.walk}")
        a, b = cyc[chosen], cyc[(chosen + 2) % k]
        add_chord(rot, f.walk, f.walk.index(a), f.walk.index(b))
        cur = build_embedding(list(e.vertices), rot)
        added.append((a, b))
        steps.append((f.walk, cyc, chosen))
    return Augmentation(cur, added, tuple(_locate(cur, w) for w in walks), steps)


@dataclass
class AugmentationReport:
    fw_equal: bool
    distances_ok: bool
    faces_intact: bool
    chord_triangulated: bool

    @property
    def ok(self) -> bool:
        return self.fw_equal and self.distances_ok and self.faces_intact and self.chord_triangulated


def verify_augmentation(e: Embedding, cfaces: Sequence[int], alpha: int, aug: Augmentation) -> AugmentationReport:
    g = aug.e
    walks = [e.faces[f].walk for f in cfaces]
    fw_eq = face_width(e) == face_width(g)
    dist_ok = all(distance(g, walks[i], walks[j]) >= alpha
                  for i in range(len(walks)) for j in range(i + 1, len(walks)))
    intact = True
    for w, f in zip(walks, aug.faces):
        nw = g.faces[f].walk
        k = len(w)
        if len(nw) != k or not any(tuple(nw[t:] + nw[:t]) == tuple(w) for t in range(k)):
            intact = False
    marked = set(aug.faces)
    chord = all(nx.is_chordal(face_graph(g, f)) for f in g.faces if f.index not in marked)
    return AugmentationReport(fw_eq, dist_ok, intact, chord)


# --------------------------------------------------- interior / exterior
def _sides(chart: Chart, cycle: Sequence):
    sides = cycle_sides(chart.e, cycle)
    if sides is None or not any(sides.disc):
        raise ChartError(f"cycle {tuple(cycle)} is not contractible")
    i = sides.side_with_face(chart.root)
    if all(len(s) == 1 for s in sides.faces):
        raise ChartError("interior and exterior are both a single face")
    return sides, i


def ext_int(chart: Chart, cycle: Sequence) -> tuple:
    """(Ext, Int) of a contractible cycle, oriented by the root face."""
    sides, i = _sides(chart, cycle)
    c = Subgraph.from_cycle(cycle)
    return (region_subgraph(chart.e, sides.faces[i], c), region_subgraph(chart.e, sides.faces[1 - i], c))


def interior_faces(chart: Chart, cycle: Sequence) -> frozenset:
    sides, i = _sides(chart, cycle)
    return sides.faces[1 - i]


def annulus_region(chart: Chart, cycle: Sequence, family: Iterable[Sequence] = ()) -> Subgraph:
    out = ext_int(chart, cycle)[1]
    for f in family:
        out = out & ext_int(chart, f)[0]
    return out


# ------------------------------------------------ Sep(G) classification
class SepIndex:
    """Cached containment data for Sep(G) of a chart."""

    def __init__(self, chart: Chart, cycles: Sequence | None = None):
        self.chart = chart
        e = chart.e
        self.sep = [canonical_cycle(e, c) for c in (separating_cycles(e, 4) if cycles is None else cycles)]
        self._int = {c: ext_int(chart, c)[1] for c in self.sep}

    def interior(self, c) -> Subgraph:
        c = canonical_cycle(self.chart.e, c)
        if c not in self._int:
            self._int[c] = ext_int(self.chart, c)[1]
        return self._int[c]

    def inside(self, sub: Subgraph, c) -> bool:
        return sub <= self.interior(c)

    def descendants(self, f) -> list:
        f = canonical_cycle(self.chart.e, f)
        return [d for d in self.sep if d != f and self.inside(Subgraph.from_cycle(d), f)]

    def immediate_descendants(self, f) -> list:
        ds = self.descendants(f)
        return [d for d in ds if not any(o != d and self.inside(Subgraph.from_cycle(d), o) for o in ds)]

    def is_minimal(self, d) -> bool:
        return not self.descendants(d)

    def is_maximal(self, d) -> bool:
        d = canonical_cycle(self.chart.e, d)
        return not any(d in self.descendants(o) for o in self.sep if o != d)

    def designated_inside(self, sub: Subgraph) -> list:
        ch = self.chart
        return [f for f in ch.faces if ch.face(f).subgraph() <= sub]

    def color(self, d) -> str:
        inner = self.designated_inside(self.interior(d))
        desc = self.descendants(d)
        for f in inner:
            h = self.chart.face(f).subgraph()
            if not any(self.inside(h, o) for o in desc):
                return "red"
        return "blue"

    def dist(self, a: Iterable, b: Iterable) -> float:
        return distance(self.chart.e, a, b)

    def is_close(self, d, delta: float, gamma: float) -> bool:
        d = canonical_cycle(self.chart.e, d)
        if self.color(d) == "red":
            region = annulus_region(self.chart, d, self.immediate_descendants(d))
            return any(self.dist(d, self.chart.face(f).vertices) < delta for f in self.designated_inside(region))
        return any(self.color(o) == "red" and self.dist(d, o) < gamma for o in self.descendants(d))

    def sim(self, d0, d1, delta: float, gamma: float) -> bool:
        both = self.interior(d0) & self.interior(d1)
        for f in self.designated_inside(both):
            vs = self.chart.face(f).vertices
            if self.dist(vs, d0) <= delta + gamma and self.dist(vs, d1) <= delta + gamma:
                return True
        return False

    def sim_classes(self, members: Sequence, delta: float, gamma: float) -> list:
        e = self.chart.e
        members = [canonical_cycle(e, m) for m in members]
        for m in members:
            for x in [m] + self.descendants(m):
                if not self.is_close(x, delta, gamma):
                    raise ChartError(f"cycle {x} is not close to a designated face")
        classes: list = []
        for m in members:
            hit = [c for c in classes if any(self.sim(m, o, delta, gamma) for o in c)]
            merged = [m]
            for c in hit:
                merged = c + merged
                classes.remove(c)
            classes.append(merged)
        return [sorted(c, key=lambda x: [e.index[v] for v in x]) for c in classes]

    def select_sdr(self, d, delta: float, gamma: float) -> list:
        """Representatives of the classes of immediate descendants with a clean annulus."""
        e = self.chart.e
        imm = self.immediate_descendants(d)
        for x in imm:
            for y in [x] + self.descendants(x):
                if not self.is_close(y, delta, gamma):
                    raise ChartError(f"cycle {y} is not close to a designated face")
        classes = self.sim_classes(imm, delta, gamma) if imm else []
        best = None
        for choice in product(*classes):
            region = annulus_region(self.chart, d, choice)
            sub = e.restrict(region.edges, region.vertices)
            n = len(separating_cycles(sub, 4))
            if best is None or n < best[0]:
                best = (n, list(choice))
            if n == 0:
                break
        if best is None:
            best = (len(separating_cycles(e.restrict(*_pair(annulus_region(self.chart, d))), 4)), [])
        if best[0]:
            raise ChartError(f"every system of representatives leaves {best[0]} separating cycles")
        return best[1]


def _pair(sub: Subgraph) -> tuple:
    return sub.edges, sub.vertices


def descendants(chart: Chart, f) -> list:
    return SepIndex(chart).descendants(f)


def immediate_descendants(chart: Chart, f) -> list:
    return SepIndex(chart).immediate_descendants(f)


def is_minimal(chart: Chart, d) -> bool:
    return SepIndex(chart).is_minimal(d)


def is_maximal(chart: Chart, d) -> bool:
    return SepIndex(chart).is_maximal(d)


def classify_red_blue(chart: Chart, d) -> str:
    return SepIndex(chart).color(d)


def is_c_close(chart: Chart, d, delta: float, gamma: float) -> bool:
    return SepIndex(chart).is_close(d, delta, gamma)


def sim(chart: Chart, d0, d1, delta: float, gamma: float) -> bool:
    return SepIndex(chart).sim(d0, d1, delta, gamma)


def sim_classes(chart: Chart, members: Sequence, delta: float, gamma: float) -> list:
    return SepIndex(chart).sim_classes(members, delta, gamma)


def select_sdr(chart: Chart, d, delta: float, gamma: float) -> list:
    return SepIndex(chart).select_sdr(d, delta, gamma)


# -------------------------------------------------- cycle intersections
@dataclass
class Intersection:
    a_ii: tuple
    a_ie: tuple
    a_ei: tuple
    a_ee: tuple
    edge_disjoint: bool

    def lengths(self) -> tuple:
        return tuple(len(x) for x in (self.a_ii, self.a_ie, self.a_ei, self.a_ee))


class NotQualifying(ChartError):
    """The pair of cycles does not satisfy the hypotheses of the decomposition."""


def region_boundary(e: Embedding, region: frozenset) -> tuple | None:
    """Boundary of a face set as a single cycle, or None when it is not one."""
    es = set()
    for f in region:
        for d in e.faces[f].darts:
            if e.face_of(d ^ 1) not in region:
                es.add(frozenset((e.tail(d), e.head(d))))
    if not es:
        return None
    adj: dict = {}
    for ed in es:
        u, v = tuple(ed)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(ns) != 2 for ns in adj.values()):
        return None
    start = min(adj, key=e.index.__getitem__)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
    if len(cyc) != len(adj):
        return None
    return canonical_cycle(e, cyc)


def cycle_intersection_decompose(chart: Chart, c0: Sequence, c1: Sequence) -> Intersection:
    e = chart.e
    if edge_width(e) <= 4:
        raise NotQualifying("edge-width at most four")
    if len(c0) > 4 or len(c1) > 4:
        raise NotQualifying("cycles longer than four")
    e0 = Subgraph.from_cycle(c0).edges
    e1 = Subgraph.from_cycle(c1).edges
    ext0, int0 = ext_int(chart, c0)
    own = e1 - e0
    if not (own & int0.edges and own & ext0.edges):
        raise NotQualifying("second cycle does not cross the first")
    i0, i1 = interior_faces(chart, c0), interior_faces(chart, c1)
    regions = (i0 & i1, i0 - i1, i1 - i0, i0 | i1)
    bounds = [region_boundary(e, r) for r in regions]
    if any(b is None for b in bounds):
        raise NotQualifying("some region is not bounded by a single cycle")
    return Intersection(*bounds, edge_disjoint=not (e0 & e1))


def intersection_identities(x: Intersection, l0: int, l1: int) -> dict:
    """The three length identities: 1) or 2) according to edge-disjointness, and 3)."""
    ii, ie, ei, ee = x.lengths()
    out = {"sum_ii_ee": ii + ee == l0 + l1}
    out["sum_ie_ei"] = ie + ei == (l0 + l1 if x.edge_disjoint else l0 + l1 - 2)
    if l0 == l1 == 4:
        out["parity"] = len({ii % 2, ie % 2, ei % 2, ee % 2}) == 1
    return out

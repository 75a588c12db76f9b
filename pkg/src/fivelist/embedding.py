"""Rotation-system embeddings of graphs on orientable surfaces.

Darts (directed edge-ends) are integers; ``d ^ 1`` is the reverse dart and
``_nxt[d]`` is the next dart around ``tail(d)`` in rotation order. Faces are
traced by ``d -> _nxt[d ^ 1]``.

Width parameters use the homology of the surface: every dart carries an
integer vector of algebraic intersection numbers with a basis of dual loops
(tree-cotree construction), so a closed walk is null-homologous iff its
summed vector vanishes. On the torus this decides contractibility; on higher
genus a null-homologous simple cycle is additionally tested by the face-side
Euler count.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

Vertex = Hashable
Cycle = tuple  # vertex sequence v1..vk, closing edge vk v1 implied
INF = math.inf


class EmbeddingError(ValueError):
    """Invalid rotation system or invalid cycle/subgraph reference."""


class BudgetExceeded(RuntimeError):
    """An enumeration exceeded its configured budget."""


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset
    edges: frozenset  # of frozenset({u, v})

    @staticmethod
    def from_edges(edges: Iterable[Iterable[Vertex]], vertices: Iterable[Vertex] = ()) -> "Subgraph":
        es = frozenset(frozenset(e) for e in edges)
        vs = set(vertices)
        for e in es:
            vs |= e
        return Subgraph(frozenset(vs), es)

    @staticmethod
    def from_cycle(cycle: Sequence[Vertex]) -> "Subgraph":
        k = len(cycle)
        return Subgraph.from_edges(((cycle[i], cycle[(i + 1) % k]) for i in range(k)), cycle)

    def __or__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.vertices | other.vertices, self.edges | other.edges)

    def __and__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.vertices & other.vertices, self.edges & other.edges)

    def __le__(self, other: "Subgraph") -> bool:
        return self.vertices <= other.vertices and self.edges <= other.edges

    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class FacialSubgraph:
    index: int
    darts: tuple
    walk: tuple  # tail vertex of each dart, in walk order

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.walk)

    @property
    def is_cycle(self) -> bool:
        return len(self.walk) >= 3 and len(set(self.walk)) == len(self.walk)

    def __len__(self) -> int:
        return len(self.walk)

    def edge_set(self) -> frozenset:
        k = len(self.walk)
        return frozenset(frozenset((self.walk[i], self.walk[(i + 1) % k])) for i in range(k))

    def subgraph(self) -> Subgraph:
        return Subgraph(self.vertices, self.edge_set())


class Embedding:
    """Immutable rotation system. Build with :func:`build_embedding`."""

    def __init__(self, vertices: Sequence[Vertex], tails: Sequence[int], rot: Mapping[int, Sequence[int]]):
        self.vertices: tuple = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise EmbeddingError("duplicate vertex ids")
        nd = len(tails)
        self._tail = list(tails)
        self._nxt = [-1] * nd
        self._prv = [-1] * nd
        self._rot_darts: list[tuple] = []
        for i in range(len(self.vertices)):
            ds = tuple(rot.get(i, ()))
            self._rot_darts.append(ds)
            for j, d in enumerate(ds):
                if self._tail[d] != i:
                    raise EmbeddingError("dart listed at the wrong vertex")
                n = ds[(j + 1) % len(ds)]
                self._nxt[d] = n
                self._prv[n] = d
        if any(x < 0 for x in self._nxt):
            raise EmbeddingError("dangling edge-end")
        self._trace_faces()

    # ------------------------------------------------------------ basics
    def _trace_faces(self) -> None:
        nd = len(self._tail)
        self._face_of = [-1] * nd
        faces = []
        for d0 in range(nd):
            if self._face_of[d0] >= 0:
                continue
            idx = len(faces)
            ds = []
            d = d0
            while self._face_of[d] < 0:
                self._face_of[d] = idx
                ds.append(d)
                d = self._nxt[d ^ 1]
            if d != d0:
                raise EmbeddingError("face tracing did not close")
            faces.append(FacialSubgraph(idx, tuple(ds), tuple(self.vertices[self._tail[x]] for x in ds)))
        self.faces: tuple = tuple(faces)
        chi = len(self.vertices) - self.num_edges + len(faces)
        comps = self._components()
        if (2 * comps - chi) % 2:
            raise EmbeddingError("odd Euler characteristic")
        self.genus = (2 * comps - chi) // 2
        if self.genus < 0:
            raise EmbeddingError("negative genus")

    def _components(self) -> int:
        seen = [False] * len(self.vertices)
        comps = 0
        for s in range(len(self.vertices)):
            if seen[s]:
                continue
            comps += 1
            seen[s] = True
            stack = [s]
            while stack:
                u = stack.pop()
                for d in self._rot_darts[u]:
                    w = self._tail[d ^ 1]
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
        return comps

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self._tail) // 2

    @property
    def num_darts(self) -> int:
        return len(self._tail)

    def is_connected(self) -> bool:
        return self._components() <= 1

    def tail(self, d: int) -> Vertex:
        return self.vertices[self._tail[d]]

    def head(self, d: int) -> Vertex:
        return self.vertices[self._tail[d ^ 1]]

    def face_of(self, d: int) -> int:
        return self._face_of[d]

    def rot_next(self, d: int) -> int:
        return self._nxt[d]

    def rot_prev(self, d: int) -> int:
        return self._prv[d]

    def darts_at(self, v: Vertex) -> tuple:
        return self._rot_darts[self.index[v]]

    @cached_property
    def rotation(self) -> dict:
        return {v: tuple(self.head(d) for d in self._rot_darts[i]) for i, v in enumerate(self.vertices)}

    def neighbors(self, v: Vertex) -> tuple:
        return self.rotation[v]

    @cached_property
    def adjacency(self) -> dict:
        return {v: frozenset(ns) for v, ns in self.rotation.items()}

    @cached_property
    def _dart_index(self) -> dict:
        out = {}
        for d in range(len(self._tail)):
            key = (self.tail(d), self.head(d))
            if key in out:
                out[key] = None  # parallel edge: ambiguous
            else:
                out[key] = d
        return out

    def dart(self, u: Vertex, v: Vertex) -> int:
        d = self._dart_index.get((u, v))
        if d is None:
            raise EmbeddingError(f"no unique edge {u!r}-{v!r}")
        return d

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return (u, v) in self._dart_index

    def degree(self, v: Vertex) -> int:
        return len(self._rot_darts[self.index[v]])

    @cached_property
    def edges(self) -> tuple:
        return tuple(frozenset((self.tail(2 * i), self.head(2 * i))) for i in range(self.num_edges))

    def whole(self) -> Subgraph:
        return Subgraph(frozenset(self.vertices), frozenset(self.edges))

    def face_with_dart(self, u: Vertex, v: Vertex) -> FacialSubgraph:
        return self.faces[self._face_of[self.dart(u, v)]]

    def rotation_key(self) -> tuple:
        """Canonical comparison key: vertices in order, each rotation rotated to its least-index neighbor."""
        key = []
        for v in self.vertices:
            ns = list(self.rotation[v])
            if ns:
                j = min(range(len(ns)), key=lambda t: self.index[ns[t]])
                ns = ns[j:] + ns[:j]
            key.append((v, tuple(ns)))
        return tuple(key)

    def __repr__(self) -> str:
        return f"Embedding(V={self.num_vertices}, E={self.num_edges}, F={len(self.faces)}, g={self.genus})"

    # ------------------------------------------------------- derived maps
    def restrict(self, keep_edges: Iterable[Iterable[Vertex]], keep_vertices: Iterable[Vertex] = ()) -> "Embedding":
        """Sub-embedding on the given edges, rotations inherited."""
        es = {frozenset(e) for e in keep_edges}
        vs = set(keep_vertices)
        for e in es:
            vs |= e
        order = [v for v in self.vertices if v in vs]
        rot = {v: [w for w in self.rotation[v] if frozenset((v, w)) in es] for v in order}
        return build_embedding(order, rot)

    def induced(self, vs: Iterable[Vertex]) -> "Embedding":
        keep = set(vs)
        order = [v for v in self.vertices if v in keep]
        return build_embedding(order, {v: [w for w in self.rotation[v] if w in keep] for v in order})

    def induced_adjacency(self, vs: Iterable[Vertex]) -> dict:
        keep = set(vs)
        return {v: frozenset(w for w in self.adjacency[v] if w in keep) for v in self.vertices if v in keep}

    # ------------------------------------------------------------ homology
    @cached_property
    def cocycles(self) -> list:
        """Per-dart intersection vectors against 2g dual loops (tree-cotree)."""
        g2 = 2 * self.genus
        nd = len(self._tail)
        if g2 == 0:
            return [()] * nd
        tree = set()
        seen = {0}
        q = deque([0])
        while q:
            u = q.popleft()
            for d in self._rot_darts[u]:
                w = self._tail[d ^ 1]
                if w not in seen:
                    seen.add(w)
                    tree.add(d >> 1)
                    q.append(w)
        nf = len(self.faces)
        fpar: list = [None] * nf  # (parent face, dart crossed from parent into this face)
        fdepth = [0] * nf
        fseen = {0}
        cotree = set()
        q = deque([0])
        while q:
            f = q.popleft()
            for d in self.faces[f].darts:
                if (d >> 1) in tree:
                    continue
                h = self._face_of[d ^ 1]
                if h not in fseen:
                    fseen.add(h)
                    cotree.add(d >> 1)
                    fpar[h] = (f, d)  # crossing from face(d)=f to face(d^1)=h
                    fdepth[h] = fdepth[f] + 1
                    q.append(h)
        leftover = [e for e in range(self.num_edges) if e not in tree and e not in cotree]
        if len(leftover) != g2:
            raise EmbeddingError("tree-cotree decomposition inconsistent with genus")
        vec = [[0] * g2 for _ in range(nd)]

        def cross(d: int, i: int) -> None:
            # dual loop i crosses edge of d from face(d) to face(d^1)
            vec[d][i] += 1
            vec[d ^ 1][i] -= 1

        for i, e in enumerate(leftover):
            d = 2 * e
            a, b = self._face_of[d], self._face_of[d ^ 1]
            cross(d, i)
            # return from b to a inside the cotree
            up_b, up_a = [], []
            x, y = b, a
            while fdepth[x] > fdepth[y]:
                up_b.append(fpar[x][1])
                x = fpar[x][0]
            while fdepth[y] > fdepth[x]:
                up_a.append(fpar[y][1])
                y = fpar[y][0]
            while x != y:
                up_b.append(fpar[x][1])
                x = fpar[x][0]
                up_a.append(fpar[y][1])
                y = fpar[y][0]
            for pd in up_b:  # moving child -> parent: cross pd backwards
                cross(pd ^ 1, i)
            for pd in reversed(up_a):  # parent -> child
                cross(pd, i)
        return [tuple(v) for v in vec]

    def walk_homology(self, darts: Iterable[int]) -> tuple:
        g2 = 2 * self.genus
        acc = [0] * g2
        coc = self.cocycles
        for d in darts:
            for i, x in enumerate(coc[d]):
                acc[i] += x
        return tuple(acc)

    def cycle_darts(self, cycle: Sequence[Vertex]) -> list:
        k = len(cycle)
        if k < 3 or len(set(cycle)) != k:
            raise EmbeddingError(f"not a cycle: {tuple(cycle)!r}")
        try:
            return [self.dart(cycle[i], cycle[(i + 1) % k]) for i in range(k)]
        except EmbeddingError:
            raise EmbeddingError(f"not a cycle of the embedding: {tuple(cycle)!r}") from None


def build_embedding(vertex_ids: Iterable[Vertex], rotations: Mapping[Vertex, Sequence[Vertex]]) -> Embedding:
    """Validate a simple-graph rotation system and build the embedding."""
    verts = list(vertex_ids)
    index = {v: i for i, v in enumerate(verts)}
    if len(index) != len(verts):
        raise EmbeddingError("duplicate vertex ids")
    for v in rotations:
        if v not in index:
            raise EmbeddingError(f"rotation given for undeclared vertex {v!r}")
    pending: dict = {}
    tails: list = []
    rot: dict = {}
    for v in verts:
        ns = list(rotations.get(v, ()))
        if len(set(ns)) != len(ns):
            raise EmbeddingError(f"parallel edges at {v!r}")
        ds = []
        for w in ns:
            if w == v:
                raise EmbeddingError(f"loop at {v!r}")
            if w not in index:
                raise EmbeddingError(f"undeclared vertex {w!r} in rotation of {v!r}")
            key = (w, v)
            if key in pending:
                d = pending.pop(key) ^ 1
            else:
                d = len(tails)
                tails.extend((index[v], index[w]))
                pending[(v, w)] = d
            ds.append(d)
        rot[index[v]] = ds
    if pending:
        (u, w) = next(iter(pending))
        raise EmbeddingError(f"dangling edge-end {u!r}->{w!r}")
    return Embedding(verts, tails, rot)


def faces(e: Embedding) -> list:
    return list(e.faces)


# ----------------------------------------------------------------------- cycles
def canonical_cycle(e: Embedding, cycle: Sequence[Vertex]) -> tuple:
    """Rotate to the least-index vertex and pick the direction with smaller second entry."""
    k = len(cycle)
    idx = [e.index[v] for v in cycle]
    j = min(range(k), key=idx.__getitem__)
    fwd = [cycle[(j + t) % k] for t in range(k)]
    bwd = [cycle[(j - t) % k] for t in range(k)]
    return tuple(fwd if e.index[fwd[1]] <= e.index[bwd[1]] else bwd)


def _flood(e: Embedding, seeds: Iterable[int], barrier: set) -> set:
    region = set(seeds)
    stack = list(region)
    while stack:
        f = stack.pop()
        for d in e.faces[f].darts:
            if (d >> 1) in barrier:
                continue
            h = e._face_of[d ^ 1]
            if h not in region:
                region.add(h)
                stack.append(h)
    return region


def _dart_cycle_sides(e: Embedding, darts: Sequence[int]):
    """Face sets on the two sides of a simple closed dart cycle; None if one-sided."""
    barrier = {d >> 1 for d in darts}
    seed_a, seed_b = set(), set()
    k = len(darts)
    for i in range(k):
        o = darts[i]
        r = darts[i - 1] ^ 1
        d = e._nxt[r]
        while True:
            seed_a.add(e._face_of[d])
            if d == o:
                break
            d = e._nxt[d]
        d = e._nxt[o]
        while True:
            seed_b.add(e._face_of[d])
            if d == r:
                break
            d = e._nxt[d]
    a = _flood(e, seed_a, barrier)
    if a & seed_b:
        return None
    return a, _flood(e, seed_b, barrier)


def _region_chi(e: Embedding, region: set) -> int:
    vs, es = set(), set()
    for f in region:
        for d in e.faces[f].darts:
            vs.add(e._tail[d])
            es.add(d >> 1)
    return len(vs) - len(es) + len(region)


def _dart_cycle_contractible(e: Embedding, darts: Sequence[int]) -> bool:
    if e.genus == 0:
        return True
    if any(e.walk_homology(darts)):
        return False
    sides = _dart_cycle_sides(e, darts)
    if sides is None:
        return False
    return any(_region_chi(e, s) == 1 for s in sides)


@dataclass(frozen=True)
class CycleSides:
    """The two sides of a cycle: face sets and vertices strictly inside."""

    cycle: tuple
    faces: tuple  # (frozenset, frozenset)
    strict: tuple  # (frozenset, frozenset) vertices off the cycle
    disc: tuple  # (bool, bool): side caps to a disc

    def side_with_face(self, f: int) -> int:
        return 0 if f in self.faces[0] else 1


def cycle_sides(e: Embedding, cycle: Sequence[Vertex]) -> CycleSides | None:
    """Sides of a two-sided separating cycle, or None for a nonseparating cycle."""
    darts = e.cycle_darts(cycle)
    sides = _dart_cycle_sides(e, darts)
    if sides is None:
        return None
    cyc = set(cycle)
    strict = []
    discs = []
    for s in sides:
        vs = {e.vertices[e._tail[d]] for f in s for d in e.faces[f].darts}
        strict.append(frozenset(vs - cyc))
        discs.append(_region_chi(e, s) == 1)
    return CycleSides(tuple(cycle), (frozenset(sides[0]), frozenset(sides[1])), tuple(strict), tuple(discs))


def is_contractible(e: Embedding, cycle: Sequence[Vertex]) -> bool:
    return _dart_cycle_contractible(e, e.cycle_darts(cycle))


def region_subgraph(e: Embedding, region: Iterable[int], extra: Subgraph | None = None) -> Subgraph:
    """Closure of a set of faces, as a subgraph."""
    vs, es = set(), set()
    for f in region:
        face = e.faces[f]
        for d in face.darts:
            vs.add(e.tail(d))
            es.add(frozenset((e.tail(d), e.head(d))))
    sub = Subgraph(frozenset(vs), frozenset(es))
    return sub | extra if extra is not None else sub


def natural_partition(e: Embedding, cycle: Sequence[Vertex]) -> tuple:
    """The two closed sides (G0, G1) of a contractible cycle."""
    sides = cycle_sides(e, cycle)
    if sides is None or not any(sides.disc):
        raise EmbeddingError("cycle is not contractible")
    c = Subgraph.from_cycle(cycle)
    return tuple(region_subgraph(e, s, c) for s in sides.faces)


# ------------------------------------------------------------ short cycles
def short_cycles(e: Embedding, max_len: int, *, budget: int = 1_000_000) -> list:
    """All simple cycles of length 3..max_len, canonical, deterministic order."""
    out = []
    idx = e.index
    adj = e.rotation
    for s in e.vertices:
        si = idx[s]
        path = [s]
        on = {s}

        def extend(u):
            for w in adj[u]:
                wi = idx[w]
                if wi < si:
                    continue
                if w == s:
                    if len(path) >= 3 and idx[path[1]] < idx[path[-1]]:
                        out.append(tuple(path))
                        if len(out) > budget:
                            raise BudgetExceeded(f"more than {budget} cycles of length <= {max_len}")
                    continue
                if w in on or len(path) >= max_len:
                    continue
                path.append(w)
                on.add(w)
                extend(w)
                path.pop()
                on.discard(w)

        extend(s)
    out.sort(key=lambda c: (len(c), [idx[v] for v in c]))
    return out


def separating_cycles(e: Embedding, max_len: int = 4, *, budget: int = 1_000_000) -> list:
    """Contractible cycles of length <= max_len with vertices strictly on both sides."""
    out = []
    for c in short_cycles(e, max_len, budget=budget):
        sides = cycle_sides(e, c)
        if sides is None or not any(sides.disc):
            continue
        darts = e.cycle_darts(c)
        if e.genus and not _dart_cycle_contractible(e, darts):
            continue
        if sides.strict[0] and sides.strict[1]:
            out.append(c)
    return out


def disc_side(e: Embedding, cycle: Sequence[Vertex]) -> int | None:
    """Index of the disc side of a contractible cycle (0 preferred on the sphere)."""
    sides = cycle_sides(e, cycle)
    if sides is None:
        return None
    if e.genus and not _dart_cycle_contractible(e, e.cycle_darts(cycle)):
        return None
    return 0 if sides.disc[0] else (1 if sides.disc[1] else None)


# ---------------------------------------------------------------- widths
def _shortest_nontrivial(e: Embedding, want_witness: bool):
    """Shortest noncontractible cycle via fundamental cycles of BFS trees."""
    if e.genus == 0:
        return INF, None
    nv = e.num_vertices
    coc = e.cocycles
    g2 = 2 * e.genus
    best = INF
    found: list = []
    for s in range(nv):
        dist = [-1] * nv
        pdart = [-1] * nv
        hom = [None] * nv
        dist[s] = 0
        hom[s] = (0,) * g2
        order = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 > best:
                break
            for d in e._rot_darts[u]:
                w = e._tail[d ^ 1]
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    pdart[w] = d
                    hom[w] = tuple(a + b for a, b in zip(hom[u], coc[d]))
                    order.append(w)
                    q.append(w)
        for u in order:
            for d in e._rot_darts[u]:
                w = e._tail[d ^ 1]
                if dist[w] < 0 or d == pdart[w] or (d ^ 1) == pdart[u]:
                    continue
                if (dist[u], u) > (dist[w], w):
                    continue  # each non-tree edge once
                bound = dist[u] + dist[w] + 1
                if bound > best:
                    continue
                cyc = _fundamental(e, pdart, dist, u, d, w)
                if len(cyc) > best:
                    continue
                h = tuple(a + b - c for a, b, c in zip(hom[u], coc[d], hom[w]))
                nontrivial = any(h)
                if not nontrivial and e.genus >= 2:
                    nontrivial = not _dart_cycle_contractible(e, cyc)
                if not nontrivial:
                    continue
                if len(cyc) < best:
                    best = len(cyc)
                    found = []
                if want_witness:
                    found.append(cyc)
    return best, found


def _fundamental(e: Embedding, pdart, dist, u, d, w) -> list:
    up_u, up_w = [], []
    x, y = u, w
    while dist[x] > dist[y]:
        up_u.append(pdart[x])
        x = e._tail[pdart[x]]
    while dist[y] > dist[x]:
        up_w.append(pdart[y])
        y = e._tail[pdart[y]]
    while x != y:
        up_u.append(pdart[x])
        x = e._tail[pdart[x]]
        up_w.append(pdart[y])
        y = e._tail[pdart[y]]
    return list(reversed(up_u)) + [d] + [p ^ 1 for p in up_w]


def edge_width(e: Embedding, *, witness: bool = False):
    """Length of a shortest noncontractible cycle (inf on the sphere).

    With ``witness=True`` returns ``(length, cycle)`` where the cycle is the
    lexicographically least canonical vertex sequence among those found.
    """
    best, found = _shortest_nontrivial(e, witness)
    if not witness:
        return best
    if not found:
        return best, None
    cands = [canonical_cycle(e, [e.tail(d) for d in c]) for c in found]
    return best, min(cands, key=lambda c: [e.index[v] for v in c])


def radial_graph(e: Embedding) -> Embedding:
    """Vertex-face incidence multigraph, one edge per corner."""
    verts = [("v", v) for v in e.vertices] + [("f", f.index) for f in e.faces]
    nv = e.num_vertices
    tails = []
    rot: dict = {}
    corner_dart = {}
    for d in range(e.num_darts):  # the corner just before d at tail(d), inside face(d)
        rd = len(tails)
        tails.extend((e._tail[d], nv + e._face_of[d]))
        corner_dart[d] = rd
    for i in range(nv):
        rot[i] = [corner_dart[d] for d in e._rot_darts[i]]
    for f in e.faces:
        rot[nv + f.index] = [corner_dart[d] ^ 1 for d in reversed(f.darts)]
    return Embedding(verts, tails, rot)


def face_width(e: Embedding):
    if e.genus == 0:
        return INF
    r = radial_graph(e)
    ew = edge_width(r)
    return ew // 2


# -------------------------------------------------------------- distances
def bfs_distances(e: Embedding, sources: Iterable[Vertex], adjacency: Mapping | None = None) -> dict:
    adj = adjacency if adjacency is not None else e.adjacency
    dist = {}
    q = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def distance(e: Embedding, xs: Iterable[Vertex], ys: Iterable[Vertex]):
    xs, ys = set(xs), set(ys)
    if not xs or not ys:
        raise EmbeddingError("distance needs nonempty vertex sets")
    dist = bfs_distances(e, xs)
    return min((dist[y] for y in ys if y in dist), default=INF)


def ball(e: Embedding, xs: Iterable[Vertex], r) -> frozenset:
    xs = set(xs)
    if not xs:
        raise EmbeddingError("ball needs a nonempty center")
    return frozenset(v for v, d in bfs_distances(e, xs).items() if d <= r)


def sphere(e: Embedding, xs: Iterable[Vertex], j: int) -> frozenset:
    xs = set(xs)
    if not xs:
        raise EmbeddingError("sphere needs a nonempty center")
    return frozenset(v for v, d in bfs_distances(e, xs).items() if d == j)


# ------------------------------------------------------------- properties
def is_short_inseparable(e: Embedding) -> bool:
    return edge_width(e) > 4 and not separating_cycles(e, 4)


def natural_chord_partition(e: Embedding, face: FacialSubgraph | int, q: Sequence[Vertex]) -> tuple:
    """Split G along a facial cycle C and a generalized chord Q of C.

    ``q`` is a path with both ends on C (proper) or a closed sequence
    v1..vk v1 whose first vertex alone lies on C (improper).
    """
    f = e.faces[face] if isinstance(face, int) else face
    if not f.is_cycle:
        raise EmbeddingError("face boundary is not a cycle")
    cset = set(f.walk)
    q = tuple(q)
    improper = len(q) >= 2 and q[0] == q[-1]
    body = q[:-1] if improper else q
    if len(set(body)) != len(body) or len(q) < 2:
        raise EmbeddingError("generalized chord must be a path or a cycle")
    inner = body[1:] if improper else body[1:-1]
    if any(v in cset for v in inner) or q[0] not in cset or q[-1] not in cset:
        raise EmbeddingError("Q is not a generalized chord of C")
    qedges = [(q[i], q[i + 1]) for i in range(len(q) - 1)]
    for u, v in qedges:
        if not e.has_edge(u, v):
            raise EmbeddingError(f"Q uses a non-edge {u!r}-{v!r}")
    cedges = {frozenset(x) for x in f.edge_set()}
    if not improper and len(q) == 2 and frozenset(q) in cedges:
        raise EmbeddingError("Q is an edge of C")
    # every cycle of C u Q must be contractible
    if improper:
        cycles = [list(body)]
    else:
        i, j = f.walk.index(q[0]), f.walk.index(q[-1])
        k = len(f.walk)
        arc1 = [f.walk[(i + t) % k] for t in range((j - i) % k + 1)]
        arc2 = [f.walk[(j + t) % k] for t in range((i - j) % k + 1)]
        mid = list(q[1:-1])
        cycles = [list(f.walk), arc1 + mid[::-1], arc2 + mid]
    for c in cycles:
        if len(c) >= 3 and not is_contractible(e, c):
            raise EmbeddingError("a cycle of C u Q is noncontractible")
    barrier = {e.dart(u, v) >> 1 for u, v in qedges} | {e.dart(a, b) >> 1 for a, b in (tuple(x) for x in cedges)}
    rest = [g.index for g in e.faces if g.index != f.index]
    regions = []
    left = set(rest)
    while left:
        s = min(left)
        reg = _flood(e, [s], barrier) - {f.index}
        regions.append(reg)
        left -= reg
    if len(regions) != 2:
        raise EmbeddingError(f"expected two regions, found {len(regions)}")
    qsub = Subgraph.from_edges(qedges, q)
    return tuple(region_subgraph(e, r, qsub) for r in regions)


def k_chords(e: Embedding, h: Subgraph, k: int) -> list:
    """All k-chords of H: proper paths (tuples) and improper cycles (closed tuples v1..vk v1)."""
    if k < 1:
        raise EmbeddingError("k must be positive")
    hv = h.vertices
    out = []
    idx = e.index
    for s in sorted(hv, key=idx.__getitem__):
        path = [s]
        on = {s}

        def extend(u):
            depth = len(path) - 1
            for w in e.rotation[u]:
                if depth + 1 == k:
                    if w in hv:
                        if w == s and k >= 3:
                            out.append(tuple(path) + (s,))
                        elif w != s and idx[w] > idx[s]:
                            if k == 1 and frozenset((s, w)) in h.edges:
                                continue
                            out.append(tuple(path) + (w,))
                    continue
                if w in hv or w in on:
                    continue
                path.append(w)
                on.add(w)
                extend(w)
                path.pop()
                on.discard(w)

        extend(s)
    # improper cycles were found twice (both directions)
    seen = set()
    uniq = []
    for c in out:
        key = (c[0], frozenset(frozenset((c[i], c[i + 1])) for i in range(len(c) - 1))) if c[0] == c[-1] else c
        if key in seen:
            continue
        seen.add(key)
        uniq.append(c)
    return uniq

"""Constructive five-list-coloring of planar graphs with a precolored outer edge.

Interior faces are first triangulated with dummy vertices that carry five
fresh colors nobody else uses, so they never constrain real vertices. The
recursion is the classical one: split along a chord of the outer cycle, or
delete the outer neighbour ``v_k`` of ``x`` after reserving two of its colors.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Mapping, Sequence

import networkx as nx

from .embedding import Embedding, EmbeddingError, build_embedding
from .listcolor import ColoringError, check_coloring, improper_edge

Vertex = Hashable


class HypothesisError(ValueError):
    """Input violates the theorem's hypotheses; message names the culprit."""


class _Dummy:
    __slots__ = ("n",)

    def __init__(self, n: int):
        self.n = n

    def __repr__(self) -> str:
        return f"<dummy {self.n}>"


def _outer_face(e: Embedding, outer):
    if isinstance(outer, int):
        return e.faces[outer]
    if hasattr(outer, "walk"):
        return outer
    cyc = tuple(outer)
    for f in e.faces:
        if len(f.walk) == len(cyc) and set(f.walk) == set(cyc) and f.is_cycle:
            k = len(cyc)
            if all(e.has_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k)):
                return f
    raise HypothesisError(f"{cyc!r} does not bound a face")


def _triangulate(e: Embedding, outer_index: int, fresh: frozenset):
    """Rotation dict with every non-outer face triangulated by dummies, plus dummy lists."""
    rot = {v: list(e.rotation[v]) for v in e.vertices}
    dummies = {}
    counter = 0

    def new():
        nonlocal counter
        counter += 1
        d = _Dummy(counter)
        dummies[d] = fresh
        return d

    def insert_before(at, before, items):
        ns = rot[at]
        j = ns.index(before)
        rot[at] = ns[:j] + list(items) + ns[j:]

    for f in e.faces:
        if f.index == outer_index or (len(f.walk) == 3 and f.is_cycle):
            continue
        w = f.walk
        L = len(w)
        if f.is_cycle:
            h = new()
            for i in range(L):
                insert_before(w[i], w[(i + 1) % L], [h])
            rot[h] = [w[i] for i in reversed(range(L))]
            continue
        ring = [new() for _ in range(L)]
        hub = new()
        for i in range(L):
            # corner at w[i] between w[i-1] and w[i+1] receives r_{i-1}, r_i
            insert_before(w[i], w[(i + 1) % L], [ring[i - 1], ring[i]])
            rot[ring[i]] = [ring[(i + 1) % L], w[(i + 1) % L], w[i], ring[i - 1], hub]
        rot[hub] = [ring[i] for i in reversed(range(L))]
    return rot, dummies


def _orient(walk: Sequence[Vertex], x: Vertex, y: Vertex) -> list:
    w = list(walk)
    k = len(w)
    for i in range(k):
        if w[i] == x and w[(i + 1) % k] == y or w[i] == y and w[(i + 1) % k] == x:
            return w[i:] + w[:i]
    raise HypothesisError(f"{x!r}{y!r} is not an edge of the outer cycle")


def _core(rot: Mapping, S: set, C: list, L: dict, col: dict, depth: int = 0) -> None:
    """Color S given C[0], C[1] colored; C oriented as the outer face walk."""
    k = len(C)
    if depth > 10 * len(rot) + 10:
        raise RuntimeError("recursion guard tripped")
    if k == 3 and len(S) == 3:
        v = C[2]
        opts = sorted(L[v] - {col[C[0]], col[C[1]]})
        if not opts:
            raise RuntimeError("triangle base case has no color")
        col[v] = opts[0]
        return
    pos = {v: i for i, v in enumerate(C)}
    chord = None
    for i, v in enumerate(C):
        for w in rot[v]:
            if w in S and w in pos:
                j = pos[w]
                if i < j and (j - i) % k not in (1, k - 1):
                    if chord is None or (i, j) < chord:
                        chord = (i, j)
    if chord is not None:
        i, j = chord
        vi, vj = C[i], C[j]
        if i >= 1:
            c1 = C[: i + 1] + C[j:]
            c2 = [vj, vi] + C[i + 1 : j]
        else:
            c1 = C[: j + 1]
            c2 = [C[0], C[j]] + C[j + 1 :]
        s1 = _side(rot, S, {vi, vj}, set(c1))
        s2 = (S - s1) | {vi, vj}
        _core(rot, s1, c1, L, col, depth + 1)
        _core(rot, s2, c2, L, col, depth + 1)
        return
    v1, vk, vk1 = C[0], C[-1], C[-2]
    ns = [w for w in rot[vk] if w in S]
    j = ns.index(v1)
    inner = []
    t = (j + 1) % len(ns)
    while ns[t] != vk1:
        inner.append(ns[t])
        t = (t + 1) % len(ns)
    opts = sorted(L[vk] - {col[v1]})
    if len(opts) < 2:
        raise RuntimeError(f"outer vertex {vk!r} has fewer than two spare colors")
    a, b = opts[0], opts[1]
    saved = {u: L[u] for u in inner}
    for u in inner:
        L[u] = L[u] - {a, b}
    newC = C[:-1] + inner[::-1]
    _core(rot, S - {vk}, newC, L, col, depth + 1)
    for u, lst in saved.items():
        L[u] = lst
    col[vk] = a if col[vk1] != a else b


def _side(rot, S, cut, targets) -> set:
    start = [v for v in targets if v not in cut]
    seen = set(start)
    q = deque(start)
    while q:
        u = q.popleft()
        for w in rot[u]:
            if w in S and w not in cut and w not in seen:
                seen.add(w)
                q.append(w)
    return seen | cut


def _check_planar(e: Embedding) -> None:
    if e.genus != 0:
        raise HypothesisError("embedding is not planar")
    if not e.is_connected():
        raise HypothesisError("graph is disconnected")


def _fresh_colors(lists: Mapping) -> frozenset:
    top = max((c for cs in lists.values() for c in cs), default=0)
    return frozenset(range(top + 1, top + 6))


def thomassen_extend(e: Embedding, outer, lists: Mapping, xy: tuple | None = None, precolor: Mapping | None = None) -> dict:
    """Total L-coloring of a plane graph whose outer face is a cycle.

    ``xy`` names the precolorable outer edge (default: the first edge of the
    outer walk whose ends can be colored). ``precolor`` may force colors on
    x and y; otherwise the least proper pair from L(x) x L(y) is used.
    """
    _check_planar(e)
    face = _outer_face(e, outer)
    if not face.is_cycle:
        raise HypothesisError("outer face is not a cycle")
    cyc = list(face.walk)
    cset = set(cyc)
    lists = {v: frozenset(lists.get(v, ())) for v in e.vertices}
    precolor = dict(precolor or {})
    if xy is None:
        for i in range(len(cyc)):
            a, b = cyc[i], cyc[(i + 1) % len(cyc)]
            if _pair(lists, a, b, precolor) is not None and all(len(lists[v]) >= 3 for v in cset - {a, b}):
                xy = (a, b)
                break
        if xy is None:
            raise HypothesisError("no outer edge satisfies the hypotheses")
    x, y = xy
    if x not in cset or y not in cset or not e.has_edge(x, y):
        raise HypothesisError(f"{x!r}{y!r} is not an edge of the outer cycle")
    for v in cset - {x, y}:
        if len(lists[v]) < 3:
            raise HypothesisError(f"outer vertex {v!r} has a list of size {len(lists[v])} < 3")
    for v in e.vertices:
        if v not in cset and len(lists[v]) < 5:
            raise HypothesisError(f"interior vertex {v!r} has a list of size {len(lists[v])} < 5")
    pair = _pair(lists, x, y, precolor)
    if pair is None:
        raise HypothesisError(f"edge {x!r}{y!r} is not L-colorable")
    walk = _orient(cyc, x, y)
    rot, dummies = _triangulate(e, face.index, _fresh_colors(lists))
    L = dict(lists)
    L.update(dummies)
    col = {x: pair[0], y: pair[1]}
    _core(rot, set(rot), walk, L, col)
    out = {v: col[v] for v in e.vertices}
    problems = check_coloring(e, lists, out, total=True)
    if problems:
        raise RuntimeError(f"internal error: {problems}")
    return out


def _pair(lists, x, y, precolor):
    xs = [precolor[x]] if x in precolor else sorted(lists[x])
    ys = [precolor[y]] if y in precolor else sorted(lists[y])
    for a in xs:
        if a not in lists[x]:
            continue
        for b in ys:
            if b != a and b in lists[y]:
                return a, b
    return None


def extend_short_cycle(e: Embedding, outer, phi: Mapping, lists: Mapping) -> dict:
    """Extend an L-coloring of an outer cycle of length <= 4 to the whole graph.

    The outer vertices other than the first edge x y are deleted; their
    interior neighbours lose at most two colors and land on the new outer
    walk. The remainder is colored block by block, each block receiving the
    classical recursion from its cut vertex.
    """
    _check_planar(e)
    face = _outer_face(e, outer)
    if not face.is_cycle:
        raise HypothesisError("outer face is not a cycle")
    cyc = list(face.walk)
    if len(cyc) > 4:
        raise HypothesisError(f"outer cycle has length {len(cyc)} > 4")
    lists = {v: frozenset(lists.get(v, ())) for v in e.vertices}
    phi = dict(phi)
    if set(phi) != set(cyc):
        raise HypothesisError("phi must color exactly the outer cycle")
    if improper_edge(e.adjacency, phi) or any(phi[v] not in lists[v] for v in phi):
        raise ColoringError("phi is not a proper L-coloring of the outer cycle")
    for v in e.vertices:
        if v not in phi and len(lists[v]) < 5:
            raise HypothesisError(f"interior vertex {v!r} has a list of size {len(lists[v])} < 5")
    x, y = cyc[0], cyc[1]
    rot, dummies = _triangulate(e, face.index, _fresh_colors(lists))
    gone = set(cyc[2:])
    L = {}
    for v in rot:
        base = dummies[v] if v in dummies else lists[v]
        if v in gone:
            continue
        L[v] = base - {phi[w] for w in rot[v] if w in gone}
    L[x], L[y] = frozenset({phi[x]}), frozenset({phi[y]})
    col = {x: phi[x], y: phi[y]}
    col.update({v: phi[v] for v in gone})
    sub = {v: [w for w in rot[v] if w not in gone] for v in rot if v not in gone}
    _color_blocks(sub, L, col, x, y)
    out = {v: col[v] for v in e.vertices}
    problems = check_coloring(e, lists, out, total=True)
    if problems:
        raise RuntimeError(f"internal error: {problems}")
    return out


def _color_blocks(rot: dict, L: dict, col: dict, x, y) -> None:
    order = list(rot)
    ids = {v: i for i, v in enumerate(order)}
    emb = build_embedding(range(len(order)), {ids[v]: [ids[w] for w in rot[v]] for v in order})
    outer_dart = emb.dart(ids[x], ids[y])
    outer = emb.faces[emb.face_of(outer_dart)]
    outer_darts = set(outer.darts)
    g = nx.Graph()
    g.add_nodes_from(range(len(order)))
    g.add_edges_from(tuple(e) for e in emb.edges)
    blocks = [frozenset(b) for b in nx.biconnected_components(g)]
    xi, yi = ids[x], ids[y]
    done = {xi, yi}
    root = next(b for b in blocks if xi in b and yi in b)
    queue = deque([(root, (xi, yi))])
    used = {root}
    while queue:
        block, anchor = queue.popleft()
        _color_block(emb, order, block, anchor, outer_darts, rot, L, col)
        done |= block
        for b in blocks:
            if b in used:
                continue
            cut = b & block
            if cut:
                used.add(b)
                queue.append((b, (next(iter(cut)),)))
    leftover = [b for b in blocks if b not in used]
    if leftover:
        raise RuntimeError("block tree traversal incomplete")


def _color_block(emb, order, block, anchor, outer_darts, rot, L, col) -> None:
    if len(block) == 2:
        a = anchor[0]
        (n,) = block - {a}
        vn = order[n]
        if vn in col:
            return
        opts = sorted(L[vn] - {col[order[a]]})
        if not opts:
            raise RuntimeError("bridge endpoint has no color")
        col[vn] = opts[0]
        return
    bedges = [e for e in emb.edges if e <= block]
    sub = emb.restrict(bedges)
    dart = next(d for d in outer_darts if emb.tail(d) in block and emb.head(d) in block and frozenset((emb.tail(d), emb.head(d))) in set(bedges))
    face = sub.faces[sub.face_of(sub.dart(emb.tail(dart), emb.head(dart)))]
    if not face.is_cycle:
        raise RuntimeError("block outer face is not a cycle")
    walk = list(face.walk)
    if len(anchor) == 2:
        w = _orient(walk, anchor[0], anchor[1])
    else:
        a = anchor[0]
        i = walk.index(a)
        w = walk[i:] + walk[:i]
        vn = order[w[1]]
        opts = sorted(L[vn] - {col[order[a]]})
        if not opts:
            raise RuntimeError("block entry vertex has no color")
        col[vn] = opts[0]
    srot = {order[v]: [order[u] for u in sub.rotation[v]] for v in sub.vertices}
    _core(srot, set(srot), [order[v] for v in w], dict(L), col)

"""Deterministic fixture generators (rotation systems built from scratch)."""

from __future__ import annotations

import random
from typing import Hashable, Sequence

from .embedding import Embedding, build_embedding, is_short_inseparable

Vertex = Hashable


def _insert_before(rot: dict, at, before, items) -> None:
    ns = rot[at]
    j = ns.index(before)
    rot[at] = ns[:j] + list(items) + ns[j:]


def stellate(rot: dict, walk: Sequence[Vertex], v: Vertex) -> None:
    """Put new vertex v inside the face with (simple) walk ``walk``, joined to all of it."""
    k = len(walk)
    for i in range(k):
        _insert_before(rot, walk[i], walk[(i + 1) % k], [v])
    rot[v] = [walk[i] for i in reversed(range(k))]


def add_chord(rot: dict, walk: Sequence[Vertex], i: int, j: int) -> None:
    """Join walk[i] and walk[j] through the face with this walk."""
    k = len(walk)
    a, b = walk[i], walk[j]
    _insert_before(rot, a, walk[(i + 1) % k], [b])
    _insert_before(rot, b, walk[(j + 1) % k], [a])


def emb(rot: dict, order: Sequence[Vertex] | None = None) -> Embedding:
    return build_embedding(list(order) if order is not None else list(rot), rot)


# ------------------------------------------------------------------ classics
def k4() -> Embedding:
    return build_embedding(range(4), {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]})


def cycle_graph(n: int) -> Embedding:
    return build_embedding(range(n), {i: [(i + 1) % n, (i - 1) % n] for i in range(n)})


def wheel(n: int) -> Embedding:
    """Rim 0..n-1, hub n; face 0 is the outer rim face."""
    rot = {i: [(i + 1) % n, n, (i - 1) % n] for i in range(n)}
    rot[n] = list(range(n))
    return build_embedding(range(n + 1), rot)


def octahedron() -> Embedding:
    # outer triangle 0,1,2; inner triangle 3,4,5 (3 opposite 0 side)
    rot = {
        0: [1, 5, 4, 2],
        1: [2, 3, 5, 0],
        2: [0, 4, 3, 1],
        3: [1, 2, 4, 5],
        4: [3, 2, 0, 5],
        5: [3, 4, 0, 1],
    }
    return build_embedding(range(6), rot)


def icosahedron() -> Embedding:
    # top 0, upper ring 1..5, lower ring 6..10, bottom 11
    rot = {0: [1, 2, 3, 4, 5]}
    for i in range(5):
        u = 1 + i
        un, up = 1 + (i + 1) % 5, 1 + (i - 1) % 5
        lo, lp = 6 + i, 6 + (i - 1) % 5
        rot[u] = [0, up, lp, lo, un]
        lo_n = 6 + (i + 1) % 5
        rot[lo] = [u, lp, 11, lo_n, un]
    rot[11] = [10, 9, 8, 7, 6]
    return build_embedding(range(12), rot)


def torus_grid(m: int, n: int) -> Embedding:
    """C_m x C_n on the torus; vertex (i, j) is i*n+j, rotation N, E, S, W."""
    if m < 3 or n < 3:
        raise ValueError("torus grid needs m, n >= 3")

    def vid(i, j):
        return (i % m) * n + (j % n)

    rot = {vid(i, j): [vid(i - 1, j), vid(i, j + 1), vid(i + 1, j), vid(i, j - 1)] for i in range(m) for j in range(n)}
    return build_embedding(range(m * n), rot)


def planar_grid(m: int, n: int) -> Embedding:
    """m x n grid of vertices in the plane (quadrilateral faces)."""
    def vid(i, j):
        return i * n + j

    rot = {}
    for i in range(m):
        for j in range(n):
            ns = []
            for di, dj in ((-1, 0), (0, 1), (1, 0), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < m and 0 <= b < n:
                    ns.append(vid(a, b))
            rot[vid(i, j)] = ns
    return build_embedding(range(m * n), rot)


def nested_cycles(lengths: Sequence[int], hub: bool = True) -> Embedding:
    """Concentric cycles of equal length joined by rungs; quads between layers."""
    n = lengths[0]
    if any(x != n for x in lengths):
        raise ValueError("nested_cycles needs equal lengths")
    layers = len(lengths)

    def vid(l, i):
        return l * n + (i % n)

    rot = {}
    for l in range(layers):
        for i in range(n):
            ns = [vid(l, i + 1)]
            if l + 1 < layers:
                ns.append(vid(l + 1, i))
            ns.append(vid(l, i - 1))
            if l > 0:
                ns.append(vid(l - 1, i))
            rot[vid(l, i)] = ns
    e = build_embedding(range(layers * n), rot)
    if hub:
        rot = {v: list(e.rotation[v]) for v in e.vertices}
        inner = [vid(layers - 1, i) for i in range(n)]
        f = next(f for f in e.faces if set(f.walk) == set(inner))
        stellate(rot, f.walk, layers * n)
        e = build_embedding(range(layers * n + 1), rot)
    return e


# ------------------------------------------------------------ triangulations
def _rot(e: Embedding) -> dict:
    return {v: list(e.rotation[v]) for v in e.vertices}


def flip(rot: dict, a, b) -> bool:
    """Flip edge ab in a triangulation if legal; returns whether flipped."""
    e = emb(rot)
    fa = e.face_with_dart(a, b).walk
    fb = e.face_with_dart(b, a).walk
    if len(fa) != 3 or len(fb) != 3:
        return False
    c = next(v for v in fa if v not in (a, b))
    d = next(v for v in fb if v not in (a, b))
    if c == d or d in rot[c] or len(rot[a]) <= 3 or len(rot[b]) <= 3:
        return False
    rot[a].remove(b)
    rot[b].remove(a)
    # merged face walk: a -> d -> b -> c
    _insert_before(rot, d, b, [c])
    _insert_before(rot, c, a, [d])
    return True


def planar_triangulation(n: int, seed: int, flips: int | None = None) -> Embedding:
    """Vertex stacking from K4, then random legal edge flips."""
    if n < 4:
        raise ValueError("need n >= 4")
    rng = random.Random(seed)
    rot = _rot(k4())
    for v in range(4, n):
        e = emb(rot)
        f = rng.choice(e.faces)
        stellate(rot, f.walk, v)
    for _ in range(n if flips is None else flips):
        e = emb(rot)
        edge = tuple(rng.choice(e.edges))
        flip(rot, *edge)
    return emb(rot, range(n))


def near_triangulation(n: int, seed: int) -> tuple:
    """(embedding, outer face index): a triangulation on n+1 vertices minus one vertex."""
    rng = random.Random(seed)
    t = planar_triangulation(n + 1, seed)
    v = rng.randrange(n + 1)
    link = set(t.rotation[v])
    rot = {u: [w for w in t.rotation[u] if w != v] for u in t.vertices if u != v}
    order = [u for u in t.vertices if u != v]
    relabel = {u: i for i, u in enumerate(order)}
    e = build_embedding(range(n), {relabel[u]: [relabel[w] for w in rot[u]] for u in order})
    outer = {relabel[u] for u in link}
    f = next(f for f in e.faces if set(f.walk) == outer)
    return e, f.index


def rotation_from_faces(faces: Sequence[Sequence[Vertex]]) -> dict:
    """Rotation system whose face walks are the given consistently oriented walks.

    A face walk ... u, v, w ... forces the rotation at v to send u to w.
    """
    succ: dict = {}
    for walk in faces:
        k = len(walk)
        for i in range(k):
            u, v, w = walk[i - 1], walk[i], walk[(i + 1) % k]
            m = succ.setdefault(v, {})
            if u in m:
                raise ValueError(f"corner at {v!r} after {u!r} used twice")
            m[u] = w
    rot = {}
    for v, m in succ.items():
        start = next(iter(m))
        order = [start]
        x = m[start]
        while x != start:
            order.append(x)
            if len(order) > len(m):
                raise ValueError(f"rotation at {v!r} does not close")
            x = m[x]
        if len(order) != len(m):
            raise ValueError(f"vertex {v!r} is not a disc point")
        rot[v] = order
    return rot


def band_steps(rng: random.Random, n: int, m: int, max_run_o: int = 2, max_run_i: int = 2, tries: int = 500):
    """Random cyclic zipper word with n 'o' and m 'i' and bounded cyclic runs."""
    for _ in range(tries):
        steps = ["o"] * n + ["i"] * m
        rng.shuffle(steps)
        if _cyclic_runs_ok(steps, max_run_o, max_run_i):
            return steps
    return None


def _cyclic_runs_ok(steps, max_o, max_i) -> bool:
    k = len(steps)
    if all(s == steps[0] for s in steps):
        return False
    j = next(t for t in range(k) if steps[t] != steps[t - 1])
    run, cur = 0, None
    for t in range(k):
        s = steps[(j + t) % k]
        run = run + 1 if s == cur else 1
        cur = s
        if (s == "o" and run > max_o) or (s == "i" and run > max_i):
            return False
    return True


def band_faces(outer: Sequence[Vertex], inner: Sequence[Vertex], steps: Sequence[str], shift: int = 0) -> list:
    """Triangles between two rings; outer ring darts run backwards, inner forwards.

    Inner vertex b gets 1 + (number of 'o' steps taken while b is current)
    outer neighbours, and symmetrically for outer vertices.
    """
    n, m = len(outer), len(inner)
    i = j = 0
    tris = []
    for st in steps:
        a, b = outer[i % n], inner[(shift + j) % m]
        if st == "o":
            tris.append((outer[(i + 1) % n], a, b))
            i += 1
        else:
            tris.append((a, b, inner[(shift + j + 1) % m]))
            j += 1
    return tris


def layered_disc(ring_sizes: Sequence[int], seed: int, *, cap: str = "hub", max_run_o: int = 2,
                 max_run_i: int = 2, last_max_run_i: int | None = 1, short_inseparable: bool = True,
                 max_tries: int = 2000, bands: Sequence | None = None):
    """Concentric rings joined by random triangulated bands.

    Vertices are numbered ring by ring from the outside. ``cap`` is 'hub'
    (one vertex joined to the innermost ring) or 'open' (innermost ring left
    as a face). With ``short_inseparable`` the draw is repeated until the
    result has no separating triangle or 4-cycle. ``bands`` optionally
    gives, per band, a callable drawing its zipper word from the rng (None
    entries fall back to a random word). Returns
    (embedding, rings, outer_face_index).
    """
    rng = random.Random(seed)
    rings = []
    nxt = 0
    for s in ring_sizes:
        rings.append(list(range(nxt, nxt + s)))
        nxt += s
    for _ in range(max_tries):
        faces = [list(rings[0])]
        ok = True
        for li in range(len(rings) - 1):
            last = li == len(rings) - 2
            mi = last_max_run_i if (last and last_max_run_i is not None and cap == "hub") else max_run_i
            if bands is not None and li < len(bands) and bands[li] is not None:
                steps = bands[li](rng)
            else:
                steps = band_steps(rng, len(rings[li]), len(rings[li + 1]), max_run_o, mi)
            if steps is None:
                ok = False
                break
            faces += band_faces(rings[li], rings[li + 1], steps, rng.randrange(len(rings[li + 1])))
        if not ok:
            continue
        inner = rings[-1]
        if cap == "hub":
            h = nxt
            faces += [(inner[(j + 1) % len(inner)], inner[j], h) for j in range(len(inner))]
        else:
            faces.append(list(reversed(inner)))
        try:
            rot = rotation_from_faces(faces)
            order = sorted(rot)
            e = build_embedding(order, rot)
        except Exception:
            continue
        if e.genus != 0:
            continue
        inner_vs = set(e.vertices) - set(rings[0])
        if short_inseparable and (any(e.degree(v) < 5 for v in inner_vs) or not is_short_inseparable(e)):
            continue
        outer = e.face_with_dart(rings[0][0], rings[0][1]).index
        return e, rings, outer
    raise RuntimeError("layered_disc: no valid fixture found")


def ring_word(rng: random.Random, n: int, t: int, zeros: int = 0) -> list:
    """Zipper word for an n-ring over an inner ring in which exactly t inner
    vertices see three consecutive outer vertices (the rest see one or two)."""
    ones = n - 2 * t
    if ones < 0:
        raise ValueError("need n >= 2t")
    ks = [2] * t + [1] * ones + [0] * zeros
    rng.shuffle(ks)
    word = []
    for k in ks:
        word += ["o"] * k + ["i"]
    r = rng.randrange(len(word))
    return word[r:] + word[:r]


def ring_fixture(n: int, t: int, seed: int, *, inner: Sequence[int] | None = None, zeros: int | None = None,
                 max_tries: int = 400):
    """Disc with outer n-cycle whose first band carries t candidate Delta^{2p} vertices.

    Returns (embedding, rings, outer_face_index) like :func:`layered_disc`.
    The caller filters on nonsplit depth; this only shapes the first band.
    """
    rng = random.Random(seed)
    z = zeros if zeros is not None else rng.randrange(0, 2)
    m = t + (n - 2 * t) + z
    sizes = [n, m] + list(inner if inner is not None else _shrink(m))
    return layered_disc(sizes, rng.randrange(1 << 30), max_tries=max_tries,
                        bands=[lambda r: ring_word(r, n, t, z)])


def _periodic_word(n: int):
    def draw(rng: random.Random) -> list:
        w = list("ooii" * (n // 2))
        k = rng.randrange(len(w))
        return w[k:] + w[:k]
    return draw


def deep_ring(n: int, layers: int, seed: int, *, max_tries: int = 3000):
    """Disc whose outer n-cycle (n even, n >= 6) has nonsplit depth ``layers``.

    The first ``layers`` rings all have length n and are joined by periodic
    bands in which every other inner vertex sees three consecutive outer
    vertices; a short random tail and a hub close the disc.
    """
    if n % 2 or n < 6:
        raise ValueError("deep_ring needs even n >= 6")
    sizes = [n] * layers + _shrink(n)
    return layered_disc(sizes, seed, bands=[_periodic_word(n)] * (layers - 1), max_tries=max_tries)


def _mixed_word(n: int, extra: int):
    def draw(rng: random.Random) -> list:
        units = ["ooii"] * (n // 2)
        for i in rng.sample(range(n // 2), extra):
            units[i] = "ooiii"
        w = list("".join(units))
        k = rng.randrange(len(w))
        return w[k:] + w[:k]
    return draw


def shared_ring(n: int, extra: int, seed: int, *, max_tries: int = 400):
    """Disc whose ring C* = F^1(C) keeps ``extra`` vertices of the outer n-cycle.

    Each kept vertex has four inner neighbours, so it is not the midpoint of
    any Delta^{2p} vertex and survives the tower step.
    """
    if n % 2 or n < 6 or not 1 <= extra <= n // 2:
        raise ValueError("shared_ring needs even n >= 6 and 1 <= extra <= n/2")
    m = n + extra
    rng = random.Random(seed)
    tail = [m, m - 1, 6] if rng.random() < 0.5 else [m, m - 2, 5]
    return layered_disc([n] + tail, rng.randrange(1 << 30), bands=[_mixed_word(n, extra)], max_tries=max_tries)


def two_hole(seed: int, plen: int, *, quad: bool = False, sizes: Sequence[int] | None = None,
             max_tries: int = 200):
    """Near-triangulated disc with outer face F (a 4-cycle) and a second face F'.

    F' is a triangle (or, with ``quad``, a 4-face made by deleting one edge)
    at distance exactly ``plen`` from F; P is a shortest F-F' path. Returns
    (embedding, F, F', P).
    """
    from .embedding import bfs_distances

    rng = random.Random(seed)
    for _ in range(max_tries):
        sz = list(sizes) if sizes is not None else [4, rng.choice([6, 7]), rng.choice([6, 7]), rng.choice([5, 6])]
        e, rings, outer = layered_disc(sz, rng.randrange(1 << 30), max_tries=400)
        F = tuple(e.faces[outer].walk)
        dist = bfs_distances(e, F)
        cands = []
        for f in e.faces:
            if f.index == outer or len(f.walk) != 3:
                continue
            if min(dist[v] for v in f.walk) != plen:
                continue
            if plen == 0 and sum(v in F for v in f.walk) != 1:
                continue
            cands.append(f)
        if not cands:
            continue
        f = rng.choice(cands)
        tri = tuple(f.walk)
        rot = {v: list(e.rotation[v]) for v in e.vertices}
        face2 = tri
        if quad:
            opts = []
            for i in range(3):
                x, y = tri[i], tri[(i + 1) % 3]
                g = e.face_with_dart(y, x)
                w = next(v for v in g.walk if v not in (x, y))
                if w in F or dist[w] < plen or len(g.walk) != 3:
                    continue
                if plen == 0 and (x in F or y in F):
                    continue
                opts.append((x, y))
            if not opts:
                continue
            x, y = rng.choice(opts)
            rot[x].remove(y)
            rot[y].remove(x)
            e = build_embedding(list(e.vertices), rot)
            face2 = None
            for g in e.faces:
                if len(g.walk) == 4 and set(tri) <= set(g.walk):
                    face2 = tuple(g.walk)
            if face2 is None:
                continue
        dist = bfs_distances(e, F)
        ends = [v for v in face2 if dist[v] == plen]
        if plen == 0 and len(ends) != 1:
            continue
        vk = ends[0]
        path = [vk]
        while dist[path[-1]] > 0:
            u = path[-1]
            path.append(min((w for w in e.adjacency[u] if dist[w] == dist[u] - 1), key=e.index.__getitem__))
        path.reverse()
        if any(v in face2 for v in path[:-1]) or any(v in F for v in path[1:]):
            continue
        if not is_short_inseparable(e):
            continue
        return e, F, face2, tuple(path)
    raise RuntimeError("two_hole: no valid fixture found")


def _shrink(m: int) -> list:
    out = []
    while m > 6:
        m = max(5, m - 2)
        out.append(m)
    if not out or out[-1] > 5:
        out.append(max(5, m - 1) if m > 5 else 5)
    return out


def outer_face_index(e: Embedding, cycle: Sequence[Vertex]) -> int:
    s = set(cycle)
    for f in e.faces:
        if set(f.walk) == s and len(f.walk) == len(cycle):
            return f.index
    raise ValueError("no face bounded by the given cycle")


def short_inseparable_triangulation(seed: int, flips: int = 30, base: str = "geo") -> Embedding:
    """Random 5-connected-ish triangulation: subdivided icosahedron plus safe flips."""
    rng = random.Random(seed)
    e = icosahedron() if base == "ico" else loop_subdivide(icosahedron())
    rot = _rot(e)
    for _ in range(flips):
        edges = list(emb(rot).edges)
        a, b = tuple(rng.choice(edges))
        trial = {v: list(ns) for v, ns in rot.items()}
        if not flip(trial, a, b):
            continue
        t = emb(trial)
        if min(t.degree(v) for v in t.vertices) < 5:
            continue
        if is_short_inseparable(t):
            rot = trial
    return emb(rot, sorted(rot))


def loop_subdivide(e: Embedding) -> Embedding:
    """Split every edge and every triangle into four (frequency-2 geodesic)."""
    n = e.num_vertices
    mid = {}
    for i, ed in enumerate(e.edges):
        mid[ed] = n + i

    def m(u, v):
        return mid[frozenset((u, v))]

    rot = {}
    for v in e.vertices:
        rot[v] = [m(v, w) for w in e.rotation[v]]
    for ed, x in mid.items():
        u, v = tuple(ed)
        # around the midpoint: u, (third midpoint in face u->v), v, (third in face v->u)
        fuv = e.face_with_dart(u, v).walk
        fvu = e.face_with_dart(v, u).walk
        w1 = next(w for w in fuv if w not in (u, v))
        w2 = next(w for w in fvu if w not in (u, v))
        rot[x] = [u, m(u, w2), m(v, w2), v, m(v, w1), m(u, w1)]
    out = build_embedding(range(n + len(mid)), rot)
    if out.genus != e.genus:
        # orientation of the midpoint rotation is the other way round
        for ed, x in mid.items():
            rot[x] = rot[x][::-1]
        out = build_embedding(range(n + len(mid)), rot)
    return out


def torus_gadget(m: int, n: int, seed: int, kind: str = "square") -> Embedding:
    """C_m x C_n with one or more faces modified.

    ``hub`` stellates a face, ``square`` nests a 4-cycle inside a face,
    ``square_hub`` nests a 4-cycle with a hub, ``diag`` adds a diagonal to
    every face (a triangulated torus).
    """
    rng = random.Random(seed)
    e = torus_grid(m, n)
    rot = _rot(e)
    nxt = m * n
    if kind == "diag":
        for f in e.faces:
            w = f.walk
            add_chord(rot, w, 0, 2) if rng.random() < 0.5 else add_chord(rot, w, 1, 3)
        return emb(rot, range(nxt))
    f = rng.choice(e.faces)
    w = list(f.walk)
    if kind == "hub":
        stellate(rot, w, nxt)
        return emb(rot, range(nxt + 1))
    if kind not in ("square", "square_hub"):
        raise ValueError(f"unknown gadget {kind!r}")
    inner = [nxt + i for i in range(4)]
    # ring of quads between the face walk and the inner square
    for i in range(4):
        _insert_before(rot, w[i], w[(i + 1) % 4], [inner[i]])
        rot[inner[i]] = [w[i], inner[(i - 1) % 4], inner[(i + 1) % 4]]
    order = list(range(nxt + 4))
    if kind == "square_hub":
        out = emb(rot, order)
        g = next(x for x in out.faces if set(x.walk) == set(inner))
        stellate(rot, g.walk, nxt + 4)
        order.append(nxt + 4)
    out = emb(rot, order)
    if out.genus != 1:
        raise AssertionError("gadget changed the genus")
    return out

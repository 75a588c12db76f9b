"""List assignments, partial colorings and the exhaustive coloring oracle.

Lists are mappings ``vertex -> frozenset[int]``; the solver works on Python
int bitsets internally, so there is no cap on color ids. A graph argument may
be an :class:`~fivelist.embedding.Embedding`, a
:class:`~fivelist.embedding.Subgraph`, or a plain adjacency mapping. Vertex
order (for deterministic tie-breaks) is the mapping's iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping

from .embedding import BudgetExceeded, Embedding, Subgraph

Vertex = Hashable
Lists = Mapping[Vertex, frozenset]
Coloring = dict


class ColoringError(ValueError):
    """Improper or list-violating partial coloring; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def adjacency_of(g) -> dict:
    if isinstance(g, Embedding):
        return dict(g.adjacency)
    if isinstance(g, Subgraph):
        adj = g.adjacency()
        return {v: frozenset(adj[v]) for v in sorted(adj, key=repr)}
    return {v: frozenset(ns) for v, ns in g.items()}


def as_lists(raw: Mapping) -> dict:
    out = {}
    for v, cs in raw.items():
        cs = frozenset(cs)
        if any((not isinstance(c, int)) or c < 0 for c in cs):
            raise ValueError(f"colors must be nonnegative integers (vertex {v!r})")
        out[v] = cs
    return out


def _mask(cs: Iterable[int]) -> int:
    m = 0
    for c in cs:
        m |= 1 << c
    return m


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def improper_edge(adj: Mapping, phi: Mapping):
    for u, c in phi.items():
        for w in adj.get(u, ()):
            if w in phi and phi[w] == c:
                return (u, w)
    return None


def check_coloring(g, lists: Lists, phi: Mapping, *, total: bool = False) -> list:
    """Problems with phi as an L-coloring (empty list means valid)."""
    adj = adjacency_of(g)
    problems = []
    for v, c in phi.items():
        if v not in adj:
            problems.append(f"colored vertex {v!r} not in graph")
        elif c not in lists.get(v, ()):
            problems.append(f"color {c} not in list of {v!r}")
    bad = improper_edge(adj, phi)
    if bad:
        problems.append(f"edge {bad[0]!r}-{bad[1]!r} monochromatic")
    if total:
        missing = [v for v in adj if v not in phi]
        if missing:
            problems.append(f"uncolored vertices {missing[:5]!r}")
    return problems


def reduce(g, lists: Lists, phi: Mapping, keep: Iterable[Vertex] = ()) -> dict:
    """The reduced assignment L^S_phi on G minus (dom(phi) \\ S)."""
    adj = adjacency_of(g)
    bad = improper_edge(adj, phi)
    if bad:
        raise ColoringError("phi is improper", bad)
    keep = set(keep)
    out = {}
    for v in adj:
        if v in phi:
            if v in keep:
                out[v] = frozenset((phi[v],))
            continue
        gone = {phi[w] for w in adj[v] if w in phi and w not in keep}
        out[v] = frozenset(lists.get(v, frozenset())) - gone
    return out


def union_colorings(g, phi: Mapping, psi: Mapping) -> dict:
    adj = adjacency_of(g)
    for v in phi.keys() & psi.keys():
        if phi[v] != psi[v]:
            raise ColoringError(f"disagreement at {v!r}", v)
    for u, c in phi.items():
        for w in adj.get(u, ()):
            if w in psi and w not in phi and psi[w] == c:
                raise ColoringError(f"edge {u!r}-{w!r} monochromatic", (u, w))
    out = dict(phi)
    out.update(psi)
    return out


def solve(g, lists: Lists, fixed: Mapping | None = None) -> dict | None:
    """A total proper L-coloring extending ``fixed``, or None.

    Backtracking, minimum-remaining-values; ties broken by vertex order then
    lowest color, so the result is deterministic.
    """
    adj = adjacency_of(g)
    fixed = dict(fixed or {})
    order = list(adj)
    rank = {v: i for i, v in enumerate(order)}
    avail = {}
    for v in order:
        if v in fixed:
            continue
        m = _mask(lists.get(v, ()))
        for w in adj[v]:
            if w in fixed:
                m &= ~(1 << fixed[w])
        avail[v] = m
    if improper_edge(adj, fixed):
        return None
    col: dict = {}
    uncolored = set(avail)

    def pick():
        best, bc = None, None
        for v in uncolored:
            c = bin(avail[v]).count("1")
            if best is None or c < bc or (c == bc and rank[v] < rank[best]):
                best, bc = v, c
                if c == 0:
                    break
        return best

    def rec() -> bool:
        if not uncolored:
            return True
        v = pick()
        m = avail[v]
        if not m:
            return False
        uncolored.discard(v)
        for c in _bits(m):
            bit = 1 << c
            touched = [w for w in adj[v] if w in uncolored and avail[w] & bit]
            for w in touched:
                avail[w] &= ~bit
            col[v] = c
            if all(avail[w] for w in touched) and rec():
                return True
            for w in touched:
                avail[w] |= bit
            del col[v]
        uncolored.add(v)
        return False

    if not rec():
        return None
    out = dict(fixed)
    out.update(col)
    return {v: out[v] for v in order}


def count_colorings(g, lists: Lists) -> int:
    """Naive enumeration count; independent of :func:`solve`, for cross-checks."""
    adj = adjacency_of(g)
    order = list(adj)
    col: dict = {}

    def rec(i: int) -> int:
        if i == len(order):
            return 1
        v = order[i]
        n = 0
        for c in sorted(lists.get(v, ())):
            if all(col.get(w) != c for w in adj[v]):
                col[v] = c
                n += rec(i + 1)
                del col[v]
        return n

    return rec(0)


def extend(g, lists: Lists, phi: Mapping) -> dict | None:
    adj = adjacency_of(g)
    if improper_edge(adj, phi) or any(c not in lists.get(v, ()) for v, c in phi.items()):
        raise ColoringError("phi is not a proper L-coloring")
    return solve(adj, lists, phi)


def extends(phi: Mapping, g, lists: Lists) -> bool:
    return extend(g, lists, phi) is not None


def enumerate_colorings(g, lists: Lists, fixed: Mapping | None = None) -> Iterator[dict]:
    """All proper colorings of the unfixed vertices, in lexicographic order."""
    adj = adjacency_of(g)
    fixed = dict(fixed or {})
    order = [v for v in adj if v not in fixed]
    col = dict(fixed)

    def rec(i: int):
        if i == len(order):
            yield {v: col[v] for v in order}
            return
        v = order[i]
        for c in sorted(lists.get(v, ())):
            if all(col.get(w) != c for w in adj[v]):
                col[v] = c
                yield from rec(i + 1)
                del col[v]

    yield from rec(0)


@dataclass
class InertReport:
    inert: bool
    witness: dict | None = None  # a coloring of G - Z' that does not extend
    enumerated: int = 0
    components: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.inert


def is_inert(z: Iterable[Vertex], phi: Mapping, g, lists: Lists, *, budget: int = 1_000_000) -> InertReport:
    """Exact inertness by enumeration of boundary colorings.

    Z' = Z minus dom(phi). For each component Z_i of G[Z'] we enumerate the
    proper colorings of its uncolored boundary; whenever one leaves Z_i
    uncolorable we ask whether it extends to all of G - Z'. Inertness fails
    iff such an extension exists (components of G[Z'] see disjoint-or-fixed
    boundaries, so failures are witnessed one component at a time).
    """
    adj = adjacency_of(g)
    phi = dict(phi)
    if improper_edge(adj, phi):
        raise ColoringError("phi is improper")
    zp = [v for v in adj if v in set(z) and v not in phi]
    zset = set(zp)
    rep = InertReport(True)
    if not zp:
        return rep
    rest = {v: frozenset(w for w in ns if w not in zset) for v, ns in adj.items() if v not in zset}
    seen: set = set()
    for s in zp:
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w in zset and w not in seen:
                    seen.add(w)
                    stack.append(w)
        rep.components.append(tuple(comp))
        cset = set(comp)
        bnd = [v for v in adj if v not in zset and v not in phi and any(w in cset for w in adj[v])]
        bset = set(bnd)
        badj = {v: frozenset(w for w in adj[v] if w in bset) for v in bnd}
        blists = {v: frozenset(lists.get(v, ())) - {phi[w] for w in adj[v] if w in phi} for v in bnd}
        cadj = {v: frozenset(w for w in adj[v] if w in cset) for v in comp}
        for beta in enumerate_colorings(badj, blists):
            rep.enumerated += 1
            if rep.enumerated > budget:
                raise BudgetExceeded(f"inertness enumeration exceeded {budget}")
            zl = {}
            for v in comp:
                gone = {phi[w] for w in adj[v] if w in phi} | {beta[w] for w in adj[v] if w in beta}
                zl[v] = frozenset(lists.get(v, ())) - gone
            if solve(cadj, zl) is not None:
                continue
            fixed = dict(phi)
            fixed.update(beta)
            full = solve(rest, lists, fixed)
            if full is not None:
                rep.inert = False
                rep.witness = full
                return rep
    return rep


def inert_certificate(z: Iterable[Vertex], phi: Mapping, g, lists: Lists, *, order_first: Iterable[Vertex] = ()) -> list | None:
    """Greedy elimination order proving inertness, or None.

    z_1..z_t certify Z' if each z_i has more reduced colors than its
    uncolored neighbors outside Z' plus its earlier neighbors in the order:
    then any coloring of G - Z' extends greedily in reverse order.
    """
    adj = adjacency_of(g)
    zp = [v for v in adj if v in set(z) and v not in phi]
    zset = set(zp)
    first = [v for v in order_first if v in zset]
    firstset = set(first)
    order = first + [v for v in zp if v not in firstset]
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        size = len(frozenset(lists.get(v, ())) - {phi[w] for w in adj[v] if w in phi})
        need = 0
        for w in adj[v]:
            if w in phi:
                continue
            if w not in zset or pos[w] < pos[v]:
                need += 1
        if size <= need:
            return None
    return order


def colorable_edge(lists: Lists, x: Vertex, y: Vertex) -> bool:
    lx, ly = lists.get(x, frozenset()), lists.get(y, frozenset())
    return bool(lx) and bool(ly) and not (len(lx) == 1 and lx == ly)


def is_thomassen_face(face, lists: Lists) -> bool:
    """Thomassen shape: one L-colorable edge, lists >= 3 elsewhere on the face.

    ``face`` is a FacialSubgraph or a closed vertex walk. A walk with a single
    vertex (an isolated component) qualifies iff that vertex has a color.
    """
    walk = tuple(face.walk) if hasattr(face, "walk") else tuple(face)
    vs = set(walk)
    if len(vs) == 1:
        return bool(lists.get(walk[0]))
    edges = []
    for i in range(len(walk)):
        a, b = walk[i], walk[(i + 1) % len(walk)]
        if a != b and (b, a) not in edges and (a, b) not in edges:
            edges.append((a, b))
    small = {v for v in vs if len(lists.get(v, ())) < 3}
    if len(small) > 2:
        return False
    for x, y in edges:
        if small <= {x, y} and colorable_edge(lists, x, y):
            return True
    return False

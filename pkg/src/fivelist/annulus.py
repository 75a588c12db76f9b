"""Halving colorings on nonsplit rings, lens coloring and the annulus theorem.

The Link / Halve constructions are carried out by a single exact dynamic
program over the boundary path (or cycle) of ``C* = F^1(C)``. Every vertex
of ``C* - C`` is either colored or, if it is a Mid-down vertex, left
uncolored with a local inertness certificate. The objective is the number of
vertices near the path whose reduced list drops to two (a superset of the
Tw set the halving bound is stated for). Because all interactions are
between vertices at most two apart along the path, a window of three
positions carries the whole state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import networkx as nx

from .embedding import INF, Embedding, EmbeddingError, Subgraph, bfs_distances, build_embedding
from .listcolor import improper_edge, inert_certificate, is_thomassen_face, solve
from .skeleton import (
    Disc,
    SkeletonError,
    build_skeleton,
    cycle_neighbors,
    delta_sets,
    disc,
    grow_tower,
    is_k_triangulated,
    ndepth,
    two_path,
)

Vertex = Hashable

SKIP = -1
OUT = -2


class ProofInvariantError(AssertionError):
    """A step the construction guarantees did not happen; carries the context."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class AnnulusHypothesisError(ValueError):
    """Inputs do not satisfy the hypotheses of the requested procedure."""


def log2ceil(n: int) -> int:
    return max(0, math.ceil(math.log2(n)))


def radius(n: int) -> int:
    return log2ceil(n) + 2


def reduced_list(e: Embedding, lists: Mapping, col: Mapping, v: Vertex) -> frozenset:
    return frozenset(lists.get(v, ())) - {col[w] for w in e.adjacency[v] if w in col}


def delta_L(e: Embedding, cycle: Sequence[Vertex], outer: int, lists: Mapping, col: Mapping, *,
            d: Disc | None = None) -> frozenset:
    """Delta^{2p}(cycle) vertices whose reduced list has fewer than three colors."""
    _, d2p = delta_sets(e, cycle, outer, d=d)
    return frozenset(v for v in d2p if v not in col and len(reduced_list(e, lists, col, v)) < 3)


# ----------------------------------------------------------------- context
@dataclass
class RingContext:
    """Data for one halving step on the ring between C and C* = F^1(C)."""

    e: Embedding
    cycle: tuple
    outer: int
    lists: Mapping
    psi: dict  # everything colored so far (at least on V(C))
    inert: frozenset  # uncolored vertices already known to be inert
    d: Disc
    cstar: tuple
    dstar: Disc
    w1: Subgraph
    mid: dict  # Mid-down vertex b -> the y in Delta^{2p}(C*) it is the midpoint for
    u1: frozenset
    u2: frozenset
    b2: frozenset  # B_2(C) inside Int(C)
    notes: list = field(default_factory=list)

    @property
    def cset(self) -> frozenset:
        return frozenset(self.cycle)

    def lpsi(self, v: Vertex, col: Mapping | None = None) -> frozenset:
        return reduced_list(self.e, self.lists, self.psi if col is None else col, v)

    def delta_before(self) -> frozenset:
        return delta_L(self.e, self.cycle, self.outer, self.lists, self.psi, d=self.d)

    def components(self) -> list:
        """Path components of C* - C in cyclic order; [] means C* and C are disjoint."""
        cs = self.cset
        n = len(self.cstar)
        if not any(v in cs for v in self.cstar):
            return []
        start = next(i for i in range(n) if self.cstar[i] in cs)
        comps, cur = [], []
        for t in range(1, n + 1):
            v = self.cstar[(start + t) % n]
            if v in cs:
                if cur:
                    comps.append(tuple(cur))
                cur = []
            else:
                cur.append(v)
        return comps


def ring_context(e: Embedding, cycle: Sequence[Vertex], outer: int, lists: Mapping, psi: Mapping,
                 inert=None, *, check: bool = True) -> RingContext:
    cycle = tuple(cycle)
    if len(cycle) <= 3:
        raise AnnulusHypothesisError("need |V(C)| > 3")
    if check and ndepth(e, cycle, outer, cap=2) < 2:
        raise AnnulusHypothesisError("need NDepth(C) >= 2")
    d = disc(e, cycle, outer)
    dist = bfs_distances(e, cycle, d.adjacency(e))
    b2 = frozenset(v for v, k in dist.items() if k <= 2)
    if check:
        small = [v for v in b2 if v not in d.cycle and len(lists.get(v, ())) < 5]
        if small:
            raise AnnulusHypothesisError(f"lists of size < 5 in B_2(C): {small[:3]!r}")
        bad = improper_edge(e.adjacency, psi)
        if bad:
            raise AnnulusHypothesisError(f"psi improper on {bad!r}")
    tower = grow_tower(e, cycle, outer, check_nonsplit=False)
    if tower.r == 0:
        raise AnnulusHypothesisError("tower stalls: C is nonsplit but Delta^{2p}(C) is empty (apex)")
    cstar = tower.F
    dstar = disc(e, cstar, outer)
    _, d2p = delta_sets(e, cstar, outer, d=dstar)
    nb = cycle_neighbors(e, dstar)
    mid = {}
    for y in d2p:
        _, b, _ = two_path(cstar, nb[y])
        if b in mid:
            raise ProofInvariantError("two Delta^{2p}(C*) vertices share a midpoint", b=b)
        mid[b] = y
    cs = set(cycle)
    off = [v for v in cstar if v not in cs]
    u1 = frozenset(v for v in off if sum(w in cs for w in e.adjacency[v]) == 1)
    u2 = frozenset(v for v in off if sum(w in cs for w in e.adjacency[v]) == 2)
    inert = frozenset(inert) if inert is not None else frozenset(v for v in cycle if v not in psi)
    ctx = RingContext(e, cycle, outer, lists, dict(psi), inert, d, cstar, dstar, tower.w, mid, u1, u2, b2)
    for v in u1:
        if len(ctx.lpsi(v)) < 4:
            ctx.notes.append(f"U=1 vertex {v!r} has reduced list of size {len(ctx.lpsi(v))}")
    return ctx


def tw(ctx: RingContext, col: Mapping) -> frozenset:
    """Uncolored vertices of B_2(C) off C whose reduced list has exactly two colors."""
    cs = ctx.cset
    return frozenset(v for v in ctx.b2 if v not in cs and v not in col
                     and len(reduced_list(ctx.e, ctx.lists, col, v)) == 2)


def mid_down(ctx: RingContext, vertices) -> frozenset:
    return frozenset(v for v in vertices if v in ctx.mid)


# ---------------------------------------------------------------- engine
@dataclass
class WindowResult:
    coloring: dict
    skipped: frozenset
    cost: int


class _Window:
    """Exact min-cost assignment along a path or cycle of C* - C."""

    def __init__(self, ctx: RingContext, seq: Sequence[Vertex], col: Mapping, cyclic: bool):
        e = ctx.e
        self.ctx, self.seq, self.cyclic = ctx, tuple(seq), cyclic
        m = self.m = len(self.seq)
        pos = {v: i for i, v in enumerate(self.seq)}
        for i, v in enumerate(self.seq):
            qn = {pos[w] for w in e.adjacency[v] if w in pos}
            want = set()
            if cyclic or i > 0:
                want.add((i - 1) % m)
            if cyclic or i < m - 1:
                want.add((i + 1) % m)
            if qn != want:
                raise AnnulusHypothesisError(f"boundary path is not induced at {v!r}")
        self.base = [reduced_list(e, ctx.lists, col, v) for v in self.seq]
        self.unc = []
        for v in self.seq:
            self.unc.append(sum(1 for w in e.adjacency[v] if w not in col and w not in ctx.inert and w not in pos))
        self.canskip = [v in ctx.mid for v in self.seq]
        # vertices off the path whose reduced list depends on the path
        self.centered: list = [[] for _ in range(m)]
        cs, on_star = ctx.cset, set(ctx.cstar)
        watch = set()
        for v in self.seq:
            for w in e.adjacency[v]:
                if w not in col and w not in pos and w not in cs and w not in on_star and w in ctx.dstar.vertices:
                    watch.add(w)
        for w in sorted(watch, key=e.index.__getitem__):
            idx = sorted(pos[x] for x in e.adjacency[w] if x in pos)
            c = self._center(idx)
            if c is None:
                raise ProofInvariantError("an inside vertex sees path vertices more than two apart", vertex=w, idx=idx)
            offs = tuple(((i - c + 1) % m) - 1 if cyclic else i - c for i in idx)
            self.centered[c].append((reduced_list(e, ctx.lists, col, w), offs))

    def _center(self, idx):
        m = self.m
        if not self.cyclic:
            lo, hi = idx[0], idx[-1]
            if hi - lo > 2:
                return None
            return lo + 1 if hi - lo == 2 else lo
        for c in range(m):
            if all(((i - c + 1) % m) <= 2 for i in idx):
                return c
        return None

    def options(self, i: int, allowed=None) -> list:
        opts = sorted(self.base[i])
        if self.canskip[i]:
            opts.append(SKIP)
        if allowed is not None:
            opts = [o for o in opts if o in allowed]
        return opts

    def local(self, j: int, p: int, o: int, nx: int):
        if o >= 0 and nx >= 0 and o == nx:
            return None
        cost = 0
        if o == SKIP:
            rem = self.base[j] - {x for x in (p, nx) if x >= 0}
            unc = self.unc[j] + (p == SKIP) + (nx == SKIP)
            if len(rem) <= unc:
                return None
            if len(rem) <= 2:
                cost += 1
        if self.centered[j]:
            trip = (p, o, nx)
            for wl, offs in self.centered[j]:
                used = {trip[k + 1] for k in offs if trip[k + 1] >= 0}
                if len(wl - used) <= 2:
                    cost += 1
        return cost

    def solve(self, allowed: Sequence | None = None):
        allowed = list(allowed) if allowed is not None else [None] * self.m
        opts = [self.options(i, allowed[i]) for i in range(self.m)]
        if any(not o for o in opts):
            return None
        best = self._cycle(opts) if self.cyclic else self._path(opts)
        if best is None:
            return None
        cost, assign = best
        col = {v: a for v, a in zip(self.seq, assign) if a >= 0}
        skipped = frozenset(v for v, a in zip(self.seq, assign) if a == SKIP)
        return WindowResult(col, skipped, cost)

    def _run(self, opts, start: dict, first: int, last: int, closing=None):
        """States (o_j, o_{j+1}) -> (cost, assignment tuple) from center ``first`` to ``last``."""
        states = start
        for j in range(first, last + 1):
            nxt_opts = closing if (closing is not None and j == last) else (
                opts[j + 1] if j + 1 < self.m else [OUT])
            new: dict = {}
            for (p, o), (cost, assign) in states.items():
                for nx in nxt_opts:
                    c = self.local(j, p, o, nx)
                    if c is None:
                        continue
                    key = (o, nx)
                    tot = cost + c
                    if key not in new or tot < new[key][0]:
                        new[key] = (tot, assign + ((nx,) if nx != OUT else ()))
            states = new
        return states

    def _path(self, opts):
        start = {(OUT, o): (0, (o,)) for o in opts[0]}
        states = self._run(opts, start, 0, self.m - 1)
        if not states:
            return None
        return min(states.values(), key=lambda t: t[0])

    def _cycle(self, opts):
        m = self.m
        best = None
        for a in opts[m - 1]:
            for b in opts[0]:
                start = {(a, b): (0, (b,))}
                # centers 0 .. m-2 choose o_1 .. o_{m-1}; o_{m-1} is pinned to a
                pinned = [o for o in opts[m - 1] if o == a]
                states = self._run(opts[:m - 1] + [pinned], start, 0, m - 2)
                for (p, o), (cost, assign) in states.items():
                    c = self.local(m - 1, p, o, b)
                    if c is None:
                        continue
                    if best is None or cost + c < best[0]:
                        best = (cost + c, assign)
        return best


def _check_skips(ctx: RingContext, col: Mapping, skipped) -> None:
    """Independent recheck of the local certificate for each uncolored path vertex."""
    z1 = ctx.inert
    adj = {v: frozenset(w for w in ctx.e.adjacency[v] if w not in z1) for v in ctx.e.vertices if v not in z1}
    order = inert_certificate(skipped, col, adj, ctx.lists)
    if order is None:
        raise ProofInvariantError("skipped vertices fail the greedy inertness certificate", skipped=sorted(skipped, key=repr))


# ------------------------------------------------------ Link and Halve
@dataclass
class PathColoring:
    coloring: dict  # colors on V(Q)
    skipped: frozenset
    tw: frozenset
    cost: int
    bound: int | None


def _count_delta(ctx: RingContext, q) -> int:
    dl = ctx.delta_before()
    return sum(1 for v in q if v in dl)


def _path_dp(ctx: RingContext, q: Sequence[Vertex], col: Mapping | None, allowed) -> WindowResult:
    col = ctx.psi if col is None else col
    w = _Window(ctx, q, col, cyclic=False)
    res = w.solve(allowed)
    if res is None:
        raise ProofInvariantError("no admissible coloring of the boundary path", path=tuple(q))
    return res


def _finish(ctx, col, res, bound, q) -> PathColoring:
    full = dict(col)
    full.update(res.coloring)
    _check_skips(ctx, full, res.skipped)
    # other parts of C* are colored by their own calls
    later = set(ctx.cstar) - set(q)
    return PathColoring(res.coloring, res.skipped, tw(ctx, full) - later, res.cost, bound)


def link_coloring(ctx: RingContext, q: Sequence[Vertex], constraint, col: Mapping | None = None) -> PathColoring:
    """An element of Link(Q).

    ``constraint`` is ``("point", p, c)`` or ``("sets", A, A2)`` with A for the
    first vertex of ``q`` and A2 for the last.
    """
    q = tuple(q)
    col = ctx.psi if col is None else col
    m = len(q)
    for v in q[1:-1]:
        if len(ctx.lists.get(v, ())) < 3:
            raise AnnulusHypothesisError(f"internal vertex {v!r} has a list of size < 3")
    allowed = []
    for i, v in enumerate(q):
        if 0 < i < m - 1 and v in ctx.mid:
            allowed.append({SKIP})
        else:
            allowed.append(set(reduced_list(ctx.e, ctx.lists, col, v)))
    kind = constraint[0]
    if kind == "point":
        _, p, c = constraint
        i = q.index(p)
        if i not in (0, m - 1):
            raise AnnulusHypothesisError("Link point constraint must be on an endpoint")
        allowed[i] = allowed[i] & {c}
    elif kind == "sets":
        _, a, a2 = constraint
        if m < 2:
            raise AnnulusHypothesisError("set constraints need |V(Q)| >= 2")
        allowed[0] = allowed[0] & set(a)
        allowed[-1] = allowed[-1] & set(a2)
    else:
        raise ValueError(f"unknown constraint {kind!r}")
    res = _path_dp(ctx, q, col, allowed)
    return _finish(ctx, col, res, None, q)


def halve_plus(ctx: RingContext, q: Sequence[Vertex], x: Vertex, c: int, col: Mapping | None = None) -> PathColoring:
    """An element of Halve+(Q) using c on the endpoint x."""
    q = tuple(q)
    col = ctx.psi if col is None else col
    if x not in (q[0], q[-1]):
        raise AnnulusHypothesisError("x must be an endpoint of Q")
    if c not in reduced_list(ctx.e, ctx.lists, col, x):
        raise AnnulusHypothesisError(f"color {c} not available at {x!r}")
    allowed = [None] * len(q)
    allowed[q.index(x)] = {c}
    res = _path_dp(ctx, q, col, allowed)
    bound = -(-_count_delta(ctx, q) // 2)
    if res.cost > bound:
        raise ProofInvariantError("Halve+ bound exceeded", path=q, cost=res.cost, bound=bound)
    return _finish(ctx, col, res, bound, q)


def halve_minus(ctx: RingContext, q: Sequence[Vertex], col: Mapping | None = None) -> PathColoring:
    """An element of Halve-(Q): floor bound, no endpoint constraint."""
    q = tuple(q)
    col = ctx.psi if col is None else col
    res = _path_dp(ctx, q, col, None)
    bound = _count_delta(ctx, q) // 2
    if res.cost > bound:
        raise ProofInvariantError("Halve- bound exceeded", path=q, cost=res.cost, bound=bound)
    return _finish(ctx, col, res, bound, q)


# ----------------------------------------------------------------- step
@dataclass
class OneStepResult:
    psi: dict  # psi* (all colors so far)
    cstar: tuple
    w1: Subgraph
    skipped: frozenset
    delta_before: frozenset
    delta_after: frozenset
    tw: frozenset
    case: str  # "paths" or "cycle"


def one_step(ctx: RingContext) -> OneStepResult:
    """Extend psi to V(w^1(C)) so that Delta_L halves and the uncolored part stays inert."""
    before = ctx.delta_before()
    col = dict(ctx.psi)
    skipped: set = set()
    comps = ctx.components()
    if comps:
        case = "paths"
        for q in comps:
            res = halve_minus(ctx, q, col)
            col.update(res.coloring)
            skipped |= res.skipped
    else:
        case = "cycle"
        w = _Window(ctx, ctx.cstar, col, cyclic=True)
        res = w.solve()
        if res is None:
            raise ProofInvariantError("no admissible coloring of C*", cycle=ctx.cstar)
        bound = -(-len(before) // 2)
        if res.cost > bound:
            raise ProofInvariantError("cycle halving bound exceeded", cost=res.cost, bound=bound)
        col.update(res.coloring)
        skipped |= res.skipped
    _check_skips(ctx, col, skipped)
    after = delta_L(ctx.e, ctx.cstar, ctx.outer, ctx.lists, col, d=ctx.dstar)
    if len(after) > -(-len(before) // 2):
        raise ProofInvariantError("halving inequality fails", before=len(before), after=len(after))
    return OneStepResult(col, ctx.cstar, ctx.w1, frozenset(skipped), before, after, tw(ctx, col), case)


# ------------------------------------------------------- residual faces
def outer_walk(e: Embedding, comp, removed_probe: Mapping | None = None) -> tuple:
    """Facial walk of G[comp] on the side where the removed vertices lie.

    The removed vertices must form a connected set, so they all sit in one
    face of G[comp]; that face is found at a corner next to a removed
    neighbour.
    """
    comp = set(comp)
    if len(comp) == 1:
        return (next(iter(comp)),)
    for v in sorted(comp, key=e.index.__getitem__):
        rot = e.rotation[v]
        if all(w in comp for w in rot):
            continue
        i = next(t for t, w in enumerate(rot) if w not in comp)
        k = len(rot)
        nxt = next((rot[(i + s) % k] for s in range(1, k) if rot[(i + s) % k] in comp), None)
        if nxt is None:
            continue
        sub = e.induced(comp)
        return tuple(sub.face_with_dart(v, nxt).walk)
    raise EmbeddingError("component does not touch the removed set")


@dataclass
class Residual:
    vertices: frozenset
    walk: tuple
    thomassen: bool


def residual_components(e: Embedding, region, removed, lists: Mapping, col: Mapping) -> list:
    """Components of G[region - removed] with their outer walks and the Thomassen check under L_col."""
    keep = set(region) - set(removed)
    adj = {v: [w for w in e.adjacency[v] if w in keep] for v in keep}
    seen, out = set(), []
    for s in sorted(keep, key=e.index.__getitem__):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        walk = outer_walk(e, comp)
        red = {v: reduced_list(e, lists, col, v) for v in comp}
        out.append(Residual(frozenset(comp), walk, is_thomassen_face(walk, red)))
    return out


# ---------------------------------------------------------- iteration
@dataclass
class InwardResult:
    psi: dict
    w: Subgraph
    cycles: list  # C_0 = C, C_1, ..., C_{r-1}
    chain: list  # |Delta_L| per level
    skipped: frozenset
    residual: list
    r: int
    steps: list


def iterate_inward(e: Embedding, cycle: Sequence[Vertex], psi: Mapping, lists: Mapping, outer: int, *,
                   r: int | None = None, strict: bool = False, context: Mapping | None = None,
                   inert=None) -> InwardResult:
    """r-1 halving steps from C inward, r = ceil(log2 |V(C)|) + 2 by default.

    ``context`` holds colors outside Int(C) that already constrain lists.
    With ``strict`` the depth guard is NDepth(C) >= r + 2 instead of r.
    """
    cycle = tuple(cycle)
    n = len(cycle)
    r = radius(n) if r is None else r
    need = r + 2 if strict else r
    if n <= 3:
        raise AnnulusHypothesisError("need |V(C)| > 3")
    if ndepth(e, cycle, outer, cap=need) < need:
        raise AnnulusHypothesisError(f"need NDepth(C) >= {need}")
    d = disc(e, cycle, outer)
    dist = bfs_distances(e, cycle, d.adjacency(e))
    small = [v for v, k in dist.items() if 0 < k <= r and len(lists.get(v, ())) < 5]
    if small:
        raise AnnulusHypothesisError(f"lists of size < 5 within B_r(C): {small[:3]!r}")
    col = dict(context or {})
    col.update(psi)
    zin = set(inert or ()) | {v for v in cycle if v not in col}
    cur = cycle
    w = Subgraph.from_cycle(cycle)
    cycles, steps = [cycle], []
    chain = [len(delta_L(e, cycle, outer, lists, col, d=d))]
    for _ in range(r - 1):
        ctx = ring_context(e, cur, outer, lists, col, frozenset(zin))
        res = one_step(ctx)
        if len(res.delta_after) > -(-chain[-1] // 2):
            raise ProofInvariantError("halving chain broken", chain=chain + [len(res.delta_after)])
        col = res.psi
        zin |= res.skipped
        w = w | res.w1
        cur = res.cstar
        cycles.append(cur)
        chain.append(len(res.delta_after))
        steps.append(res)
    region = disc(e, cur, outer).strict
    residual = residual_components(e, region, (), lists, col)
    bad = [x for x in residual if not x.thomassen]
    if bad:
        raise ProofInvariantError("residual outer face is not a Thomassen face", walk=bad[0].walk)
    skipped = frozenset(v for v in w.vertices if v not in col)
    return InwardResult(col, w, cycles, chain, skipped, residual, r, steps)


# ----------------------------------------------------------------- lens
@dataclass
class Lens:
    e: Embedding
    cycle: tuple
    outer: int
    lists: Mapping
    psi: dict
    k: int

    def check(self) -> list:
        """Problems with the k-lens clauses (the inertness clause is left to the oracle)."""
        probs = []
        if not is_k_triangulated(self.e, self.cycle, self.k, self.outer):
            probs.append(f"C is not {self.k}-triangulated")
        d = disc(self.e, self.cycle, self.outer)
        dist = bfs_distances(self.e, self.cycle, d.adjacency(self.e))
        small = [v for v, t in dist.items() if 0 < t <= self.k + 1 and len(self.lists.get(v, ())) < 5]
        if small:
            probs.append(f"lists of size < 5 in B_(k+1)(C): {small[:3]!r}")
        for v, c in self.psi.items():
            if v not in self.cycle:
                probs.append(f"psi colors {v!r} off C")
            elif c not in self.lists.get(v, ()):
                probs.append(f"psi({v!r}) not in its list")
        if improper_edge(self.e.adjacency, self.psi):
            probs.append("psi is improper")
        return probs


@dataclass
class LensResult:
    K: Subgraph
    psi: dict
    skeleton: object
    inward: dict  # face cycle -> InwardResult
    residual: list
    r: int
    n: int
    apex: list = field(default_factory=list)  # faces closed off over a single apex


def color_lens(e: Embedding, cycle: Sequence[Vertex], outer: int, lists: Mapping, tau: Mapping, *,
               check: bool = True) -> LensResult:
    """K* and a partial coloring psi of V(K*) extending tau, via a (k, r)-skeleton."""
    cycle = tuple(cycle)
    n = len(cycle)
    r = radius(n)
    if any(v not in tau for v in cycle):
        raise AnnulusHypothesisError("tau must color every vertex of C")
    if check:
        probs = Lens(e, cycle, outer, lists, dict(tau), r * n).check()
        if probs:
            raise AnnulusHypothesisError("; ".join(probs))
    d = disc(e, cycle, outer)
    dist = bfs_distances(e, cycle, d.adjacency(e))
    ball = [v for v in e.vertices if dist.get(v, INF) <= r * (n - 1)]
    sigma = solve(e.induced_adjacency(ball), lists, dict(tau))
    if sigma is None:
        raise AnnulusHypothesisError("tau does not extend to B_{r(n-1)}(C)")
    k = r * (n - 3) if n > 3 else 0
    try:
        sk = build_skeleton(e, cycle, k, r, outer)
    except SkeletonError as ex:
        raise AnnulusHypothesisError(str(ex)) from ex
    K = sk.K
    psi = {v: sigma[v] for v in K.vertices}
    inward = {}
    apex = []
    for face in sk.faces:
        D = face.cycle
        if len(D) <= 3 or ndepth(e, D, outer, cap=r) < r:
            continue
        if grow_tower(e, D, outer, check_nonsplit=False).r == 0:
            # nonsplit face over a single apex: keep the apex, colored by sigma
            dd = disc(e, D, outer)
            K = K | dd.subgraph()
            for v in dd.strict:
                psi[v] = sigma[v]
            apex.append(D)
            continue
        res = iterate_inward(e, D, {v: psi[v] for v in D}, lists, outer, r=r, context=psi)
        for v, c in res.psi.items():
            if v in res.w.vertices:
                psi[v] = c
        K = K | res.w
        inward[D] = res
    residual = residual_components(e, d.strict, K.vertices, lists, psi)
    return LensResult(K, psi, sk, inward, residual, r, n, apex)


# ------------------------------------------------------- vertex splitting
@dataclass
class SplitFrame:
    """Record of a frame split: G-dagger, its outer cycle, and the vertex maps."""

    g: Embedding  # G-dagger
    cycle: tuple  # C-dagger
    outer: int
    path: tuple
    pairs: tuple  # ((u_i, u_i*), ...) aligned with path
    back: dict  # G-dagger vertex -> G vertex
    order: tuple  # vertex order of the original embedding
    lists: dict | None = None
    tau: dict | None = None
    starts: dict = field(default_factory=dict)  # first rotation entry per G vertex, for exact round trips


def _corner(e: Embedding, face: Sequence[Vertex], v: Vertex) -> tuple:
    """(a, b) with the rotation at v sending a to b inside the face walk."""
    k = len(face)
    i = list(face).index(v)
    return face[i - 1], face[(i + 1) % k]


def _arc(rot: list, start: Vertex, stop: Vertex) -> list:
    """Cyclic slice of rot from start up to (not including) stop."""
    k = len(rot)
    i = rot.index(start)
    out = []
    for t in range(k):
        x = rot[(i + t) % k]
        if x == stop and t > 0:
            break
        out.append(x)
    return out


def _fresh_ids(e: Embedding, path: Sequence[Vertex]) -> list:
    if all(isinstance(v, int) for v in e.vertices):
        top = max(e.vertices) + 1
        return [(top + 2 * i, top + 2 * i + 1) for i in range(len(path))]
    return [(("u", v), ("u*", v)) for v in path]


def split_frame(e: Embedding, F: Sequence[Vertex], F2: Sequence[Vertex], P: Sequence[Vertex], *,
                lists: Mapping | None = None, phi: Mapping | None = None) -> SplitFrame:
    """Cut G open along P so that F, P and F2 become one outer cycle."""
    F, F2, P = tuple(F), tuple(F2), tuple(P)
    fo = next((f for f in e.faces if len(f.walk) == len(F) and set(f.walk) == set(F)), None)
    fi = next((f for f in e.faces if len(f.walk) == len(F2) and set(f.walk) == set(F2)), None)
    if fo is None or fi is None or fo.index == fi.index:
        raise AnnulusHypothesisError("F and F' must be two distinct facial cycles")
    if not P or P[0] not in F or P[-1] not in F2:
        raise AnnulusHypothesisError("P must run from F to F'")
    if len(set(P)) != len(P) or any(v in F or v in F2 for v in P[1:-1]):
        raise AnnulusHypothesisError("P must be a path meeting F and F' only at its ends")
    if len(P) > 1 and (P[0] in F2 or P[-1] in F):
        raise AnnulusHypothesisError("P must meet F and F' only at its ends")
    for a, b in zip(P, P[1:]):
        if not e.has_edge(a, b):
            raise AnnulusHypothesisError(f"{a!r}-{b!r} is not an edge")
    k = len(P)
    ids = _fresh_ids(e, P)
    rot = {v: list(e.rotation[v]) for v in e.vertices}
    new = {}
    sides = {}  # (path vertex, neighbour) -> index into ids (0 left / 1 right)
    for i, v in enumerate(P):
        r = rot[v]
        fwd = P[i + 1] if i + 1 < k else None
        bwd = P[i - 1] if i > 0 else None
        if fwd is None:
            _, d = _corner(e, fi.walk, v)  # the rotation at v sends c to d inside F'
        if bwd is None:
            _, b = _corner(e, fo.walk, v)  # the rotation at v sends a to b inside F
        lstop = bwd if bwd is not None else b
        rstop = fwd if fwd is not None else d
        left = _arc(r, fwd, lstop)[1:] if fwd is not None else _arc(r, d, lstop)
        right = _arc(r, bwd, rstop)[1:] if bwd is not None else _arc(r, b, rstop)
        u, us = ids[i]
        lu = ([ids[i + 1][0]] if fwd is not None else []) + left + ([ids[i - 1][0]] if bwd is not None else [])
        ru = ([ids[i - 1][1]] if bwd is not None else []) + right + ([ids[i + 1][1]] if fwd is not None else [])
        new[u], new[us] = lu, ru
        for x in left:
            sides[(v, x)] = 0
        for x in right:
            sides[(v, x)] = 1
    pset = set(P)
    out_rot = {}
    for v in e.vertices:
        if v in pset:
            continue
        rr = []
        for w in rot[v]:
            if w in pset:
                i = P.index(w)
                rr.append(ids[i][sides[(w, v)]])
            else:
                rr.append(w)
        out_rot[v] = rr
    for x, rr in new.items():
        out_rot[x] = [w for w in rr]
    back = {v: v for v in e.vertices if v not in pset}
    for i, v in enumerate(P):
        back[ids[i][0]] = v
        back[ids[i][1]] = v
    order = []
    for v in e.vertices:
        if v in pset:
            order += list(ids[P.index(v)])
        else:
            order.append(v)
    g = build_embedding(order, out_rot)
    a, _ = _corner(e, fo.walk, P[0])
    face = g.face_with_dart(a, ids[0][0])
    cyc = tuple(face.walk)
    want = len(F) + len(F2) + 2 * (k - 1)
    if len(cyc) != want or len(set(cyc)) != want:
        raise EmbeddingError(f"split produced an outer walk of length {len(cyc)}, expected {want}")
    fl = ft = None
    if lists is not None:
        fl = {x: frozenset(lists[back[x]]) for x in g.vertices if back[x] in lists}
    if phi is not None:
        ft = {x: phi[back[x]] for x in g.vertices if back[x] in phi}
    starts = {v: rot[v][0] for v in e.vertices if rot[v]}
    return SplitFrame(g, cyc, face.index, P, tuple(ids), back, tuple(e.vertices), fl, ft, starts)


def _dedupe_cyclic(seq: list) -> list:
    out = [x for i, x in enumerate(seq) if x != seq[i - 1]] if len(seq) > 1 else list(seq)
    if not out and seq:
        out = [seq[0]]
    return out


def unsplit(fr: SplitFrame, g: Embedding | None = None) -> Embedding:
    """Identify each u_i with u_i* and delete duplicate edges."""
    g = fr.g if g is None else g
    back = fr.back
    rot = {}
    for x in g.vertices:
        if back[x] != x:
            continue
        rot[x] = _dedupe_cyclic([back[w] for w in g.rotation[x]])
    for u, us in fr.pairs:
        v = back[u]
        rot[v] = _dedupe_cyclic([back[w] for w in list(g.rotation[u]) + list(g.rotation[us])])
    for v, r in rot.items():
        s = fr.starts.get(v)
        if s in r:
            i = r.index(s)
            rot[v] = r[i:] + r[:i]
    return build_embedding(fr.order, rot)


def unsplit_subgraph(fr: SplitFrame, K: Subgraph) -> Subgraph:
    return Subgraph.from_edges(((fr.back[a], fr.back[b]) for a, b in (tuple(x) for x in K.edges)),
                               (fr.back[v] for v in K.vertices))


# ---------------------------------------------------------------- theorem
@dataclass
class AnnulusResult:
    K: Subgraph
    psi: dict
    residual: list
    frame: Subgraph
    n: int
    r: int
    lens: LensResult
    split: SplitFrame
    checks: dict


def frame_subgraph(F, F2, P) -> Subgraph:
    return Subgraph.from_cycle(F) | Subgraph.from_cycle(F2) | Subgraph.from_edges(zip(P, P[1:]), P)


def is_two_edge_connected(K: Subgraph) -> bool:
    g = nx.Graph()
    g.add_nodes_from(K.vertices)
    g.add_edges_from(tuple(x) for x in K.edges)
    return nx.is_connected(g) and not any(True for _ in nx.bridges(g))


def annulus_color(e: Embedding, F: Sequence[Vertex], F2: Sequence[Vertex], P: Sequence[Vertex], phi: Mapping,
                  lists: Mapping) -> AnnulusResult:
    """Split along P, color the resulting lens, and map everything back to G."""
    F, F2, P = tuple(F), tuple(F2), tuple(P)
    frame = frame_subgraph(F, F2, P)
    missing = [v for v in frame.vertices if v not in phi]
    if missing:
        raise AnnulusHypothesisError(f"phi must color F, F' and P (missing {missing[:3]!r})")
    if improper_edge(e.adjacency, {v: phi[v] for v in frame.vertices}):
        raise AnnulusHypothesisError("phi is improper on the frame")
    n = 2 * (len(P) - 1) + 8
    r = radius(n)
    fr = split_frame(e, F, F2, P, lists=lists, phi={v: phi[v] for v in frame.vertices})
    lens = color_lens(fr.g, fr.cycle, fr.outer, fr.lists, fr.tau)
    K = unsplit_subgraph(fr, lens.K) | frame
    psi = {}
    for x, c in lens.psi.items():
        v = fr.back[x]
        if v in psi and psi[v] != c:
            raise ProofInvariantError("split copies received different colors", vertex=v)
        psi[v] = c
    dist = bfs_distances(e, frame.vertices)
    far = [v for v in K.vertices if dist.get(v, INF) > r * n]
    fo = next(f for f in e.faces if len(f.walk) == len(F) and set(f.walk) == set(F))
    region = set(e.vertices)
    residual = residual_components(e, region, K.vertices, lists, psi)
    checks = {
        "two_edge_connected": is_two_edge_connected(K),
        "within_ball": not far,
        "residual_thomassen": all(x.thomassen for x in residual),
        "frame_in_K": frame <= K,
        "outer_face": fo.index,
    }
    return AnnulusResult(K, psi, residual, frame, n, r, lens, fr, checks)


def engineer_psi(e: Embedding, cycle: Sequence[Vertex], outer: int, lists: Mapping, target, *, seed: int = 0,
                 budget: int = 20_000):
    """A proper L-coloring of C under which exactly the ``target`` vertices of
    Delta^{2p}(C) have reduced lists below three, or None.

    Used to build adversarial inputs; all lists inside are assumed to contain
    the colors used on C. The search gives up (None) after ``budget`` nodes.
    """
    import random

    cycle = tuple(cycle)
    d = disc(e, cycle, outer)
    _, d2p = delta_sets(e, cycle, outer, d=d)
    target = set(target)
    if not target <= d2p:
        raise ValueError("targets must lie in Delta^{2p}(C)")
    nb = cycle_neighbors(e, d)
    paths = {y: two_path(cycle, nb[y]) if len(cycle) > 3 else tuple(nb[y]) for y in d2p}
    rng = random.Random(seed)
    order = list(cycle)
    col: dict = {}
    nodes = [0]

    def ok_local() -> bool:
        for y, (a, b, c) in paths.items():
            if a in col and b in col and c in col:
                small = len(frozenset(lists[y]) - {col[a], col[b], col[c]}) < 3
                if small != (y in target):
                    return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            return False
        v = order[i]
        opts = [c for c in lists[v] if all(col.get(w) != c for w in e.adjacency[v])]
        rng.shuffle(opts)
        for c in opts:
            col[v] = c
            if ok_local() and rec(i + 1):
                return True
            del col[v]
        return False

    return dict(col) if rec(0) else None

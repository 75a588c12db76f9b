"""Fixture generators and verification suites.

Every suite turns a stream of seeded fixtures into :class:`~fivelist.io.Document`
instances, runs one check per instance and reports pass, fail or exhausted.
A failing instance yields a certificate: the instance document plus the
offending output and a ``verdict`` trailer. Re-running the check on the
parsed certificate fails again (:func:`recheck_certificate`).

Budgets are enumeration sizes, never wall-clock times.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, Mapping, Sequence

from . import generators as gen
from .annulus import (
    AnnulusHypothesisError,
    ProofInvariantError,
    annulus_color,
    color_lens,
    delta_L,
    engineer_psi,
    frame_subgraph,
    one_step,
    ring_context,
)
from .charts import (
    Chart,
    ChartError,
    NotQualifying,
    SepIndex,
    check_fw_bounds,
    cycle_intersection_decompose,
    intersection_identities,
    triangulate_preserving,
    verify_augmentation,
)
from .embedding import (
    INF,
    BudgetExceeded,
    Embedding,
    bfs_distances,
    build_embedding,
    distance,
    short_cycles,
)
from .io import Document, dump_document, dump_embedding, parse_text
from .listcolor import enumerate_colorings, is_inert, solve
from .skeleton import build_skeleton, delta_sets, is_k_triangulated, ndepth, verify_skeleton
from .thomassen import HypothesisError, extend_short_cycle, thomassen_extend

SUITES = ("thomassen", "cor13", "skeleton", "onestep", "lens", "annulus", "fwstar", "triangulate",
          "sepclass", "intersect")
COLORING_SUITES = ("thomassen", "cor13", "onestep", "lens", "annulus")
DEFAULT_COUNTS = {"thomassen": 500, "cor13": 50, "skeleton": 60, "onestep": 300, "lens": 30, "annulus": 100,
                  "fwstar": 36, "triangulate": 50, "sepclass": 24, "intersect": 30}
DEFAULT_BUDGET = 1_000_000


class SuiteError(ValueError):
    pass


# ------------------------------------------------------------- fixtures
@dataclass(frozen=True)
class FixtureSpec:
    generator: str
    params: tuple = ()  # positional size parameters
    seed: int = 0
    tags: tuple = ()

    def build(self):
        fn = GENERATORS[self.generator]
        return fn(*self.params, self.seed) if self.generator not in _UNSEEDED else fn(*self.params)

    def text(self) -> str:
        out = self.build()
        e = out if isinstance(out, Embedding) else out[0]
        return dump_embedding(e)


def gen_planar_triangulation(n: int, seed: int) -> Embedding:
    if n < 4:
        raise ValueError("a triangulation needs at least 4 vertices")
    if n == 4:
        return gen.k4()
    return gen.planar_triangulation(n, seed)


def gen_annulus(outer_len: int, depth: int, seed: int, *, max_tries: int = 50) -> tuple:
    """Triangulated rings inside an outer cycle with NDepth(C) >= depth.

    Returns (embedding, outer cycle, outer face index). Even lengths use
    periodic bands that keep every layer nonsplit; other lengths are drawn
    at random until the depth requirement is met.
    """
    if outer_len < 4 or depth < 0:
        raise ValueError("need outer_len >= 4 and depth >= 0")
    rng = random.Random(seed)
    for _ in range(max_tries):
        s = rng.randrange(1 << 30)
        try:
            if outer_len % 2 == 0 and outer_len >= 6 and depth >= 1:
                e, rings, outer = gen.deep_ring(outer_len, max(depth, 2), s)
            else:
                sizes = [outer_len] + [outer_len + rng.choice((0, 1))] * max(depth, 1) + gen._shrink(outer_len)
                e, rings, outer = gen.layered_disc(sizes, s, max_tries=200)
        except RuntimeError:
            continue
        cyc = tuple(e.faces[outer].walk)
        if ndepth(e, cyc, outer, cap=depth) >= depth:
            return e, cyc, outer
    raise ValueError(f"no annulus with outer length {outer_len} and depth {depth} found")


def gen_torus_grid(m: int, n: int) -> Embedding:
    if m < 3 or n < 3:
        raise ValueError("torus grid needs m, n >= 3")
    return gen.torus_grid(m, n)


GENERATORS: dict = {
    "planar_triangulation": gen_planar_triangulation,
    "annulus": gen_annulus,
    "torus_grid": gen_torus_grid,
    "near_triangulation": gen.near_triangulation,
    "two_hole": lambda plen, quad, seed: gen.two_hole(seed, plen, quad=quad),
    "layered_disc": lambda sizes, seed: gen.layered_disc(sizes, seed),
    "torus_gadget": gen.torus_gadget,
}
_UNSEEDED = {"torus_grid"}


# ---------------------------------------------------------------- lists
@dataclass
class ListInstance:
    lists: dict
    psi: dict = field(default_factory=dict)
    delta: frozenset = frozenset()


def gen_lists(e: Embedding, profile: str, seed: int, *, outer: int | None = None, target: int = 0,
              palette: int = 7) -> ListInstance:
    """List assignment of the given profile.

    ``thomassen``: 3-lists on the outer face, 5-lists elsewhere.
    ``uniform-k``: every list is {1..k}.
    ``adversarial-Delta_L``: 5-lists {1..5} and a coloring psi of the outer
    cycle under which exactly ``target`` vertices of Delta^{2p}(C) lose
    three colors.
    """
    rng = random.Random(seed)
    if profile.startswith("uniform-"):
        k = int(profile.split("-", 1)[1])
        return ListInstance({v: frozenset(range(1, k + 1)) for v in e.vertices})
    if profile == "thomassen":
        if outer is None:
            outer = max(range(len(e.faces)), key=lambda i: (len(e.faces[i].walk), -i))
        rim = set(e.faces[outer].walk)
        pal = range(1, palette + 1)
        return ListInstance({v: frozenset(rng.sample(pal, 3 if v in rim else 5)) for v in e.vertices})
    if profile in ("adversarial-Delta_L", "adversarial-Δ_L"):
        if outer is None:
            raise ValueError("adversarial profile needs the outer face")
        cyc = tuple(e.faces[outer].walk)
        lists = {v: frozenset(range(1, 6)) for v in e.vertices}
        d2p = sorted(delta_sets(e, cyc, outer)[1], key=e.index.__getitem__)
        if target > len(d2p):
            raise ValueError(f"target {target} exceeds |Delta^2p| = {len(d2p)}")
        for _ in range(5):
            psi = engineer_psi(e, cyc, outer, lists, rng.sample(d2p, target), seed=rng.randrange(1 << 30),
                               budget=2000)
            if psi is not None:
                got = delta_L(e, cyc, outer, lists, psi)
                return ListInstance(lists, psi, frozenset(got))
        raise ValueError(f"could not realize |Delta_L| = {target}")
    raise ValueError(f"unknown list profile {profile!r}")


# ----------------------------------------------------------- validators
def validate_coloring(e: Embedding, lists: Mapping, phi: Mapping, *, total: bool = True,
                      extends: Mapping | None = None) -> list:
    """Problems with phi, found by a direct scan of vertices and edges."""
    probs = []
    for v in e.vertices:
        if v not in phi:
            if total:
                probs.append(f"{v} uncolored")
        elif phi[v] not in lists.get(v, ()):
            probs.append(f"{v} colored {phi[v]} outside its list")
    for u, v in (tuple(x) for x in e.edges):
        if u in phi and v in phi and phi[u] == phi[v]:
            probs.append(f"edge {u}-{v} monochromatic")
    for v, c in (extends or {}).items():
        if phi.get(v) != c:
            probs.append(f"{v} should keep color {c}")
    return probs


# ------------------------------------------------------------- outcomes
@dataclass
class Outcome:
    index: int
    status: str  # pass | fail | exhausted
    detail: str = ""
    certificate: str | None = None
    path: str | None = None
    data: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    budget: int
    outcomes: list

    def count(self, status: str) -> int:
        return sum(o.status == status for o in self.outcomes)

    @property
    def failures(self) -> list:
        return [o for o in self.outcomes if o.status == "fail"]

    @property
    def status(self) -> str:
        if self.failures:
            return "FAIL"
        return "EXHAUSTED" if self.count("exhausted") else "PASS"

    @property
    def ok(self) -> bool:
        return self.status == "PASS"

    def lines(self) -> list:
        out = [f"suite={self.suite} seed={self.seed} budget={self.budget} instances={len(self.outcomes)} "
               f"pass={self.count('pass')} fail={self.count('fail')} exhausted={self.count('exhausted')}"]
        for o in self.outcomes:
            if o.status != "pass":
                where = f" certificate={o.path}" if o.path else ""
                out.append(f"{o.status.upper()} #{o.index}: {o.detail}{where}")
        out.append(f"RESULT: {self.status}")
        return out

    def to_json(self) -> dict:
        return {
            "suite": self.suite, "seed": self.seed, "budget": self.budget, "status": self.status,
            "pass": self.count("pass"), "fail": self.count("fail"), "exhausted": self.count("exhausted"),
            "outcomes": [{"index": o.index, "status": o.status, "detail": o.detail, "certificate": o.path}
                         for o in self.outcomes if o.status != "pass"],
        }


class _Fail(Exception):
    def __init__(self, msg: str, coloring: Mapping | None = None, precolor: Mapping | None = None):
        super().__init__(msg)
        self.coloring = dict(coloring) if coloring is not None else None
        self.precolor = dict(precolor) if precolor is not None else None


class _Exhausted(Exception):
    pass


# ------------------------------------------------------- instance streams
def _rng(seed: int, salt: str) -> random.Random:
    return random.Random(f"{salt}:{seed}")


def _thomassen_docs(seed: int, count: int):
    rng = _rng(seed, "thomassen")
    for _ in range(count):
        n = rng.randint(5, 14)
        e, outer = gen.near_triangulation(n, rng.randrange(1 << 30))
        li = gen_lists(e, "thomassen", rng.randrange(1 << 30), outer=outer, palette=6).lists
        walk = e.faces[outer].walk
        x, y = sorted(walk[:2], key=e.index.__getitem__)
        a = rng.choice(sorted(li[x]))
        b = rng.choice(sorted(li[y] - {a}))
        yield Document(e, lists=li, outer=outer, precolor={x: a, y: b})


def _cor13_fixture(rng: random.Random):
    while True:
        n = rng.randint(4, 12)
        e = gen_planar_triangulation(n, rng.randrange(1 << 30))
        if rng.random() < 0.5 or n == 4:
            return e, rng.randrange(len(e.faces))
        u, v = rng.choice(sorted(tuple(sorted(x, key=e.index.__getitem__)) for x in e.edges))
        rot = {w: [z for z in e.rotation[w] if {w, z} != {u, v}] for w in e.vertices}
        g = build_embedding(list(e.vertices), rot)
        quads = [f.index for f in g.faces if len(f.walk) == 4 and f.is_cycle]
        if g.genus == 0 and quads and min(g.degree(w) for w in g.vertices) >= 2:
            return g, quads[0]


def _cor13_docs(seed: int, count: int):
    rng = _rng(seed, "cor13")
    for _ in range(count):
        e, outer = _cor13_fixture(rng)
        rim = set(e.faces[outer].walk)
        li = {v: frozenset(rng.sample(range(1, 8), 3 if v in rim else 5)) for v in e.vertices}
        yield Document(e, lists=li, outer=outer)


def _skeleton_docs(seed: int, count: int):
    rng = _rng(seed, "skeleton")
    made = 0
    while made < count:
        n = (4, 5, 6)[made // 3 % 3]
        sizes = [n] + [rng.choice((n, n + 1, n + 2)) for _ in range(rng.randint(1, 3))]
        sizes += gen._shrink(sizes[-1])
        try:
            e, rings, outer = gen.layered_disc(sizes, rng.randrange(1 << 30), max_tries=300)
        except RuntimeError:
            continue
        cyc = tuple(e.faces[outer].walk)
        for r in (1, 2, 3):
            k = r * (n - 3)
            if made < count and is_k_triangulated(e, cyc, k + r, outer):
                yield Document(e, outer=outer, params={"r": r, "k": k})
                made += 1


def _ring_fixtures(rng: random.Random):
    """Discs with NDepth(C) >= 2: periodic rings, shared rings and random bands."""
    while True:
        n = rng.choice((6, 8, 10, 12))
        kind = rng.random()
        try:
            if kind < 0.3:
                e, rings, outer = gen.deep_ring(n, 2, rng.randrange(1 << 30))
            elif kind < 0.45:
                e, rings, outer = gen.shared_ring(n, rng.randint(1, 2), rng.randrange(1 << 30))
            else:
                sizes = [n, n, n - 1] + gen._shrink(n - 1)
                e, rings, outer = gen.layered_disc(sizes, rng.randrange(1 << 30), max_tries=300)
        except (RuntimeError, ValueError):
            continue
        cyc = tuple(e.faces[outer].walk)
        if ndepth(e, cyc, outer, cap=2) >= 2:
            yield e, outer


def _onestep_docs(seed: int, count: int):
    rng = _rng(seed, "onestep")
    fixtures = _ring_fixtures(rng)
    made = t = misses = 0
    while made < count:
        e, outer = next(fixtures)
        cyc = tuple(e.faces[outer].walk)
        if len(delta_sets(e, cyc, outer)[1]) < t:
            inst = None
        else:
            try:
                inst = gen_lists(e, "adversarial-Delta_L", rng.randrange(1 << 30), outer=outer, target=t)
            except ValueError:
                inst = None
        if inst is None:
            misses += 1
            if misses < 50:
                continue
        else:
            yield Document(e, lists=inst.lists, precolor=inst.psi, outer=outer, params={"t": t})
            made += 1
        t, misses = (t + 1) % 7, 0


def _full_lists(e: Embedding, rng: random.Random):
    for _ in range(100):
        li = {v: frozenset(rng.sample(range(1, 9), 5)) for v in e.vertices}
        full = solve(e, li)
        if full is not None:
            return li, full
    raise RuntimeError("no colorable 5-list assignment drawn")


def _lens_docs(seed: int, count: int):
    rng = _rng(seed, "lens")
    made = 0
    while made < count:
        n = rng.randint(4, 8)
        sizes = [n, n + rng.choice((0, 1, 2)), max(5, n - 1 + rng.choice((0, 1)))] + [5]
        try:
            e, rings, outer = gen.layered_disc(sizes, rng.randrange(1 << 30), max_tries=300)
        except RuntimeError:
            continue
        li, full = _full_lists(e, rng)
        yield Document(e, lists=li, outer=outer, precolor={v: full[v] for v in e.faces[outer].walk})
        made += 1


def _annulus_docs(seed: int, count: int):
    rng = _rng(seed, "annulus")
    made = 0
    while made < count:
        plen, quad = made % 3, bool(made // 3 % 2)
        try:
            e, F, F2, P = gen.two_hole(rng.randrange(1 << 30), plen, quad=quad)
        except RuntimeError:
            continue
        li, full = _full_lists(e, rng)
        outer = gen.outer_face_index(e, F)
        cf = gen.outer_face_index(e, F2)
        frame = frame_subgraph(F, F2, P)
        yield Document(e, lists=li, outer=outer, cfaces=[cf], ppaths={cf: tuple(P)},
                       precolor={v: full[v] for v in frame.vertices}, params={"plen": plen})
        made += 1


def fwstar_fixtures() -> list:
    out = [("torus_grid", (m, n), 0) for m in range(3, 7) for n in range(3, 7)]
    kinds = ("hub", "square", "square_hub", "diag")
    for i in range(20):
        out.append(("torus_gadget", (3 + i % 4, 3 + (i // 4) % 4, kinds[i % 4]), i))
    return out


def _fwstar_docs(seed: int, count: int):
    for name, p, s in fwstar_fixtures()[:count]:
        if name == "torus_grid":
            yield Document(gen_torus_grid(*p))
        else:
            m, n, kind = p
            yield Document(gen.torus_gadget(m, n, s + seed, kind))


def gen_marked_faces(alpha: int, k: int, seed: int, *, torus: bool = False, deletions: int = 4,
                     max_tries: int = 200) -> tuple:
    """Grid with ``k`` square faces at pairwise distance exactly alpha.

    Planar grids get a few random edge deletions away from the marked faces;
    distances are rechecked after every deletion. Returns (embedding, faces).
    """
    rng = random.Random(seed)
    side = 2 * alpha + 2 if torus else (alpha + 3) * (2 if k == 3 else 1) + 2
    for _ in range(max_tries):
        e = gen.torus_grid(side, side) if torus else gen.planar_grid(side, side + 1)
        quads = [f.index for f in e.faces if len(f.walk) == 4]
        picked = _pick_at_distance(e, quads, alpha, k, rng)
        if picked is None:
            continue
        if not torus:
            e, picked = _delete_edges(e, picked, alpha, deletions, rng)
        return e, picked
    raise ValueError(f"no {k} faces at pairwise distance {alpha}")


def _pick_at_distance(e: Embedding, quads: list, alpha: int, k: int, rng: random.Random):
    for _ in range(50):
        first = rng.choice(quads)
        dist = bfs_distances(e, e.faces[first].walk)
        ring = [f for f in quads if min(dist[v] for v in e.faces[f].walk) == alpha]
        rng.shuffle(ring)
        for f in ring:
            chosen = [first, f]
            if k == 2:
                return chosen
            d2 = bfs_distances(e, e.faces[f].walk)
            third = [h for h in ring if h != f and min(d2[v] for v in e.faces[h].walk) == alpha]
            if third:
                return chosen + [rng.choice(third)]
    return None


def _delete_edges(e: Embedding, picked: list, alpha: int, deletions: int, rng: random.Random):
    walks = [tuple(e.faces[f].walk) for f in picked]
    marked = set().union(*map(set, walks))
    for _ in range(deletions * 5):
        if deletions == 0:
            break
        u, v = rng.choice(sorted(tuple(sorted(x)) for x in e.edges))
        if u in marked or v in marked:
            continue
        rot = {w: [z for z in e.rotation[w] if {w, z} != {u, v}] for w in e.vertices}
        try:
            g = build_embedding(list(e.vertices), rot)
        except Exception:
            continue
        if g.genus != 0 or any(not f.is_cycle for f in g.faces) or len(g.faces) != len(e.faces) - 1:
            continue
        idx = [gen.outer_face_index(g, w) for w in walks]
        if all(distance(g, g.faces[a].walk, g.faces[b].walk) == alpha for a, b in combinations(idx, 2)):
            e, picked = g, idx
            deletions -= 1
    return e, picked


def _triangulate_docs(seed: int, count: int):
    rng = _rng(seed, "triangulate")
    for i in range(count):
        torus = i % 10 == 9
        alpha = 4 + (i % 5 if not torus else i % 2)
        k = 2 + (i % 3 == 2)
        e, faces = gen_marked_faces(alpha, k, rng.randrange(1 << 30), torus=torus)
        yield Document(e, cfaces=list(faces), params={"alpha": alpha})


def nested_squares(layers: int, stellated: int, seed: int) -> Embedding:
    """Nested 4-cycles with a hub, plus ``stellated`` band quads given a centre vertex."""
    rng = random.Random(seed)
    e = gen.nested_cycles([4] * layers, hub=True)
    quads = [f for f in e.faces if len(f.walk) == 4 and not set(f.walk) <= set(range(4))]
    rot = {v: list(e.rotation[v]) for v in e.vertices}
    nxt = len(e.vertices)
    for f in rng.sample(quads, min(stellated, len(quads))):
        gen.stellate(rot, f.walk, nxt)
        nxt += 1
    return build_embedding(sorted(rot), rot)


def _sepclass_docs(seed: int, count: int):
    rng = _rng(seed, "sepclass")
    for i in range(count):
        e = nested_squares(3 + i % 3, i % 4, rng.randrange(1 << 30))
        outer = gen.outer_face_index(e, range(4))
        inner = [f.index for f in e.faces if f.index != outer]
        marked = sorted(rng.sample(inner, rng.randint(1, 4)))
        yield Document(e, root=outer, cfaces=[outer] + marked,
                       params={"delta": Fraction(rng.randint(1, 4)), "gamma": Fraction(rng.randint(1, 3))})


def _intersect_docs(seed: int, count: int):
    for i in range(count):
        yield Document(gen.planar_triangulation(12, seed * 1000 + i), root=0)


STREAMS: dict = {
    "thomassen": _thomassen_docs, "cor13": _cor13_docs, "skeleton": _skeleton_docs, "onestep": _onestep_docs,
    "lens": _lens_docs, "annulus": _annulus_docs, "fwstar": _fwstar_docs, "triangulate": _triangulate_docs,
    "sepclass": _sepclass_docs, "intersect": _intersect_docs,
}


def instances(suite: str, seed: int = 0, count: int | None = None) -> list:
    if suite not in STREAMS:
        raise SuiteError(f"unknown suite {suite!r}")
    return list(STREAMS[suite](seed, DEFAULT_COUNTS[suite] if count is None else count))


# --------------------------------------------------------------- checks
def _mutate(lists: Mapping, v) -> dict:
    out = dict(lists)
    out[v] = frozenset(c + 100 for c in lists[v])
    return out


def _with_fault(doc: Document, run: Callable) -> tuple:
    """Run once, then again with the list of one freshly colored vertex shifted."""
    col = run(doc.lists)
    victims = [v for v in doc.e.vertices if v in col and v not in doc.precolor]
    if not victims:
        return col, doc.lists
    return run(_mutate(doc.lists, victims[0])), doc.lists


def _check_coloring(doc: Document, col: Mapping, *, total: bool) -> None:
    probs = validate_coloring(doc.e, doc.lists, col, total=total, extends=doc.precolor)
    if probs:
        raise _Fail("invalid coloring: " + "; ".join(probs[:3]), coloring=col)


def _inert(z, col, e, lists, budget):
    try:
        rep = is_inert(z, col, e, lists, budget=budget)
    except BudgetExceeded:
        return None
    return rep


def _run_thomassen(doc: Document, budget: int, inject: bool) -> dict:
    xy = tuple(doc.precolor)

    def run(lists):
        return thomassen_extend(doc.e, doc.outer, lists, xy=xy, precolor=doc.precolor)

    col = doc.coloring or (_with_fault(doc, run)[0] if inject else run(doc.lists))
    _check_coloring(doc, col, total=True)
    return {}


def _run_cor13(doc: Document, budget: int, inject: bool) -> dict:
    e = doc.e
    walk = e.faces[doc.outer].walk
    if doc.precolor:
        phis = [doc.precolor]
    else:
        cadj = {v: frozenset(w for w in e.adjacency[v] if w in walk) for v in walk}
        phis = []
        for phi in enumerate_colorings(cadj, {v: doc.lists[v] for v in walk}):
            phis.append(phi)
            if len(phis) > budget:
                raise _Exhausted(f"more than {budget} boundary colorings")
    for phi in phis:
        sub = replace(doc, precolor=dict(phi))
        oracle = solve(e, doc.lists, dict(phi))
        if doc.coloring:
            col = doc.coloring
        else:
            def run(lists, phi=phi):
                return extend_short_cycle(e, doc.outer, phi, lists)
            try:
                col = _with_fault(sub, run)[0] if inject else run(doc.lists)
            except (HypothesisError, ValueError) as ex:
                col = None
                if oracle is not None:
                    raise _Fail(f"extension refused ({ex}) but the oracle colors the graph", precolor=phi)
        if (col is None) != (oracle is None):
            raise _Fail("extension and oracle disagree on satisfiability", precolor=phi)
        if col is not None:
            probs = validate_coloring(e, doc.lists, col, extends=phi)
            if probs:
                raise _Fail("invalid coloring: " + "; ".join(probs[:3]), coloring=col, precolor=phi)
    return {"colorings": len(phis)}


def _run_skeleton(doc: Document, budget: int, inject: bool) -> dict:
    cyc = tuple(doc.e.faces[doc.outer].walk)
    r, k = doc.params["r"], doc.params["k"]
    res = build_skeleton(doc.e, cyc, k, r, doc.outer)
    rep = verify_skeleton(doc.e, cyc, res.K, k, r, doc.outer)
    if not rep.ok:
        raise _Fail("skeleton check: " + "; ".join(map(str, rep.problems[:3])))
    return {"faces": len(res.faces)}


def _run_onestep(doc: Document, budget: int, inject: bool) -> dict:
    e, cyc = doc.e, tuple(doc.e.faces[doc.outer].walk)

    def run(lists):
        ctx = ring_context(e, cyc, doc.outer, lists, doc.precolor)
        return one_step(ctx)

    if doc.coloring:
        col = doc.coloring
        _check_coloring(doc, col, total=False)
        return {}
    holder = {}

    def run_col(lists):
        holder["res"] = run(lists)
        return holder["res"].psi

    col = _with_fault(doc, run_col)[0] if inject else run_col(doc.lists)
    res = holder["res"]
    _check_coloring(doc, col, total=False)
    before, after = len(res.delta_before), len(res.delta_after)
    if after > -(-before // 2):
        raise _Fail(f"halving fails: {before} -> {after}", coloring=col)
    z = set(res.w1.vertices) - set(col)
    rep = _inert(z, col, e, doc.lists, budget)
    if rep is None:
        raise _Exhausted("inertness enumeration over budget")
    if not rep.inert:
        raise _Fail("uncolored part of w^1(C) is not inert", coloring=col)
    return {"before": before, "after": after}


def _run_lens(doc: Document, budget: int, inject: bool) -> dict:
    e, cyc = doc.e, tuple(doc.e.faces[doc.outer].walk)
    if doc.coloring:
        _check_coloring(doc, doc.coloring, total=False)
        return {}
    holder = {}

    def run(lists):
        holder["res"] = color_lens(e, cyc, doc.outer, lists, doc.precolor)
        return holder["res"].psi

    col = _with_fault(doc, run)[0] if inject else run(doc.lists)
    res = holder["res"]
    _check_coloring(doc, col, total=False)
    dist = bfs_distances(e, cyc)
    far = [v for v in res.K.vertices if dist.get(v, INF) > res.r * res.n]
    if far:
        raise _Fail(f"K leaves B_rn(C): {far[:3]}", coloring=col)
    if not all(x.thomassen for x in res.residual):
        raise _Fail("a residual face is not a Thomassen face", coloring=col)
    rep = _inert(set(res.K.vertices) - set(col), col, e, doc.lists, budget)
    if rep is None:
        raise _Exhausted("inertness enumeration over budget")
    if not rep.inert:
        raise _Fail("uncolored part of K is not inert", coloring=col)
    return {}


def _run_annulus(doc: Document, budget: int, inject: bool) -> dict:
    e = doc.e
    if not doc.cfaces:
        raise AnnulusHypothesisError("second face F' missing")
    F = tuple(e.faces[doc.outer].walk)
    F2 = tuple(e.faces[doc.cfaces[0]].walk)
    P = tuple(doc.ppaths.get(doc.cfaces[0], ()))
    if doc.coloring:
        _check_coloring(doc, doc.coloring, total=False)
        return {}
    holder = {}

    def run(lists):
        holder["res"] = annulus_color(e, F, F2, P, doc.precolor, lists)
        return holder["res"].psi

    col = _with_fault(doc, run)[0] if inject else run(doc.lists)
    res = holder["res"]
    _check_coloring(doc, col, total=False)
    bad = [k for k in ("two_edge_connected", "within_ball", "residual_thomassen", "frame_in_K") if not res.checks[k]]
    if bad:
        raise _Fail("annulus checks failed: " + ", ".join(bad), coloring=col)
    rep = _inert(set(res.K.vertices) - set(col), col, e, doc.lists, budget)
    if rep is None:
        raise _Exhausted("inertness enumeration over budget")
    if not rep.inert:
        raise _Fail("uncolored part of K is not inert", coloring=col)
    return {"n": res.n, "r": res.r}


def _run_fwstar(doc: Document, budget: int, inject: bool) -> dict:
    b = check_fw_bounds(doc.e)
    if not b.ok:
        raise _Fail(f"fw={b.fw} fw*={b.fw_star} sandwich={b.sandwich} sides={b.sides}")
    return {"fw": b.fw, "fw_star": b.fw_star}


def _run_triangulate(doc: Document, budget: int, inject: bool) -> dict:
    alpha = doc.params["alpha"]
    aug = triangulate_preserving(doc.e, doc.cfaces, alpha)
    rep = verify_augmentation(doc.e, doc.cfaces, alpha, aug)
    if not rep.ok:
        raise _Fail(f"augmentation: fw_equal={rep.fw_equal} distances_ok={rep.distances_ok} "
                    f"faces_intact={rep.faces_intact} chord_triangulated={rep.chord_triangulated}")
    return {"added": len(aug.added)}


def _run_sepclass(doc: Document, budget: int, inject: bool) -> dict:
    chart = Chart(doc.e, doc.cfaces, doc.root, {})
    delta, gamma = doc.params["delta"], doc.params["gamma"]
    diffs = compare_sep(chart, delta, gamma)
    if diffs:
        raise _Fail("Sep classification differs from the naive evaluator: " + "; ".join(diffs[:3]))
    return {}


def _run_intersect(doc: Document, budget: int, inject: bool) -> dict:
    chart = Chart(doc.e, [doc.root], doc.root, {})
    stats = intersection_stats(chart)
    if stats["violations"]:
        c0, c1, which = stats["violations"][0]
        raise _Fail(f"{len(stats['violations'])} of {stats['pairs']} pairs violate identities; "
                    f"first {c0} x {c1}: {which}")
    return {"pairs": stats["pairs"]}


CHECKS: dict = {
    "thomassen": _run_thomassen, "cor13": _run_cor13, "skeleton": _run_skeleton, "onestep": _run_onestep,
    "lens": _run_lens, "annulus": _run_annulus, "fwstar": _run_fwstar, "triangulate": _run_triangulate,
    "sepclass": _run_sepclass, "intersect": _run_intersect,
}


def intersection_stats(chart: Chart) -> dict:
    """Qualifying ordered pairs of <=4-cycles and the identities they violate."""
    cycles = short_cycles(chart.e, 4)
    pairs = 0
    bad = []
    for c0 in cycles:
        for c1 in cycles:
            if c0 == c1:
                continue
            try:
                x = cycle_intersection_decompose(chart, c0, c1)
            except (NotQualifying, ChartError):
                continue
            pairs += 1
            ids = intersection_identities(x, len(c0), len(c1))
            failed = sorted(k for k, v in ids.items() if not v)
            if failed:
                bad.append((c0, c1, ",".join(failed)))
    return {"pairs": pairs, "violations": bad}


def check_instance(suite: str, doc: Document, budget: int = DEFAULT_BUDGET, *, inject: bool = False,
                   index: int = 0) -> Outcome:
    if suite not in CHECKS:
        raise SuiteError(f"unknown suite {suite!r}")
    try:
        data = CHECKS[suite](doc, budget, inject)
    except _Exhausted as ex:
        return Outcome(index, "exhausted", str(ex))
    except _Fail as ex:
        return _failure(suite, doc, index, str(ex), ex.coloring, ex.precolor)
    except (HypothesisError, AnnulusHypothesisError, ProofInvariantError, ChartError, ValueError,
            RuntimeError, AssertionError, KeyError) as ex:
        if isinstance(ex, BudgetExceeded):
            return Outcome(index, "exhausted", str(ex))
        return _failure(suite, doc, index, f"{type(ex).__name__}: {ex}", None, None)
    return Outcome(index, "pass", data=data)


def _failure(suite, doc, index, msg, coloring, precolor) -> Outcome:
    cert = replace(doc, verdict=f"suite={suite} FAIL {msg}")
    if coloring is not None:
        cert = replace(cert, coloring=dict(coloring))
    if precolor is not None:
        cert = replace(cert, precolor=dict(precolor))
    return Outcome(index, "fail", msg, dump_document(cert))


def recheck_certificate(text: str, budget: int = DEFAULT_BUDGET) -> Outcome:
    """Parse a certificate and run its suite's check again."""
    doc = parse_text(text)
    if not doc.verdict or not doc.verdict.startswith("suite="):
        raise SuiteError("certificate has no suite verdict")
    suite = doc.verdict.split()[0].split("=", 1)[1]
    return check_instance(suite, replace(doc, verdict=None), budget)


def _one(args) -> Outcome:
    suite, text, budget, inject, index = args
    return check_instance(suite, parse_text(text), budget, inject=inject, index=index)


def run_suite(suite: str, budget: int = DEFAULT_BUDGET, seed: int = 0, *, count: int | None = None,
              inject_bug: bool = False, workers: int = 1, out_dir: str | Path | None = None) -> SuiteReport:
    """Run a verification suite; certificates go to ``out_dir`` when given.

    With ``inject_bug`` the colorer of each instance sees one list shifted
    by 100 colors while the validator keeps the original lists. Instances
    whose output colors no vertex beyond the precoloring are unaffected.
    """
    if suite not in SUITES:
        raise SuiteError(f"unknown suite {suite!r}")
    if inject_bug and suite not in COLORING_SUITES:
        raise SuiteError(f"fault injection needs a coloring suite, not {suite!r}")
    docs = instances(suite, seed, count)
    jobs = [(suite, dump_document(d), budget, inject_bug, i) for i, d in enumerate(docs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_one, jobs, chunksize=4))
    else:
        outcomes = [_one(j) for j in jobs]
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for o in outcomes:
            if o.certificate:
                p = out / f"cert-{suite}-{seed}-{o.index}.txt"
                p.write_text(o.certificate, encoding="utf-8")
                o.path = str(p)
    return SuiteReport(suite, seed, budget, outcomes)


# ---------------------------------------------- naive Sep classification
class NaiveSep:
    """Definitional Sep(G) classification by brute force.

    Cycles are found by trying vertex tuples, sides by flood-filling the
    faces from the root face without crossing the cycle, and distances by
    plain BFS. Only meant for small fixtures.
    """

    def __init__(self, e: Embedding, designated: Sequence[int], root: int):
        self.e = e
        self.designated = list(designated)
        self.root = root
        self.nbr = {v: set(e.adjacency[v]) for v in e.vertices}
        self.sep = [c for c in self._cycles() if self._separating(c)]

    def _cycles(self) -> list:
        vs = list(self.e.vertices)
        seen, out = set(), []
        for k in (3, 4):
            for combo in combinations(vs, k):
                for perm in _cyclic_orders(combo):
                    if all(perm[(i + 1) % k] in self.nbr[perm[i]] for i in range(k)):
                        key = _edge_key(perm)
                        if key not in seen:
                            seen.add(key)
                            out.append(key)
        return out

    def _int_faces(self, key: frozenset) -> frozenset:
        e = self.e
        reach, stack = {self.root}, [self.root]
        while stack:
            f = stack.pop()
            for d in e.faces[f].darts:
                if frozenset((e.tail(d), e.head(d))) in key:
                    continue
                g = e.face_of(d ^ 1)
                if g not in reach:
                    reach.add(g)
                    stack.append(g)
        return frozenset(range(len(e.faces))) - reach

    def _closure(self, faces) -> tuple:
        vs, es = set(), set()
        for f in faces:
            for d in self.e.faces[f].darts:
                vs.add(self.e.tail(d))
                es.add(frozenset((self.e.tail(d), self.e.head(d))))
        return vs, es

    def _separating(self, key: frozenset) -> bool:
        inner = self._int_faces(key)
        if not inner:
            return False
        cyc = set().union(*key)
        vi, _ = self._closure(inner)
        vo, _ = self._closure(set(range(len(self.e.faces))) - inner)
        return bool(vi - cyc) and bool(vo - cyc) and not (vi - cyc) & (vo - cyc)

    def interior(self, key) -> tuple:
        return self._closure(self._int_faces(key))

    def contains(self, key, sub_vs, sub_es) -> bool:
        vs, es = self.interior(key)
        return set(sub_vs) <= vs and set(sub_es) <= es

    def face_in(self, f, vs, es) -> bool:
        fv, fe = self._closure([f])
        return fv <= vs and fe <= es

    def descendants(self, key) -> set:
        return {d for d in self.sep if d != key and self.contains(key, set().union(*d), d)}

    def immediate(self, key) -> set:
        ds = self.descendants(key)
        return {d for d in ds if not any(o != d and d in self.descendants(o) for o in ds)}

    def color(self, key) -> str:
        vs, es = self.interior(key)
        for f in self.designated:
            if self.face_in(f, vs, es):
                fv, fe = self._closure([f])
                if not any(self.contains(o, fv, fe) for o in self.descendants(key)):
                    return "red"
        return "blue"

    def bfs(self, src) -> dict:
        dist = {v: 0 for v in src}
        frontier = list(src)
        while frontier:
            nxt = []
            for u in frontier:
                for w in self.nbr[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def dist(self, a, b) -> float:
        d = self.bfs(set(a))
        return min((d.get(v, INF) for v in b), default=INF)

    def close(self, key, delta, gamma) -> bool:
        cv = set().union(*key)
        if self.color(key) == "red":
            vs, es = self.interior(key)
            for o in self.immediate(key):
                ovs, oes = self.interior(o)
                ocyc = set().union(*o)
                vs = {v for v in vs if v not in ovs or v in ocyc}
                es = {x for x in es if x not in oes or x in o}
            return any(self.face_in(f, vs, es) and self.dist(cv, self._closure([f])[0]) < delta
                       for f in self.designated)
        return any(self.color(o) == "red" and self.dist(cv, set().union(*o)) < gamma for o in self.descendants(key))

    def sim(self, a, b, delta, gamma) -> bool:
        va, ea = self.interior(a)
        vb, eb = self.interior(b)
        vs, es = va & vb, ea & eb
        for f in self.designated:
            if self.face_in(f, vs, es):
                fv = self._closure([f])[0]
                if self.dist(fv, set().union(*a)) <= delta + gamma and self.dist(fv, set().union(*b)) <= delta + gamma:
                    return True
        return False

    def classes(self, members, delta, gamma) -> set:
        members = list(members)
        parent = {m: m for m in members}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in combinations(members, 2):
            if self.sim(a, b, delta, gamma):
                parent[find(a)] = find(b)
        groups: dict = {}
        for m in members:
            groups.setdefault(find(m), set()).add(m)
        return {frozenset(g) for g in groups.values()}


def _cyclic_orders(combo):
    first, rest = combo[0], combo[1:]
    from itertools import permutations
    for p in permutations(rest):
        yield (first,) + p


def _edge_key(cycle) -> frozenset:
    k = len(cycle)
    return frozenset(frozenset((cycle[i], cycle[(i + 1) % k])) for i in range(k))


def compare_sep(chart: Chart, delta, gamma) -> list:
    """Differences between :class:`SepIndex` and :class:`NaiveSep` on one chart."""
    idx = SepIndex(chart)
    naive = NaiveSep(chart.e, chart.faces, chart.root)
    key = {c: _edge_key(c) for c in idx.sep}
    diffs = []
    if set(key.values()) != set(naive.sep):
        return [f"Sep(G) has {len(idx.sep)} cycles, naive finds {len(naive.sep)}"]
    for c in idx.sep:
        k = key[c]
        checks = [
            ("descendants", {key[d] for d in idx.descendants(c)}, naive.descendants(k)),
            ("immediate", {key[d] for d in idx.immediate_descendants(c)}, naive.immediate(k)),
            ("color", idx.color(c), naive.color(k)),
            ("close", idx.is_close(c, delta, gamma), naive.close(k, delta, gamma)),
        ]
        for name, a, b in checks:
            if a != b:
                diffs.append(f"{name} of {c}: {a!r} vs {b!r}")
    for c0, c1 in combinations(idx.sep, 2):
        a, b = idx.sim(c0, c1, delta, gamma), naive.sim(key[c0], key[c1], delta, gamma)
        if a != b:
            diffs.append(f"sim {c0} {c1}: {a} vs {b}")
    for c in idx.sep:
        imm = idx.immediate_descendants(c)
        if not imm:
            continue
        try:
            got = {frozenset(key[x] for x in cl) for cl in idx.sim_classes(imm, delta, gamma)}
        except ChartError:
            continue
        want = naive.classes([key[x] for x in imm], delta, gamma)
        if got != want:
            diffs.append(f"~ classes below {c} differ")
    return diffs

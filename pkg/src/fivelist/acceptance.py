"""The ten acceptance criteria as callable checks.

Each check returns a :class:`Verdict`; ``line()`` is the one-line summary
printed by the acceptance test and by ``scripts/run_acceptance.py``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import generators as gen
from .annulus import split_frame, unsplit
from .harness import DEFAULT_BUDGET, SuiteReport, instances, run_suite


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    workers: int = 1
    thomassen_seconds: float = 60.0
    annulus_certified: float = 0.95
    roundtrip_fixtures: int = 100


@dataclass
class Verdict:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"criterion {self.number:>2} {self.name:<12} {'PASS' if self.ok else 'FAIL'}  {self.detail}"


def _suite(cfg: AcceptanceConfig, name: str) -> tuple:
    t = time.perf_counter()
    rep = run_suite(name, cfg.budget, cfg.seed, workers=cfg.workers)
    return rep, time.perf_counter() - t


def _counts(rep: SuiteReport) -> str:
    return (f"{rep.count('pass')}/{len(rep.outcomes)} pass, {rep.count('fail')} fail, "
            f"{rep.count('exhausted')} exhausted")


def _first_failure(rep: SuiteReport) -> str:
    return f"; first: #{rep.failures[0].index} {rep.failures[0].detail}" if rep.failures else ""


def c1_thomassen(cfg: AcceptanceConfig) -> Verdict:
    docs = instances("thomassen", cfg.seed)
    small = all(len(d.e.vertices) <= 14 for d in docs)
    rep, s = _suite(cfg, "thomassen")
    ok = small and rep.count("pass") == len(rep.outcomes) == 500 and s <= cfg.thomassen_seconds
    return Verdict(1, "thomassen", ok, f"{_counts(rep)} in {s:.1f}s (limit {cfg.thomassen_seconds:.0f}s)"
                   + _first_failure(rep), s)


def c2_cor13(cfg: AcceptanceConfig) -> Verdict:
    docs = instances("cor13", cfg.seed)
    shape = all(len(d.e.vertices) <= 12 and len(d.e.faces[d.outer].walk) <= 4 for d in docs)
    rep, s = _suite(cfg, "cor13")
    ok = shape and rep.count("pass") == len(rep.outcomes) == 50
    return Verdict(2, "cor13", ok, f"{_counts(rep)}, 0 oracle disagreements required" + _first_failure(rep), s)


def c3_onestep(cfg: AcceptanceConfig) -> Verdict:
    docs = instances("onestep", cfg.seed)
    ts = sorted({d.params["t"] for d in docs})
    rep, s = _suite(cfg, "onestep")
    ok = not rep.failures and len(rep.outcomes) == 300 and ts == list(range(7))
    return Verdict(3, "onestep", ok, f"{_counts(rep)}, targets |Delta_L| in {ts}" + _first_failure(rep), s)


def c4_skeleton(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "skeleton")
    ok = rep.ok
    return Verdict(4, "skeleton", ok, _counts(rep) + _first_failure(rep), s)


def c5_annulus(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "annulus")
    n = len(rep.outcomes)
    cert = rep.count("pass") / n if n else 0.0
    ok = not rep.failures and n == 100 and cert >= cfg.annulus_certified
    return Verdict(5, "annulus", ok, f"{_counts(rep)}, certified {cert:.0%} (need {cfg.annulus_certified:.0%})"
                   + _first_failure(rep), s)


def c6_fwstar(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "fwstar")
    return Verdict(6, "fwstar", rep.ok and len(rep.outcomes) == 36, _counts(rep) + _first_failure(rep), s)


def c7_triangulate(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "triangulate")
    return Verdict(7, "triangulate", rep.ok and len(rep.outcomes) == 50, _counts(rep) + _first_failure(rep), s)


def c8_intersect(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "intersect")
    return Verdict(8, "intersect", rep.ok and len(rep.outcomes) == 30, _counts(rep) + _first_failure(rep), s)


def c9_sepclass(cfg: AcceptanceConfig) -> Verdict:
    rep, s = _suite(cfg, "sepclass")
    return Verdict(9, "sepclass", rep.ok, _counts(rep) + _first_failure(rep), s)


def c10_roundtrip(cfg: AcceptanceConfig) -> Verdict:
    t = time.perf_counter()
    done = bad = 0
    seed = cfg.seed * 100_000
    while done < cfg.roundtrip_fixtures:
        plen = done % 3
        try:
            e, F, F2, P = gen.two_hole(seed, plen, quad=bool(done // 3 % 2))
        except RuntimeError:
            seed += 1
            continue
        seed += 1
        back = unsplit(split_frame(e, F, F2, P))
        same = list(back.vertices) == list(e.vertices) and all(
            list(back.rotation[v]) == list(e.rotation[v]) for v in e.vertices)
        bad += not same
        done += 1
    s = time.perf_counter() - t
    return Verdict(10, "roundtrip", bad == 0, f"{done - bad}/{done} rotation systems identical", s)


CRITERIA = (c1_thomassen, c2_cor13, c3_onestep, c4_skeleton, c5_annulus, c6_fwstar, c7_triangulate,
            c8_intersect, c9_sepclass, c10_roundtrip)


def run_all(cfg: AcceptanceConfig | None = None) -> list:
    cfg = cfg or AcceptanceConfig()
    return [c(cfg) for c in CRITERIA]

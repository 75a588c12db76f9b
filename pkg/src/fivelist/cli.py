"""Command-line front end: ``fivelist analyze|color|verify``.

Exit codes: 0 success, 1 no coloring or a counterexample, 2 parse or usage
error, 3 hypothesis failure, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .annulus import AnnulusHypothesisError, annulus_color, color_lens
from .charts import TilingParams, fw_star
from .embedding import (
    BudgetExceeded,
    EmbeddingError,
    edge_width,
    face_width,
    is_short_inseparable,
    separating_cycles,
)
from .harness import DEFAULT_BUDGET, SUITES, SuiteError, run_suite
from .io import ParseError, dump_coloring, load
from .listcolor import ColoringError, solve
from .thomassen import HypothesisError, extend_short_cycle, thomassen_extend

EXIT_OK, EXIT_NONE, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_BUDGET = 0, 1, 2, 3, 4
MODES = ("oracle", "thomassen", "cor13", "lens", "annulus")


class HypothesisFailure(Exception):
    pass


class _Abort(Exception):
    def __init__(self, code: int):
        super().__init__(code)
        self.code = code


def _num(x) -> str:
    if x == float("inf"):
        return "inf"
    return str(int(x)) if float(x).is_integer() else str(x)


def parse_params(text: str | None) -> TilingParams | None:
    if not text:
        return None
    vals = {}
    for part in text.split(","):
        k, eq, v = part.partition("=")
        k = k.strip()
        if not eq or k not in ("beta", "gamma", "g"):
            raise ValueError(f"bad --params entry {part!r}")
        vals[k] = int(v) if k == "g" else Fraction(v.strip())
    return TilingParams(vals.get("g", 0), float(vals.get("beta", 2)), float(vals.get("gamma", 1)))


def analyze(doc, budget: int, params: TilingParams | None) -> dict:
    e = doc.e
    try:
        fws = _num(fw_star(e, budget=budget))
    except BudgetExceeded:
        fws = "budget"
    sep = separating_cycles(e, 4)
    rep = {
        "V": len(e.vertices), "E": e.num_edges, "F": len(e.faces), "g": e.genus,
        "ew": _num(edge_width(e)), "fw": _num(face_width(e)), "fw*": fws, "sep4": len(sep),
        "short-inseparable": "yes" if is_short_inseparable(e) else "no",
        "faces": [{"index": f.index, "length": len(f.walk), "cycle": f.is_cycle, "walk": list(f.walk)}
                  for f in e.faces],
    }
    if params is not None:
        p = TilingParams(e.genus, params.beta, params.gamma)
        rep["params"] = {"beta": p.beta, "gamma": p.gamma, "delta": round(p.delta, 6), "alpha": round(p.alpha, 6)}
    return rep


def _analyze_lines(rep: dict) -> list:
    head = " ".join(f"{k}={rep[k]}" for k in ("V", "E", "F", "g", "ew", "fw", "fw*", "sep4", "short-inseparable"))
    out = [head]
    if "params" in rep:
        out.append(" ".join(f"{k}={v}" for k, v in rep["params"].items()))
    for f in rep["faces"]:
        out.append(f"face {f['index']}: length={f['length']} cycle={'yes' if f['cycle'] else 'no'} "
                   f"walk={' '.join(map(str, f['walk']))}")
    return out


def _face_arg(doc, value, fallback, what: str) -> int:
    f = value if value is not None else fallback
    if f is None:
        raise HypothesisFailure(f"{what} face not given")
    if not 0 <= f < len(doc.e.faces):
        raise HypothesisFailure(f"{what} face {f} out of range")
    return f


def _vertex_list(text: str | None) -> list | None:
    if text is None:
        return None
    from .io import vid
    return [vid(t) for t in text.replace(",", " ").split()]


def color(doc, args) -> dict | None:
    e, lists = doc.e, doc.lists
    mode = args.mode
    if mode == "oracle":
        return solve(e, {v: lists.get(v, frozenset()) for v in e.vertices}, dict(doc.precolor))
    outer = _face_arg(doc, args.outer, doc.outer, "outer")
    walk = tuple(e.faces[outer].walk)
    if mode == "thomassen":
        xy = _vertex_list(args.xy)
        if xy is None and len(doc.precolor) == 2:
            xy = list(doc.precolor)
        return thomassen_extend(e, outer, lists, xy=tuple(xy) if xy else None, precolor=doc.precolor)
    if mode == "cor13":
        return extend_short_cycle(e, outer, doc.precolor, lists)
    if mode == "lens":
        return color_lens(e, walk, outer, lists, doc.precolor).psi
    inner = _face_arg(doc, args.inner, doc.cfaces[0] if doc.cfaces else None, "second (F')")
    path = _vertex_list(args.path)
    if path is None:
        path = doc.ppaths.get(inner)
    if not path:
        raise HypothesisFailure("path P from F to F' not given")
    return annulus_color(e, walk, tuple(e.faces[inner].walk), tuple(path), doc.precolor, lists).psi


def _load(path: str):
    try:
        return load(path)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        raise _Abort(EXIT_PARSE) from None
    except OSError as ex:
        print(f"cannot read {path}: {ex}", file=sys.stderr)
        raise _Abort(EXIT_PARSE) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    doc = _load(args.file)
    try:
        params = parse_params(args.params)
    except ValueError as ex:
        print(ex, file=sys.stderr)
        return EXIT_PARSE
    rep = analyze(doc, args.budget, params)
    text = json.dumps(rep, indent=2) + "\n" if args.json else "\n".join(_analyze_lines(rep)) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_color(args) -> int:
    doc = _load(args.file)
    try:
        col = color(doc, args)
    except (HypothesisFailure, HypothesisError, AnnulusHypothesisError, ColoringError, EmbeddingError) as ex:
        print(f"hypothesis failure: {ex}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BudgetExceeded as ex:
        print(f"budget exhausted: {ex}", file=sys.stderr)
        return EXIT_BUDGET
    if col is None:
        _emit(json.dumps({"result": "NONE"}) + "\n" if args.json else "NONE\n", args.out)
        return EXIT_NONE
    if args.json:
        _emit(json.dumps({"result": "ok", "coloring": {str(v): col[v] for v in doc.e.vertices if v in col}}) + "\n",
              args.out)
    else:
        _emit(dump_coloring(doc.e, col), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        rep = run_suite(args.suite, args.budget, args.seed, count=args.count, inject_bug=args.inject_bug,
                        workers=args.workers, out_dir=args.out)
    except SuiteError as ex:
        print(ex, file=sys.stderr)
        return EXIT_PARSE
    print(json.dumps(rep.to_json(), indent=2) if args.json else "\n".join(rep.lines()))
    if rep.failures:
        return EXIT_NONE
    return EXIT_BUDGET if rep.count("exhausted") else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fivelist", description="Embedded graphs and 5-list-coloring tools.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="report genus, widths and separating short cycles")
    a.add_argument("file")
    a.add_argument("--budget", type=int, default=50_000_000, help="step budget for fw*")
    a.add_argument("--params", help="beta=<r>,gamma=<r>: also print delta and alpha")
    a.add_argument("--out")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("color", help="list-color an instance")
    c.add_argument("file")
    c.add_argument("--mode", choices=MODES, default="oracle")
    c.add_argument("--outer", type=int, help="outer face index (default: the file's 'outer')")
    c.add_argument("--inner", type=int, help="second face F' for annulus mode")
    c.add_argument("--path", help="F-F' path for annulus mode, vertex ids separated by commas")
    c.add_argument("--xy", help="precolored outer edge for thomassen mode, as x,y")
    c.add_argument("--out")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_color)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget per instance")
    v.add_argument("--count", type=int, help=f"number of instances (suites: {', '.join(SUITES)})")
    v.add_argument("--inject-bug", action="store_true", help="mutate one list seen by the colorer")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out", default="certificates", help="directory for counterexample certificates")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Abort as ex:
        return ex.code


if __name__ == "__main__":
    sys.exit(main())

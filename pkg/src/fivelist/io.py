"""Text and JSON formats for embeddings, lists, charts, colorings and certificates.

Text format, one statement per line, ``#`` starts a comment::

    vertex <id>
    rot <id>: <id1> <id2> ...          cyclic order of neighbours
    face-check <count>
    list <id>: <c1> <c2> ...
    precolor <id> <c>
    outer <faceIndex>                  designated outer face (coloring modes)
    cface <faceIndex>
    root <faceIndex>
    ppath <faceIndex>: <v1> <v2> ...
    params alpha=<int> k=<int> beta=<rat> gamma=<rat>
                                       (also r, t, plen as ints and delta as a rational)
    color <id> <c>
    verdict <text>                     certificate trailer
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .embedding import Embedding, EmbeddingError, build_embedding


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


_INT = re.compile(r"-?\d+")


def vid(tok: str):
    return int(tok) if _INT.fullmatch(tok) else tok


@dataclass
class Document:
    e: Embedding
    lists: dict = field(default_factory=dict)
    precolor: dict = field(default_factory=dict)
    outer: int | None = None
    cfaces: list = field(default_factory=list)
    root: int | None = None
    ppaths: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    coloring: dict = field(default_factory=dict)
    verdict: str | None = None


INT_PARAMS = ("alpha", "k", "r", "t", "plen")
RAT_PARAMS = ("beta", "gamma", "delta")
PARAM_ORDER = INT_PARAMS + RAT_PARAMS


def _param(key: str, val: str, line: int):
    try:
        if key in INT_PARAMS:
            return int(val)
        return Fraction(val)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, f"bad value for {key}: {val!r}") from None


def _ints(toks, line: int, what: str) -> list:
    out = []
    for t in toks:
        if not _INT.fullmatch(t):
            raise ParseError(line, f"{what} must be integers, got {t!r}")
        out.append(int(t))
    return out


def parse_text(text: str) -> Document:
    declared: dict = {}
    rot: dict = {}
    rot_line: dict = {}
    face_check = None
    raw = dict(lists={}, precolor={}, outer=None, cfaces=[], root=None, ppaths={}, params={}, coloring={}, verdict=None)
    refs = []  # (line, vertex) references to check after parsing
    for no, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        head, _, rest = body.partition(" ")
        rest = rest.strip()
        if head == "vertex":
            toks = rest.split()
            if len(toks) != 1:
                raise ParseError(no, "expected 'vertex <id>'")
            v = vid(toks[0])
            if v in declared:
                raise ParseError(no, f"vertex {v!r} declared twice")
            declared[v] = no
        elif head in ("rot", "list", "ppath"):
            lhs, colon, rhs = rest.partition(":")
            if not colon or len(lhs.split()) != 1:
                raise ParseError(no, f"expected '{head} <id>: ...'")
            key, toks = lhs.strip(), rhs.split()
            if head == "rot":
                v = vid(key)
                if v in rot:
                    raise ParseError(no, f"duplicate rotation for {v!r} (first on line {rot_line[v]})")
                rot[v] = [vid(t) for t in toks]
                rot_line[v] = no
                refs.append((no, v))
                refs.extend((no, w) for w in rot[v])
            elif head == "list":
                v = vid(key)
                if v in raw["lists"]:
                    raise ParseError(no, f"duplicate list for {v!r}")
                raw["lists"][v] = frozenset(_ints(toks, no, "colors"))
                refs.append((no, v))
            else:
                f = _ints([key], no, "face indices")[0]
                raw["ppaths"][f] = tuple(vid(t) for t in toks)
                refs.extend((no, w) for w in raw["ppaths"][f])
        elif head in ("precolor", "color"):
            toks = rest.split()
            if len(toks) != 2:
                raise ParseError(no, f"expected '{head} <id> <color>'")
            v = vid(toks[0])
            c = _ints(toks[1:], no, "colors")[0]
            tgt = raw["precolor" if head == "precolor" else "coloring"]
            if v in tgt:
                raise ParseError(no, f"duplicate {head} for {v!r}")
            tgt[v] = c
            refs.append((no, v))
        elif head in ("outer", "root", "face-check", "cface"):
            toks = rest.split()
            if len(toks) != 1:
                raise ParseError(no, f"expected '{head} <int>'")
            x = _ints(toks, no, head)[0]
            if head == "face-check":
                face_check = (no, x)
            elif head == "cface":
                raw["cfaces"].append(x)
            else:
                raw[head] = x
        elif head == "params":
            for tok in rest.split():
                k, eq, val = tok.partition("=")
                if not eq or k not in PARAM_ORDER:
                    raise ParseError(no, f"bad parameter {tok!r}")
                raw["params"][k] = _param(k, val, no)
        elif head == "verdict":
            raw["verdict"] = rest
        else:
            raise ParseError(no, f"unknown statement {head!r}")
    for no, v in refs:
        if v not in declared:
            raise ParseError(no, f"undeclared vertex {v!r}")
    for v, no in declared.items():
        rot.setdefault(v, [])
    try:
        e = build_embedding(list(declared), rot)
    except EmbeddingError as exc:
        raise ParseError(max(rot_line.values(), default=0), str(exc)) from None
    if face_check is not None and face_check[1] != len(e.faces):
        raise ParseError(face_check[0], f"face-check {face_check[1]} but {len(e.faces)} faces traced")
    for key in ("outer", "root"):
        if raw[key] is not None and not 0 <= raw[key] < len(e.faces):
            raise ParseError(0, f"{key} face {raw[key]} out of range")
    return Document(e, **raw)


def parse_json(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    return from_json(data)


def from_json(data: Mapping) -> Document:
    lines = [f"vertex {v}" for v in data.get("vertices", [])]
    for v, ns in data.get("rotation", {}).items():
        lines.append(f"rot {v}: " + " ".join(str(w) for w in ns))
    for v, cs in data.get("lists", {}).items():
        lines.append(f"list {v}: " + " ".join(str(c) for c in cs))
    for v, c in data.get("precolor", {}).items():
        lines.append(f"precolor {v} {c}")
    for v, c in data.get("coloring", {}).items():
        lines.append(f"color {v} {c}")
    if data.get("outer") is not None:
        lines.append(f"outer {data['outer']}")
    for f in data.get("cfaces", []):
        lines.append(f"cface {f}")
    if data.get("root") is not None:
        lines.append(f"root {data['root']}")
    for f, seq in data.get("ppaths", {}).items():
        lines.append(f"ppath {f}: " + " ".join(str(v) for v in seq))
    if data.get("params"):
        lines.append("params " + " ".join(f"{k}={v}" for k, v in data["params"].items()))
    if data.get("verdict") is not None:
        lines.append(f"verdict {data['verdict']}")
    return parse_text("\n".join(lines))


def load(path: str | Path) -> Document:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


# ------------------------------------------------------------ writing
def _sorted(e: Embedding, keys) -> list:
    return sorted(keys, key=lambda v: e.index.get(v, len(e.index)))


def dump_embedding(e: Embedding) -> str:
    out = [f"vertex {v}" for v in e.vertices]
    out += [f"rot {v}: " + " ".join(str(w) for w in e.rotation[v]) for v in e.vertices]
    out.append(f"face-check {len(e.faces)}")
    return "\n".join(out) + "\n"


def dump_document(doc: Document) -> str:
    e = doc.e
    out = [dump_embedding(e).rstrip("\n")]
    for v in _sorted(e, doc.lists):
        out.append(f"list {v}: " + " ".join(str(c) for c in sorted(doc.lists[v])))
    for v in _sorted(e, doc.precolor):
        out.append(f"precolor {v} {doc.precolor[v]}")
    if doc.outer is not None:
        out.append(f"outer {doc.outer}")
    out += [f"cface {f}" for f in doc.cfaces]
    if doc.root is not None:
        out.append(f"root {doc.root}")
    for f in sorted(doc.ppaths):
        out.append(f"ppath {f}: " + " ".join(str(v) for v in doc.ppaths[f]))
    if doc.params:
        out.append("params " + " ".join(f"{k}={doc.params[k]}" for k in PARAM_ORDER if k in doc.params))
    for v in _sorted(e, doc.coloring):
        out.append(f"color {v} {doc.coloring[v]}")
    if doc.verdict is not None:
        out.append(f"verdict {doc.verdict}")
    return "\n".join(out) + "\n"


def to_json(doc: Document) -> dict:
    e = doc.e
    out: dict = {
        "vertices": list(e.vertices),
        "rotation": {str(v): list(e.rotation[v]) for v in e.vertices},
    }
    if doc.lists:
        out["lists"] = {str(v): sorted(doc.lists[v]) for v in _sorted(e, doc.lists)}
    if doc.precolor:
        out["precolor"] = {str(v): doc.precolor[v] for v in _sorted(e, doc.precolor)}
    if doc.coloring:
        out["coloring"] = {str(v): doc.coloring[v] for v in _sorted(e, doc.coloring)}
    if doc.outer is not None:
        out["outer"] = doc.outer
    if doc.cfaces:
        out["cfaces"] = list(doc.cfaces)
    if doc.root is not None:
        out["root"] = doc.root
    if doc.ppaths:
        out["ppaths"] = {str(f): list(s) for f, s in sorted(doc.ppaths.items())}
    if doc.params:
        out["params"] = {k: str(doc.params[k]) for k in PARAM_ORDER if k in doc.params}
    if doc.verdict is not None:
        out["verdict"] = doc.verdict
    return out


def dump_coloring(e: Embedding, phi: Mapping) -> str:
    return "".join(f"color {v} {phi[v]}\n" for v in _sorted(e, phi))

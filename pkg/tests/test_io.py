from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivelist import generators as gen
from fivelist.io import (
    Document,
    ParseError,
    dump_coloring,
    dump_document,
    dump_embedding,
    load,
    parse_json,
    parse_text,
    to_json,
)


def _rot(e):
    return {v: tuple(e.rotation[v]) for v in e.vertices}


def test_load_k4(data_dir):
    doc = load(data_dir / "k4.txt")
    assert len(doc.e.vertices) == 4 and doc.e.genus == 0 and len(doc.e.faces) == 4


def test_bad_rot_line_number(data_dir):
    with pytest.raises(ParseError) as ex:
        load(data_dir / "bad_rot.txt")
    assert ex.value.line == 6


def test_duplicate_vertex():
    with pytest.raises(ParseError) as ex:
        parse_text("vertex 0\nvertex 0\n")
    assert ex.value.line == 2


def test_undeclared_vertex():
    with pytest.raises(ParseError) as ex:
        parse_text("vertex 0\nvertex 1\nrot 0: 1\nrot 1: 0 7\n")
    assert ex.value.line == 4 and "undeclared" in ex.value.message


def test_face_check_mismatch():
    with pytest.raises(ParseError):
        parse_text(dump_embedding(gen.k4()).replace("face-check 4", "face-check 5"))


def test_unknown_statement_and_bad_param():
    with pytest.raises(ParseError):
        parse_text("vertex 0\nfrob 1\n")
    with pytest.raises(ParseError):
        parse_text("vertex 0\nparams alpha=x\n")
    with pytest.raises(ParseError):
        parse_text("vertex 0\nparams omega=1\n")


def test_comments_and_string_ids():
    doc = parse_text("# a path\nvertex a\nvertex b  # trailing\nrot a: b\nrot b: a\nlist a: 1 2\n")
    assert set(doc.e.vertices) == {"a", "b"}
    assert doc.lists["a"] == frozenset({1, 2})


def _full_doc() -> Document:
    e = gen.wheel(5)
    return Document(
        e,
        lists={v: frozenset(range(1, 6)) for v in e.vertices},
        precolor={0: 1, 1: 2},
        outer=0,
        cfaces=[0, 2],
        root=0,
        ppaths={0: (0, 1)},
        params={"alpha": 4, "k": 2, "beta": Fraction(5, 2), "gamma": Fraction(1)},
        coloring={0: 1, 5: 3},
        verdict="suite=thomassen FAIL example",
    )


def test_text_round_trip():
    doc = _full_doc()
    text = dump_document(doc)
    back = parse_text(text)
    assert _rot(back.e) == _rot(doc.e)
    for key in ("lists", "precolor", "outer", "cfaces", "root", "ppaths", "params", "coloring", "verdict"):
        assert getattr(back, key) == getattr(doc, key), key
    assert dump_document(back) == text


def test_json_round_trip():
    doc = _full_doc()
    data = to_json(doc)
    back = parse_json(json.dumps(data))
    assert to_json(back) == data
    assert back.params["beta"] == Fraction(5, 2)


def test_json_syntax_error():
    with pytest.raises(ParseError):
        parse_json("{not json")


def test_dump_coloring_order():
    e = gen.k4()
    assert dump_coloring(e, {3: 1, 0: 2}) == "color 0 2\ncolor 3 1\n"


@settings(max_examples=25)
@given(st.integers(4, 12), st.integers(0, 1000))
def test_round_trip_triangulations(n, seed):
    e = gen.planar_triangulation(n, seed)
    back = parse_text(dump_embedding(e)).e
    assert list(back.vertices) == list(e.vertices)
    assert _rot(back) == _rot(e)
    assert [f.walk for f in back.faces] == [f.walk for f in e.faces]

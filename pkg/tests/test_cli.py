from __future__ import annotations

import json
import subprocess
import sys

import pytest

from fivelist.cli import EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_NONE, EXIT_OK, EXIT_PARSE, main, parse_params
from fivelist.harness import validate_coloring
from fivelist.io import load, parse_text


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def golden(data_dir, name) -> str:
    return (data_dir / "golden" / name).read_text()


# ----------------------------------------------------------- analyze
def test_analyze_k4(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", data_dir / "k4.txt")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "V=4 E=6 F=4 g=0 ew=inf fw=inf fw*=inf sep4=0 short-inseparable=yes"
    assert out == golden(data_dir, "analyze_k4.txt")


def test_analyze_torus(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", data_dir / "torus3x3.txt")
    assert code == EXIT_OK
    assert " g=1 ew=3 fw=3 " in out.splitlines()[0]
    assert out == golden(data_dir, "analyze_torus3x3.txt")


def test_analyze_malformed(capsys, data_dir):
    code, _, err = run(capsys, "analyze", data_dir / "bad_rot.txt")
    assert code == EXIT_PARSE
    assert "line 6" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", tmp_path / "absent.txt")
    assert code == EXIT_PARSE


def test_analyze_params_and_json(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", data_dir / "k4.txt", "--params", "beta=2,gamma=1", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["params"]["delta"] == pytest.approx(4.2)
    assert rep["V"] == 4 and len(rep["faces"]) == 4


def test_bad_params(capsys, data_dir):
    code, _, _ = run(capsys, "analyze", data_dir / "k4.txt", "--params", "eta=2")
    assert code == EXIT_PARSE
    with pytest.raises(ValueError):
        parse_params("beta")


# ------------------------------------------------------------- color
def test_color_oracle_none(capsys, data_dir):
    code, out, _ = run(capsys, "color", data_dir / "triangle_2lists.txt")
    assert code == EXIT_NONE
    assert out == "NONE\n"


def test_color_thomassen_w5(capsys, data_dir, tmp_path):
    dest = tmp_path / "col.txt"
    code, _, _ = run(capsys, "color", data_dir / "w5.txt", "--mode", "thomassen", "--out", dest)
    assert code == EXIT_OK
    text = dest.read_text()
    assert text == golden(data_dir, "color_w5_thomassen.txt")
    doc = load(data_dir / "w5.txt")
    col = {int(v): int(c) for _, v, c in (ln.split() for ln in text.splitlines())}
    assert validate_coloring(doc.e, doc.lists, col) == []


def test_color_json(capsys, data_dir):
    code, out, _ = run(capsys, "color", data_dir / "w5.txt", "--mode", "oracle", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["result"] == "ok"


def test_color_annulus_without_second_face(capsys, data_dir):
    code, _, err = run(capsys, "color", data_dir / "w5.txt", "--mode", "annulus")
    assert code == EXIT_HYPOTHESIS
    assert "F'" in err


def test_color_lens_hypothesis_failure(capsys, data_dir):
    # W5 precolors nothing, so tau is not total on the outer cycle
    code, _, _ = run(capsys, "color", data_dir / "w5.txt", "--mode", "lens")
    assert code == EXIT_HYPOTHESIS


def test_color_annulus_from_document(capsys, tmp_path):
    from fivelist.harness import instances
    from fivelist.io import dump_document

    doc = instances("annulus", 0, 1)[0]
    src = tmp_path / "ann.txt"
    src.write_text(dump_document(doc))
    code, out, _ = run(capsys, "color", src, "--mode", "annulus")
    assert code == EXIT_OK
    col = {int(v): int(c) for _, v, c in (ln.split() for ln in out.splitlines())}
    assert validate_coloring(doc.e, doc.lists, col, total=False, extends=doc.precolor) == []


# ------------------------------------------------------------ verify
def test_verify_golden(capsys, data_dir, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "thomassen", "--seed", 0, "--count", 5, "--out", tmp_path)
    assert code == EXIT_OK
    assert out == golden(data_dir, "verify_thomassen_5.txt")


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "bogus")
    assert code == EXIT_PARSE


def test_verify_exhausted(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "cor13", "--budget", 10, "--count", 2, "--out", tmp_path)
    assert code == EXIT_BUDGET
    assert out.splitlines()[-1] == "RESULT: EXHAUSTED"


def test_verify_injected_bug(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "thomassen", "--count", 3, "--inject-bug", "--out", tmp_path)
    assert code == EXIT_NONE
    lines = [ln for ln in out.splitlines() if ln.startswith("FAIL #")]
    assert lines
    path = lines[0].split("certificate=")[1]
    cert = parse_text(open(path).read())
    assert cert.verdict.startswith("suite=thomassen FAIL")


def test_verify_json(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "fwstar", "--count", 2, "--json", "--out", tmp_path)
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "PASS"


def test_console_script(data_dir):
    proc = subprocess.run([sys.executable, "-m", "fivelist.cli", "analyze", str(data_dir / "k4.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == golden(data_dir, "analyze_k4.txt")

import json
import subprocess
import sys
from dataclasses import replace

import pytest

from qtilt import cli
from qtilt.presentation import find_presentation_iso, presentation_from_dict
from qtilt.ttf import corner_of


def run(*argv):
    return cli.execute(list(argv))


def test_check_reports_failing_gate():
    code, rep, text = run("check", "ex4.9")
    assert code == 0
    assert rep["setting"]["failing_gate"] == "condition (ii)"
    assert rep["setting"]["condition_ii"]["kind"] == "infinite"
    assert rep["inputs"]["algebra_hash"] and rep["bound"] == 26


def test_output_is_deterministic():
    a = run("tilt", "ist")[2]
    b = run("tilt", "ist")[2]
    assert a == b
    assert json.loads(a)["tilting"]["describe"] == ["P1", "P2"]


def test_text_format():
    code, _, text = run("check", "ist", "--format", "text")
    assert code == 0
    assert "passes: True" in text and not text.lstrip().startswith("{")


def test_corner_writes_presentation(tmp_path, ex69):
    out = tmp_path / "corner.json"
    code, rep, _ = run("corner", "ex6.9", "-o", str(out))
    assert code == 0
    B = presentation_from_dict(json.loads(out.read_text()))
    assert find_presentation_iso(B, corner_of(ex69, (0, 1, 2)).algebra) is not None
    assert rep["corner"]["presentation"]["nilpotency_bound"] == 2


def test_approx_strategies():
    code, rep, _ = run("approx", "ex2.2", "S3", "--strategy", "findim0")
    assert code == 0
    assert rep["approximation"]["strategy"] == "CornerFindimZero"
    assert rep["approximation"]["domain_dims"] == [0, 0, 1, 0]
    # the corner of ex2.2 has a simple of infinite projective dimension
    code, _, text = run("approx", "ex2.2", "S3", "--strategy", "gldim")
    assert code == 1 and "error" in text


def test_approx_not_applicable(ex49):
    code, rep, _ = run("approx", "ex4.9", "S3")
    assert code == 0
    assert rep["approximation"] is None and rep["verdict"].startswith("NotApplicable")


def test_iterate_reports_verdict():
    code, rep, _ = run("iterate", "ex4.9")
    assert code == 0 and rep["verdict"] == "CannotCertify"


def test_demo_setting_failure():
    code, rep, _ = run("demo", "ex4.9")
    assert code == 0
    assert rep["verdict"] == "SettingFails: condition (ii)"
    assert rep["simple_pdims"]["3"] == {"kind": "finite", "pdim": 2}


def test_demo_merge():
    code, rep, _ = run("demo", "merge-demo")
    assert code == 0
    assert rep["merge"] == {"corner_isomorphic_to_first": True, "off_corner_projective": True}
    assert rep["setting"]["passes"] is True


def test_input_errors(tmp_path):
    assert run("demo", "nonsense")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("check", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "field": "Q", "compose": "right-to-left", "vertices": ["1", "2"],
        "arrows": [{"name": "a", "from": "1", "to": "2"}],
        "relations": [[{"coeff": "1", "path": ["zz"]}]], "nilpotency_bound": 1,
    }))
    code, _, text = run("check", str(bad), "--e", "1")
    assert code == 1 and "error" in text
    assert run("check", "ist", "--e", "9")[0] == 1
    assert run("approx", "ist", "Q7")[0] == 1


def test_inconsistency_exits_2(monkeypatch):
    real = cli.verify_tilting

    def broken(T, bound=None):
        return replace(real(T, bound), axiom3=False)

    monkeypatch.setattr(cli, "verify_tilting", broken)
    code, rep, text = run("tilt", "ist")
    assert code == 2 and rep is None and "internal error" in text


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "qtilt.cli", "check", "ist"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["setting"]["passes"] is True
    r = subprocess.run([sys.executable, "-m", "qtilt.cli", "demo", "nope"], capture_output=True, text=True)
    assert r.returncode == 1 and r.stdout == "" and "unknown fixture" in r.stderr

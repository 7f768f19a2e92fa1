from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from kltpairs.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_roots():
    code, out = run("roots", "A2")
    assert code == 0 and "3 positive roots" in out
    code, out = run("roots", "G2", "--json")
    assert len(json.loads(out)["positive_roots"]) == 6


def test_parabolic():
    code, out = run("parabolic", "A2", "--I", "a1", "--json")
    data = json.loads(out)
    assert data["w0P_word"] == "s2s1"
    assert data["two_rho_P_fundamental"] == ["0", "3"]
    assert data["levi_positive_roots"] == [[1, 0]]


def test_bs():
    code, out = run("bs", "A2", "--I", "a1", "--word", "s2,s1", "--json")
    data = json.loads(out)
    assert data["betas"] == [[0, 1], [1, 1]] and data["anticanonical"] == ["2", "3"]


def test_klt_flag_examples():
    code, out = run("klt-flag", "A1", "--d", "a1=0", "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "klt"
    assert [e["discrepancy"] for e in data["ledger"]] == ["0"]
    code, out = run("klt-flag", "A2", "--I", "a1", "--d", "a2=1", "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "not-klt" and data["witness"] == [1, 1]
    code, out = run("klt-flag", "A2", "--I", "a1", "--d", "a2=1/2")
    assert "verdict: klt" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("klt-flag", "A2", "--d", "a1=0.5"),
        ("klt-flag", "A2", "--I", "a1", "--d", "a1=1/2"),
        ("klt-flag", "A2", "--d", "a3=1/2"),
        ("klt-flag", "A2", "--d", "a1=3/2"),
        ("roots", "Q7"),
        ("bs", "A2", "--word", "s1,s1"),
        ("resolve-fan", "/nonexistent.json"),
        ("nonsense",),
    ],
)
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_not_q_cartier_exits_1():
    assert run("klt-horo", str(FIXTURES / "not_q_cartier" / "quadric_cone.json"))[0] == 1
    assert run("resolve-fan", str(FIXTURES / "fans" / "square_cone.json"))[0] == 1


def test_resolve_fan():
    code, out = run("resolve-fan", str(FIXTURES / "fans" / "cone_1_2.json"), "--json")
    data = json.loads(out)
    assert data["resolved"]["new_rays"] == [{"ray": [1, 1], "index": 2, "input_cone": 0}]
    assert data["ledger"][0]["discrepancy"] == "-1/2"


def test_klt_horo():
    code, out = run("klt-horo", str(FIXTURES / "cli" / "a2_flag_half.json"), "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "klt" and data["ledger_min"] == "-1/2"
    assert data["consistency_failure"] is False
    code, out = run("klt-horo", str(FIXTURES / "cli" / "a1_cone_1_2_colored.json"), "--resolve-only", "--json")
    assert json.loads(out)["rays"] == [[1, 0], [1, 2], [1, 1]]


def test_verify_small():
    code, out = run("verify", "--max-rank", "2")
    assert code == 0 and "0 failing" in out

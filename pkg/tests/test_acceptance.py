"""Primary acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary (see conftest.py)."""
from __future__ import annotations

import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from kltpairs.errors import NotQCartier
from kltpairs.horoklt import is_klt_horospherical, pair_from_json
from kltpairs.oracle import SWEEP_TYPES, check_corpus, reduced_words, run_sweep
from kltpairs.rootcore import build_root_system, parabolic
from kltpairs.toricres import Fan, ToricBoundary, resolve_fan, toric_discrepancies

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def identity_sweep():
    return timed(run_sweep, SWEEP_TYPES, max_rank=4, words=False, klt=False)


def test_sweep_covers_every_proper_parabolic(identity_sweep):
    report, _ = identity_sweep
    expected = sum(2 ** build_root_system(t).n - 1 for t in SWEEP_TYPES)
    assert len(report.records) == expected == 91


@pytest.mark.acceptance(1, "pairing sweep: min >= 0, witnesses exist and match the predicted set (< 60 s)")
def test_criterion_1_pairing_sweep(identity_sweep):
    report, seconds = identity_sweep
    for r in report.records:
        p = r.pairing_bound
        assert p["nonnegative"], r.to_json()
        assert p["forms_agree"] and p["levi_route_agrees"], r.to_json()
        assert p["witnesses"], r.to_json()
        assert r.equality, r.to_json()
    assert seconds < 60


@pytest.mark.acceptance(2, "Levi longest element identity over the sweep, zero failures")
def test_criterion_2_levi_identity(identity_sweep):
    report, _ = identity_sweep
    assert [r for r in report.records if not r.levi_identity] == []


@pytest.mark.acceptance(3, "beta-set identity and reduced-word independence (all words rank <= 3, >= 100 at rank 4; < 120 s)")
def test_criterion_3_words():
    report, seconds = timed(run_sweep, SWEEP_TYPES, max_rank=4, word_budget=100, words=True, klt=False)
    for r in report.records:
        assert r.words["beta_sets"] and r.words["multisets"], r.to_json()
        datum = build_root_system(r.root_system)
        if datum.n == 4 and r.words["words"] < 100:
            # fewer than the budget means the braid-move search was exhaustive
            p = parabolic(datum, [datum.parse_simple(a) for a in r.I])
            assert len(reduced_words(datum, p.w0P_word)) == r.words["words"]
    assert seconds < 120


@pytest.mark.acceptance(4, "klt on G/P over the grid {0,1/4,1/2,3/4} klt, single d = 1 gives min exactly -1")
def test_criterion_4_flag_klt_grid():
    report = run_sweep(SWEEP_TYPES, max_rank=4, words=False, klt=True)
    for r in report.records:
        assert r.klt["interior_klt"] and r.klt["boundary_sharp"], r.to_json()
        assert r.klt["grid_points"] == 4 ** (build_root_system(r.root_system).n - len(r.I))


@pytest.mark.acceptance(5, "Hirzebruch-Jung oracle for cones (1,0),(1,n), n = 2..12 (< 1 s)")
def test_criterion_5_toric_oracle():
    start = time.perf_counter()
    for n in range(2, 13):
        fan = Fan(2, ((1, 0), (1, n)), ((0, 1),))
        res, prov = resolve_fan(fan)
        tor = toric_discrepancies(fan, res, prov, ToricBoundary((0, 0)))
        assert len(prov) == n - 1
        assert sorted(e.ray for e in tor.ledger) == [(1, k) for k in range(1, n)]
        assert tor.ledger.values == [0] * (n - 1)
    fan = Fan(2, ((1, 0), (1, 2)), ((0, 1),))
    res, prov = resolve_fan(fan)
    for d in ("0", "1/4", "1/2", "3/4", "1"):
        tor = toric_discrepancies(fan, res, prov, ToricBoundary((d, d)))
        assert tor.ledger.values == [-ToricBoundary((d,)).coefficients[0]]
    assert time.perf_counter() - start < 1


@pytest.mark.acceptance(6, "horospherical corpus: floor(D) = 0 iff ledger min > -1; non-Q-Cartier fixtures raise (< 10 s)")
def test_criterion_6_consistency_corpus():
    start = time.perf_counter()
    paths = sorted((FIXTURES / "pairs").glob("*.json"))
    assert len(paths) >= 12
    pairs = [(p.stem, pair_from_json(json.loads(p.read_text()))) for p in paths]
    assert {pr.parab.datum.label for _, pr in pairs} == {"A1", "A2", "B2"}
    assert all(pr.colored_fan.fan.rank <= 2 for _, pr in pairs)
    report = check_corpus(pairs)
    assert report.consistency_failures == []
    assert report.klt > 0 and report.not_klt > 0
    bad = sorted((FIXTURES / "not_q_cartier").glob("*.json"))
    assert bad
    for p in bad:
        with pytest.raises(NotQCartier):
            is_klt_horospherical(pair_from_json(json.loads(p.read_text())))
    assert time.perf_counter() - start < 10


CLI_COMMANDS = [
    ["roots", "A2"],
    ["roots", "G2"],
    ["parabolic", "B3", "--I", "a1,a3"],
    ["bs", "A2", "--I", "a1", "--word", "s2,s1"],
    ["bs", "C3"],
    ["klt-flag", "A2", "--I", "a1", "--d", "a2=1/2"],
    ["klt-flag", "B3", "--I", "a2", "--d", "a1=1,a3=1/3"],
    ["resolve-fan", str(FIXTURES / "fans" / "cone_1_3.json")],
    ["resolve-fan", str(FIXTURES / "fans" / "cone_det2_rank3.json")],
    ["klt-horo", str(FIXTURES / "pairs" / "b2_color_cone.json")],
    ["klt-horo", str(FIXTURES / "cli" / "a2_flag_half.json")],
    ["klt-horo", str(FIXTURES / "cli" / "a1_cone_1_2_colored.json"), "--resolve-only"],
    ["verify", "--max-rank", "2"],
]


def _cli(argv, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run(
        [sys.executable, "-m", "kltpairs", *argv], capture_output=True, env=env, check=False
    )
    return proc.returncode, proc.stdout


@pytest.mark.acceptance(7, "determinism: every CLI command is byte-identical across runs")
@pytest.mark.parametrize("argv", CLI_COMMANDS, ids=lambda a: " ".join(Path(x).name for x in a))
@pytest.mark.parametrize("fmt", [[], ["--json"]], ids=["text", "json"])
def test_criterion_7_cli_determinism(argv, fmt):
    first = _cli(argv + fmt, 1)
    second = _cli(argv + fmt, 2)
    assert first[0] == 0
    assert first[1] and first == second

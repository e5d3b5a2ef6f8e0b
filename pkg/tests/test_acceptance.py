"""Acceptance criteria, each at full size and with exact comparisons.

Every criterion records one PASS/FAIL line, shown in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import subprocess
import sys

import pytest

from filiso import campaigns as c
from filiso.generate import fixture_identity_counterexample
from filiso.filtration import TypeVector
from filiso.mazur import adm_search

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def summarize(res: c.CampaignResult) -> str:
    return f"{res.trials} trials, {len(res.violations)} violations"


def first_violations(res: c.CampaignResult, k: int = 3) -> list[str]:
    return [v["detail"] for v in res.violations[:k]]


@pytest.fixture(scope="module")
def hn_corpus():
    return c.hn_campaign(1000, seed=0)


def test_criterion_01_scalar_formulas():
    res = c.scalar_product_campaign(500, seed=0)
    record(1, "scalar product formulas agree", res.ok, summarize(res))
    assert res.ok, first_violations(res)


def test_criterion_02_tensor_scalar_identity():
    res = c.tensor_scalar_campaign(500, seed=0)
    record(2, "tensor scalar identity", res.ok, summarize(res))
    assert res.ok, first_violations(res)


def test_criterion_03_newton_consistency():
    res = c.newton_campaign(500, seed=0)
    record(3, "Newton slopes and vp(det)", res.ok, f"500 split + 500 arbitrary, {len(res.violations)} violations")
    assert res.trials == 1000
    assert res.ok, first_violations(res)


def test_criterion_04_weak_admissibility_equivalence():
    res = c.lemma23_campaign(1000, seed=0)
    kinds = f"{res.stats.get('admissible', 0)} admissible, {res.stats['xi_checked']} filtrations"
    record(4, "enumeration verdict equals scalar conditions", res.ok, f"{summarize(res)}, {kinds}")
    assert res.stats.get("admissible", 0) > 0 and res.stats.get("not_admissible", 0) > 0
    assert res.ok, first_violations(res)


_IDENTITY_KEYS = ("triviality", "identity", "flag route", "not unique", "not nested")
_STRUCTURE_KEYS = ("strictly decreasing", "semistable", "not unique", "not nested")


def _matching(res, keys):
    # a violation matching neither list counts against both criteria
    known = _IDENTITY_KEYS + _STRUCTURE_KEYS
    return [v for v in res.violations
            if any(k in v["detail"] for k in keys) or not any(k in v["detail"] for k in known)]


def test_criterion_05_hn_triviality_and_identity(hn_corpus):
    bad = _matching(hn_corpus, _IDENTITY_KEYS)
    record(5, "HN trivial iff admissible, HN identity", not bad, f"{hn_corpus.trials} instances, {len(bad)} violations")
    assert not bad, [v["detail"] for v in bad[:3]]


def test_criterion_06_hn_structure(hn_corpus):
    bad = _matching(hn_corpus, _STRUCTURE_KEYS)
    pieces = sum(v for k, v in hn_corpus.stats.items() if k.startswith("pieces_") and k != "pieces_1")
    record(6, "HN slopes decrease, pieces semistable", not bad,
           f"{hn_corpus.trials} instances, {pieces} with several pieces, {len(bad)} violations")
    assert pieces > 0
    assert not bad, [v["detail"] for v in bad[:3]]


def test_criterion_07_totaro_closure():
    res = c.totaro_campaign(500, seed=0)
    record(7, "tensor of admissible is admissible", res.ok, f"{summarize(res)}, {res.skipped} collisions redrawn")
    assert res.ok, first_violations(res)


def test_criterion_08_fargues_projection():
    res = c.fargues_campaign(200, seed=0, samples=100)
    detail = (f"{summarize(res)}, {res.stats.get('members_checked', 0)} members, "
              f"{res.stats.get('non_members', 0)} non-members")
    record(8, "Fargues membership, projection, perturbation", res.ok, detail)
    assert res.stats.get("members_checked", 0) > 0
    assert res.ok, first_violations(res)


def test_criterion_09_fargues_tensor():
    res = c.fargues_tensor_campaign(300, seed=0)
    semi = res.stats.get("semistable_pairs", 0)
    record(9, "Fargues filtration of tensor products", res.ok and semi > 0,
           f"{summarize(res)}, {semi} semistable pairs")
    assert semi > 0
    assert res.ok, first_violations(res)


def test_criterion_10_mazur():
    res = c.mazur_campaign(1000, seed=0)
    record(10, "Mazur inequality with equal sums", res.ok, summarize(res))
    assert res.ok, first_violations(res)


def test_criterion_11_laffaille():
    res = c.laffaille_campaign(seed=0)
    pairs = res.stats.get("sd_tensor_pairs", 0)
    ok = res.ok and res.trials >= 20 and pairs > 0
    record(11, "orbit probes match exact verdicts", ok,
           f"{res.trials} fixtures, {pairs} strongly divisible tensor pairs, {len(res.violations)} violations")
    assert res.trials >= 20 and pairs > 0
    assert res.ok, first_violations(res)


def test_criterion_12_adm_search():
    res = c.adm_search_campaign(100, seed=0)
    cx = fixture_identity_counterexample()
    r = adm_search(cx.iso, TypeVector.of([1, -1]), trials=500, seed=0)
    ok = res.ok and not r.found and res.stats.get("found", 0) > 0
    record(12, "adm_search sound, counterexample gives None", ok,
           f"{res.stats.get('found', 0)} flags verified, counterexample: {r.reason}")
    assert res.stats.get("found", 0) > 0
    assert not r.found and r.filtration is None
    assert res.ok, first_violations(res)


_CLI_RUNS = [
    ["gen", "--dim", "4", "--p", "5", "--seed", "7", "--with-lattice"],
    ["check-wa", "{fixtures}/fixture_dim3_generic.json"],
    ["hn", "{fixtures}/fixture_nonwa.json"],
    ["fargues", "{fixtures}/fixture_dim3_spread.json"],
    ["laffaille-probe", "{fixtures}/fixture_ordinary.json", "--seed", "7"],
    ["mazur-fuzz", "--trials", "1000", "--seed", "7"],
    ["totaro-fuzz", "--trials", "50", "--seed", "7"],
    ["fargues-tensor-fuzz", "--trials", "50", "--seed", "7"],
    ["identity-suite", "--trials", "30", "--seed", "7"],
]


def test_criterion_13_cli_determinism(fixtures_dir, tmp_path):
    mismatched = []
    for k, argv in enumerate(_CLI_RUNS):
        argv = [a.replace("{fixtures}", str(fixtures_dir)) for a in argv]
        outs = []
        for rep in range(2):
            out = tmp_path / f"run{k}-{rep}.json"
            proc = subprocess.run([sys.executable, "-m", "filiso", *argv, "--out", str(out)],
                                  capture_output=True, cwd=tmp_path, check=False)
            assert proc.returncode == 0, (argv, proc.stderr.decode())
            outs.append(out.read_bytes())
        if outs[0] != outs[1]:
            mismatched.append(argv[0])
        if argv[0] == "mazur-fuzz":
            assert json.loads(outs[0])["violations"] == 0
    record(13, "repeated CLI runs are byte-identical", not mismatched,
           f"{len(_CLI_RUNS)} commands, {len(mismatched)} differ")
    assert not mismatched

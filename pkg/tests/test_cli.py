"""Command-line contract: exit codes, outputs and determinism."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

import prefkit.corpus
from prefkit import io
from prefkit.agm import ContractionOperator, EntrenchmentRelation, RevisionOperator
from prefkit.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_UNSAT, main
from prefkit.logic import DomainFamily, power_set
from prefkit.nabla import random_nstructure
from prefkit.size import Filter, FilterSystem

SAMPLES = Path(prefkit.corpus.__file__).parent / "samples"
CORPUS = Path(prefkit.corpus.__file__).parent


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj) -> Path:
    p = tmp_path / name
    p.write_text(io.dumps(obj))
    return p


def test_check_mu_need_pr(capsys):
    code, out, _ = run(capsys, "check", "mu", SAMPLES / "need-pr.json")
    assert code == EXIT_FAIL
    assert "| (μPR) | FAIL |" in out and "| (μCUM) | PASS |" in out
    assert "## Basics" in out


def test_check_mu_identity_passes(capsys):
    code, out, _ = run(capsys, "check", "mu", SAMPLES / "identity.json")
    assert code == EXIT_OK and "**Status:** PASS" in out


def test_check_accepts_corpus_entries(capsys):
    code, out, _ = run(capsys, "check", "mu", CORPUS / "need-pr.json", "--json")
    assert code == EXIT_FAIL
    assert json.loads(out)["status"] == "FAIL"


def test_check_structure_chain(capsys):
    code, out, _ = run(capsys, "check", "structure", SAMPLES / "chain.json")
    assert code == EXIT_OK
    assert "| transitive | True |" in out and "| smooth | True |" in out and "Soundness" in out


def test_check_distance_operator(capsys):
    code, out, _ = run(capsys, "check", "distance-op", SAMPLES / "hamming-op.json", "--k-max", 6)
    assert code == EXIT_OK and "FAIL" not in out


def test_check_logic(capsys):
    code, out, _ = run(capsys, "check", "logic", CORPUS / "cut-pr.json")
    assert code == EXIT_FAIL and "CUT" in out


def test_check_agm_kinds(capsys, tmp_path):
    u, x = 0b111, 0b001
    sets = power_set(u)
    rev = RevisionOperator(u, x, {a: (x & a) or a for a in sets})
    con = ContractionOperator(u, x, {a: x | (u & ~a) for a in sets})
    ee = EntrenchmentRelation(u, x, {(a, b) for a in sets for b in sets})
    assert run(capsys, "check", "agm-rev", write(tmp_path, "r.json", io.agm_to_json(rev)))[0] == EXIT_OK
    code, out, _ = run(capsys, "check", "agm-con", write(tmp_path, "c.json", io.agm_to_json(con)))
    assert code == EXIT_FAIL and "| con3 | FAIL |" in out
    code, out, _ = run(capsys, "check", "agm-ee", write(tmp_path, "e.json", io.agm_to_json(ee)))
    assert code == EXIT_FAIL and "EE5" in out


def test_check_size_kinds(capsys, tmp_path):
    weak = Filter(0b111, frozenset({0b011, 0b110, 0b111}), "weak")
    code, out, _ = run(capsys, "check", "filter", write(tmp_path, "f.json", io.filter_to_json(weak)))
    assert code == EXIT_OK and "Further conditions" in out
    strong = Filter(0b111, frozenset({0b011, 0b110, 0b111}), "strong")
    assert run(capsys, "check", "filter", write(tmp_path, "g.json", io.filter_to_json(strong)))[0] == EXIT_FAIL
    dom = DomainFamily.power_set(0b11)
    sys = FilterSystem(dom, {s: Filter.principal(s, s) for s in dom.sets})
    assert run(capsys, "check", "coherence", write(tmp_path, "s.json", io.system_to_json(sys)))[0] == EXIT_OK
    m = random_nstructure(random.Random(1), 3)
    assert run(capsys, "check", "nabla", write(tmp_path, "n.json", io.nstructure_to_json(m)))[0] == EXIT_OK


def test_synth_exit_codes(capsys):
    code, out, _ = run(capsys, "synth", "ranked", SAMPLES / "rank-copies.json")
    assert code == EXIT_UNSAT and "Unsat" in out
    code, out, _ = run(capsys, "synth", "pref", SAMPLES / "identity.json")
    assert code == EXIT_OK and json.loads(out)["attacks"] == []
    code, out, _ = run(capsys, "synth", "distance", SAMPLES / "weaktr.json")
    assert code == EXIT_OK and "pairs" in json.loads(out)
    code, out, _ = run(capsys, "synth", "distance", CORPUS / "tr-rank-indiv.json", "--individual")
    assert code == EXIT_UNSAT and "d(a,b) < d(a,c) < d(a,b)" in out


def test_translate_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "translate", "mu-to-logic", SAMPLES / "need-pr.json", "--vocab", "2")
    assert code == EXIT_OK
    p = tmp_path / "logic.json"
    p.write_text(out)
    code, out2, _ = run(capsys, "translate", "logic-to-mu", p)
    assert code == EXIT_OK and "map" in json.loads(out2)
    u, x = 0b11, 0b01
    rev = RevisionOperator(u, x, {a: (x & a) or a for a in power_set(u)})
    r = write(tmp_path, "rev.json", io.agm_to_json(rev))
    code, out, _ = run(capsys, "translate", "rev-to-con", r)
    c = tmp_path / "con.json"
    c.write_text(out)
    code, out, _ = run(capsys, "translate", "con-to-rev", c)
    assert code == EXIT_OK and io.revision_from_json(json.loads(out)).table == rev.table
    code, out, _ = run(capsys, "translate", "con-to-ee", c)
    e = tmp_path / "ee.json"
    e.write_text(out)
    code, out, _ = run(capsys, "translate", "ee-to-con", e)
    assert code == EXIT_OK and io.contraction_from_json(json.loads(out)).table == io.contraction_from_json(
        json.loads(c.read_text())).table


def test_matrix_commands(capsys, monkeypatch):
    code, out, _ = run(capsys, "matrix", "--rows", "4,9")
    assert code == EXIT_OK and "| row 4 | PASS" in out and "row 1.1" not in out
    code, _, err = run(capsys, "matrix", "--vocab", "4")
    assert code == EXIT_INPUT and "budget" in err
    monkeypatch.setenv("PREFKIT_BUDGET", "10")
    assert run(capsys, "matrix", "--rows", "4")[0] == EXIT_INPUT
    assert run(capsys, "matrix", "--rows", "4", "--budget", "5000")[0] == EXIT_OK
    monkeypatch.setenv("PREFKIT_BUDGET", "many")
    assert run(capsys, "matrix", "--rows", "4")[0] == EXIT_INPUT


def test_golden_commands(capsys):
    code, out, _ = run(capsys, "golden", "--list")
    assert code == EXIT_OK and out.split() == ["need-pr", "mu-cum-cd", "rank-copies", "needcopies",
                                              "weaktr", "cut-pr", "tr-rank-indiv"]
    code, out, _ = run(capsys, "golden", "--filter", "weaktr")
    assert code == EXIT_OK and "## weaktr: PASS" in out and "need-pr" not in out
    assert run(capsys, "golden")[0] == EXIT_OK


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--vocab", "2", "--json")
    assert code == EXIT_OK and json.loads(out)["count"] == 16
    code, out, _ = run(capsys, "enumerate", "--vocab", "3", "--require", "mu_PR,mu_CUM")
    assert code == EXIT_OK and "| count" not in out and "- count: " in out
    assert run(capsys, "enumerate", "--require", "mu_bogus")[0] == EXIT_INPUT
    a = run(capsys, "enumerate", "--vocab", "3", "--sample", "5", "--seed", "3", "--json")[1]
    b = run(capsys, "enumerate", "--vocab", "3", "--sample", "5", "--seed", "3", "--json")[1]
    assert a == b and json.loads(a)["count"] == 5


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", "mu", tmp_path / "missing.json")
    assert code == EXIT_INPUT and err.startswith("prefkit: error:")
    bad = tmp_path / "bad.json"
    bad.write_text('{"universe": [0]}')
    assert run(capsys, "check", "mu", bad)[0] == EXIT_INPUT
    with pytest.raises(SystemExit):
        main(["check", "nonsense", "x"])


@pytest.mark.parametrize("argv", [
    ["check", "mu", SAMPLES / "need-pr.json"],
    ["check", "structure", SAMPLES / "chain.json", "--json"],
    ["golden"],
    ["synth", "ranked", SAMPLES / "rank-copies.json"],
])
def test_byte_identical_output(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second

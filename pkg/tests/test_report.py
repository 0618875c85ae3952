"""Report rendering: JSON and markdown carry the same content deterministically."""

from __future__ import annotations

from prefkit.choice import PropertyVerdict
from prefkit.report import Report, Section, witness_json, witness_text

ABC = ("a", "b", "c")


def sample() -> Report:
    r = Report("Sample", status="FAIL")
    r.info["size"] = 3
    r.add(Section("Basics", [
        PropertyVerdict("mu_sub", True, None, 8),
        PropertyVerdict("mu_PR", False, {"X": 0b011, "Y": 0b111, "element": 0}, 5, 2, note="first failure"),
    ], labels=ABC, names={"mu_PR": "(μPR)"}))
    t = Section("Table", columns=["k", "v|w"])
    t.rows = [[1, "x|y"]]
    t.notes.append("a note")
    r.add(t)
    return r


def test_counts():
    r = sample()
    assert r.counts() == {"properties": 2, "failed": 1, "checked": 13, "skipped": 2}
    assert not r.ok and r.failed == 1


def test_json_content():
    j = sample().to_json()
    assert j["title"] == "Sample" and j["status"] == "FAIL" and j["info"] == {"size": 3}
    v = j["sections"][0]["verdicts"][1]
    assert v["property"] == "mu_PR" and v["holds"] is False and v["note"] == "first failure"
    assert v["witness"]["X"] == ["a", "b"]
    assert j["sections"][1]["rows"] == [[1, "x|y"]]


def test_markdown_content():
    md = sample().to_markdown()
    assert md.startswith("# Sample\n")
    assert "| (μPR) | FAIL | 5 |" in md
    assert "| mu_sub | PASS | 8 |" in md
    assert "x\\|y" in md
    assert "- a note" in md
    assert md.rstrip().endswith("2 skipped.")


def test_renderings_are_deterministic():
    assert sample().to_markdown() == sample().to_markdown()
    assert sample().to_json() == sample().to_json()


def test_witness_helpers():
    assert witness_json({"X": 0b101}, ABC) == {"X": ["a", "c"]}
    assert "a" in witness_text({"X": 0b001}, ABC)
    assert Report("empty").ok

"""The bundled corpus reproduces its documented verdicts."""

from __future__ import annotations

import pytest

from prefkit.errors import InputError
from prefkit.golden import GOLDEN_NAMES, list_entries, load_entry, run_entry, run_golden


def test_listing():
    assert set(list_entries()) == {
        "need-pr", "mu-cum-cd", "rank-copies", "needcopies", "weaktr", "cut-pr", "tr-rank-indiv",
    }


@pytest.mark.parametrize("name", GOLDEN_NAMES)
def test_entry_passes(name):
    res = run_entry(name)
    assert res.checks, name
    assert res.ok, [c for c in res.checks if not c.holds]


def test_entries_are_well_formed():
    for name in GOLDEN_NAMES:
        e = load_entry(name)
        assert e["name"] == name and e["kind"] and e["description"] and "expect" in e


def test_full_run_and_filter():
    full = run_golden()
    assert full.ok and len(full.sections) == len(GOLDEN_NAMES)
    assert all(s.title.endswith(": PASS") for s in full.sections)
    one = run_golden(["weaktr"])
    assert [s.title for s in one.sections] == ["weaktr: PASS"]


def test_unknown_entry():
    with pytest.raises(InputError):
        load_entry("nonexistent")

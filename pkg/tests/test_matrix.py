"""The exhaustive implication matrix."""

from __future__ import annotations

import pytest

from prefkit.errors import BudgetExceededError, InputError
from prefkit.matrix import check_budget, claimed_matrix, matrix_report, run_matrix


@pytest.fixture(scope="module")
def full():
    return run_matrix(3)


def test_full_run_is_consistent(full):
    assert full.ok and full.functions == 4096
    assert not full.contradictions
    assert all(c.disagreements == 0 for c in full.coherence)
    assert full.coherence_universe


def test_negative_rows_have_counterexamples(full):
    rows = {r.row: r for r in full.rows}
    assert rows["4"].bundled and rows["9"].bundled
    assert rows["4"].as_expected and rows["9"].as_expected
    assert all(r.counterexamples == 0 for r in full.rows if r.positive)


def test_claimed_cells_hold_empirically(full):
    for cell, claimed in full.claimed.items():
        if claimed:
            assert full.empirical[cell], cell
    assert claimed_matrix()[("mu_PR", "mu_PR")]


def test_selected_rows_only():
    res = run_matrix(3, rows=["4", "9"])
    assert [r.row for r in res.rows] == ["4", "9"]
    assert not res.claimed and not res.coherence
    with pytest.raises(InputError):
        run_matrix(3, rows=["99"])


def test_budget():
    with pytest.raises(BudgetExceededError):
        run_matrix(4)
    assert check_budget(2, 100) == 16
    with pytest.raises(InputError):
        run_matrix(0)


def test_report_is_deterministic(full):
    assert matrix_report(full).to_markdown() == matrix_report(full).to_markdown()
    assert matrix_report(full).ok

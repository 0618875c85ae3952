"""Implication rows between choice conditions and the algebra/logic correspondence."""

from __future__ import annotations

import pytest

from prefkit.choice import ChoiceFunction, enumerate_choice_functions, mu_holds
from prefkit.logic import DomainFamily, Vocabulary
from prefkit.rows import (
    ALG_LOG_ROWS,
    EQUIV,
    IMPLIES,
    MU_ROWS,
    check_mu_base_row,
    translation_coherence,
)

A, B, C, D = 1, 2, 4, 8
FULL = A | B | C
POSITIVE = [rid for rid, r in MU_ROWS.items() if r.kind in (IMPLIES, EQUIV)]


def need_pr() -> ChoiceFunction:
    return ChoiceFunction.from_callable(DomainFamily.power_set(FULL), lambda x: B if x == A | B else x)


def mu_cum_cd() -> ChoiceFunction:
    x, y = A | B | C, A | B | D
    return ChoiceFunction(DomainFamily(A | B | C | D, (x, y)), {x: A, y: A | B})


def test_row_three_confirmed_on_preferential_function():
    f = ChoiceFunction.from_callable(DomainFamily.power_set(FULL), lambda x: x)
    v = check_mu_base_row("3", f)
    assert v.holds and v.status == "confirmed"


def test_row_four_counterexample():
    v = check_mu_base_row("4", need_pr())
    assert v.status == "counterexample"


def test_row_nine_counterexample():
    v = check_mu_base_row("9", mu_cum_cd())
    assert v.status == "counterexample"


def test_row_not_applicable_without_closure():
    v = check_mu_base_row("1.1", mu_cum_cd())
    assert v.status == "not-applicable"


def test_unknown_row():
    with pytest.raises(ValueError):
        check_mu_base_row("99", need_pr())


def test_positive_rows_hold_exhaustively():
    cache: dict = {}
    for f in enumerate_choice_functions(FULL):
        for rid in POSITIVE:
            v = check_mu_base_row(rid, f, cache)
            assert v.holds, (rid, f.table, v.failures)
        cache.clear()


def test_translation_coherence_exhaustive():
    vocab = Vocabulary.default(2)
    for f in enumerate_choice_functions(FULL):
        if not mu_holds(f, "mu_sub"):
            continue
        for v in translation_coherence(f, vocab):
            assert v.agrees, (v.row, f.table, v.disagreements)


def test_correspondence_rows_cover_rule_catalogue():
    assert {r.rule for r in ALG_LOG_ROWS.values()} >= {"OR", "PR", "CUT", "CM", "CUM", "RatM"}

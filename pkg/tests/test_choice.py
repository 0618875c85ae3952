"""Choice functions: condition checkers, witnesses and enumeration."""

from __future__ import annotations

import pytest
from hypothesis import given

from conftest import choice_functions
from oracles import fs_table, mu_oracle
from prefkit.choice import (
    MU_CONDITIONS,
    ChoiceFunction,
    check_all_mu,
    check_mu_property,
    count_choice_functions,
    enumerate_choice_functions,
    mu_holds,
    witness_fails,
)
from prefkit.errors import DomainMissError, EnumerationCapError
from prefkit.logic import DomainFamily, power_set

ABC = ("a", "b", "c")
A, B, C, D = 1, 2, 4, 8
FULL = A | B | C


def identity(u: int, include_empty: bool = True) -> ChoiceFunction:
    return ChoiceFunction.from_callable(DomainFamily.power_set(u, include_empty), lambda x: x, ABC)


def need_pr() -> ChoiceFunction:
    return ChoiceFunction.from_callable(
        DomainFamily.power_set(FULL), lambda x: B if x == A | B else x, ABC
    )


def mu_cum_cd() -> ChoiceFunction:
    x, y = A | B | C, A | B | D
    return ChoiceFunction(DomainFamily(A | B | C | D, (x, y)), {x: A, y: A | B})


def test_identity_satisfies_preferentiality():
    assert check_mu_property(identity(FULL, include_empty=False), "mu_PR").holds


def test_need_pr_witness():
    v = check_mu_property(need_pr(), "mu_PR")
    assert not v.holds
    assert v.witness == {"X": A | B, "Y": A | B | C, "element": 0}


def test_mu_cum_cd_verdicts():
    f = mu_cum_cd()
    assert check_mu_property(f, "mu_sub").holds
    assert check_mu_property(f, "mu_CUM").holds
    assert not check_mu_property(f, "mu_subsup").holds


def test_unknown_property():
    with pytest.raises(ValueError):
        check_mu_property(identity(FULL), "mu_nope")


def test_out_of_domain_instances_are_skipped():
    v = check_mu_property(mu_cum_cd(), "mu_PR_prime")
    assert v.holds and v.skipped > 0


def test_table_must_cover_domain():
    with pytest.raises(DomainMissError):
        ChoiceFunction(DomainFamily.power_set(A | B), {0: 0, A: A})
    with pytest.raises(DomainMissError):
        identity(FULL)(A | B | C | D)


def test_enumeration_count_three_elements():
    dom = DomainFamily.power_set(FULL, include_empty=False)
    assert count_choice_functions(dom) == 2**3 * 4**3 * 8 == 4096
    assert sum(1 for _ in enumerate_choice_functions(FULL, dom)) == 4096


def test_enumeration_single_element():
    assert sum(1 for _ in enumerate_choice_functions(A)) == 2


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        next(enumerate_choice_functions(FULL, cap=10))


def test_enumeration_is_deterministic_and_distinct():
    first = [f.table for f in enumerate_choice_functions(A | B)]
    second = [f.table for f in enumerate_choice_functions(A | B)]
    assert first == second
    assert len({tuple(sorted(t.items())) for t in first}) == len(first) == 2 * 2 * 4


def test_condition_catalogue():
    assert len(MU_CONDITIONS) == 20
    assert {c.group for c in MU_CONDITIONS.values()} == {"Basics", "Cumulativity", "Rationality"}


# -- independent oracle ------------------------------------------------------------


@given(choice_functions())
def test_every_condition_matches_oracle(f):
    t = fs_table(f)
    for prop in MU_CONDITIONS:
        assert check_mu_property(f, prop).holds == mu_oracle(prop, t), prop
        assert mu_holds(f, prop) == mu_oracle(prop, t), prop


def test_oracle_agrees_on_full_enumeration():
    """Every condition, every function with |U| = 2 (256 functions)."""
    for f in enumerate_choice_functions(A | B):
        t = fs_table(f)
        for prop in MU_CONDITIONS:
            assert mu_holds(f, prop) == mu_oracle(prop, t), (prop, f.table)


@given(choice_functions())
def test_witnesses_are_genuine_violations(f):
    for v in check_all_mu(f):
        assert (v.witness is None) == v.holds
        if not v.holds:
            assert witness_fails(f, v.property_id, v.witness)


@given(choice_functions())
def test_weak_or_bound(f):
    """(μwOR) with (μ⊆) bounds f(X∪Y) by f(X) ∪ f(Y) ∪ (X∩Y)."""
    if mu_holds(f, "mu_wOR") and mu_holds(f, "mu_sub"):
        sets = power_set(f.universe)
        for x in sets:
            for y in sets:
                assert f(x | y) & ~(f(x) | f(y) | (x & y)) == 0


def test_weak_or_bound_exhaustive():
    for f in enumerate_choice_functions(FULL):
        if mu_holds(f, "mu_wOR") and mu_holds(f, "mu_sub"):
            sets = f.domain.sets
            assert all(f(x | y) & ~(f(x) | f(y) | (x & y)) == 0 for x in sets for y in sets)

"""Revision, contraction and entrenchment on model sets."""

from __future__ import annotations

from itertools import product

from hypothesis import given
from hypothesis import strategies as st

from oracles import contraction_ok, fs, revision_ok, subsets
from prefkit.agm import (
    ContractionOperator,
    EntrenchmentRelation,
    RevisionOperator,
    all_hold,
    check_contraction,
    check_entrenchment,
    check_revision,
    contraction_from_entrenchment,
    contraction_from_revision,
    entrenchment_from_contraction,
    enumerate_contractions,
    enumerate_entrenchments,
    enumerate_revisions,
    revision_from_contraction,
)
from prefkit.logic import is_subset, power_set, size, submasks

U = 0b111


def verdicts(vs) -> dict[str, bool]:
    return {v.property_id: v.holds for v in vs}


def meet_or_all(base: int) -> RevisionOperator:
    return RevisionOperator(U, base, {a: (base & a) or a for a in power_set(U)})


def all_operators(n_max: int = 3):
    for n in range(1, n_max + 1):
        u = (1 << n) - 1
        for x in power_set(u, include_empty=False):
            yield u, x


# -- examples -------------------------------------------------------------------------


def test_meet_or_all_revision_report():
    v = verdicts(check_revision(meet_or_all(0b001)))
    assert set(v) == {"rev2", "rev3", "rev4", "rev5", "rev7", "rev8"}
    assert v["rev2"] and v["rev3"] and v["rev4"] and v["rev5"]


def test_meet_or_all_matches_oracle_for_every_base():
    for x in power_set(U, include_empty=False):
        op = meet_or_all(x)
        table = {fs(a): fs(r) for a, r in op.table.items()}
        assert all_hold(check_revision(op)) == revision_ok(fs(U), fs(x), table)


def test_empty_result_breaks_success():
    table = {a: a for a in power_set(U)}
    table[0b110] = 0
    v = verdicts(check_revision(RevisionOperator(U, 0b001, table)))
    assert not v["rev5"]


def test_complement_contraction_report():
    x = 0b001
    op = ContractionOperator(U, x, {a: x | (U & ~a) for a in power_set(U)})
    v = verdicts(check_contraction(op))
    assert v["con2"] and v["con4"]


def test_constant_contraction_breaks_recovery_of_non_tautologies():
    x = 0b001
    v = check_contraction(ContractionOperator(U, x, {a: x for a in power_set(U)}))
    con4 = next(p for p in v if p.property_id == "con4")
    assert not con4.holds
    a = con4.witness["A"]
    assert is_subset(x, a) and a != U


def test_size_entrenchment():
    sets = power_set(U)
    by_size = EntrenchmentRelation(U, 0b001, {(a, b) for a in sets for b in sets if size(a) <= size(b)})
    assert verdicts(check_entrenchment(by_size))["EE2"]
    reversed_ = EntrenchmentRelation(U, 0b001, {(a, b) for a in sets for b in sets if size(a) >= size(b)})
    assert not verdicts(check_entrenchment(reversed_))["EE2"]


def test_total_entrenchment():
    sets = power_set(U)
    v = verdicts(check_entrenchment(EntrenchmentRelation(U, 0b001, {(a, b) for a in sets for b in sets})))
    assert v["EE1"] and v["EE2"] and v["EE3"]
    assert not v["EE5"]


def test_empty_entrenchment_breaks_connectivity():
    v = verdicts(check_entrenchment(EntrenchmentRelation(U, 0b001, frozenset())))
    assert not v["EE3"]


# -- pointwise transforms ---------------------------------------------------------------


def test_revision_from_contraction_pointwise():
    x = 0b001
    table = {a: U for a in power_set(U)}
    rev = revision_from_contraction(ContractionOperator(U, x, table))
    assert all(rev(a) == a for a in power_set(U))
    con = ContractionOperator(U, x, {a: x | (U & ~a) for a in power_set(U)})
    rev = revision_from_contraction(con)
    for a in power_set(U):
        if is_subset(x, a):
            assert is_subset(x, rev(a))
    assert rev(U) == con(0) & U


def test_contraction_from_intersection_revision():
    x = 0b011
    rev = RevisionOperator(U, x, {a: x & a for a in power_set(U)})
    con = contraction_from_revision(rev)
    assert all(con(a) == x for a in power_set(U))


def test_contraction_from_entrenchment_top_and_empty_meet():
    x = 0b001
    rel = EntrenchmentRelation(U, x, frozenset())
    con = contraction_from_entrenchment(rel)
    assert con(U) == x
    assert all(con(a) == U for a in power_set(U) if a != U)


def test_entrenchment_from_contraction_cells():
    x = 0b001
    con = ContractionOperator(U, x, {a: x for a in power_set(U)})
    rel = entrenchment_from_contraction(con)
    assert rel.le(U, U)
    assert not rel.le(0b011, 0b011)


# -- exhaustive transfer ------------------------------------------------------------------


def test_enumerators_yield_only_valid_operators():
    for u, x in all_operators():
        for r in enumerate_revisions(u, x):
            assert revision_ok(fs(u), fs(x), {fs(a): fs(v) for a, v in r.table.items()})
        for c in enumerate_contractions(u, x):
            assert contraction_ok(fs(u), fs(x), {fs(a): fs(v) for a, v in c.table.items()})
        for e in enumerate_entrenchments(u, x):
            assert all_hold(check_entrenchment(e))


def test_revision_enumerator_is_complete_on_two_elements():
    u = 0b11
    sets = power_set(u)
    for x in power_set(u, include_empty=False):
        brute = set()
        for vals in product(*(submasks(a) for a in sets)):
            table = dict(zip(sets, vals))
            if revision_ok(fs(u), fs(x), {fs(a): fs(v) for a, v in table.items()}):
                brute.add(tuple(sorted(table.items())))
        got = {tuple(sorted(r.table.items())) for r in enumerate_revisions(u, x)}
        assert got == brute


def test_transforms_preserve_postulates():
    for u, x in all_operators():
        for r in enumerate_revisions(u, x):
            c = contraction_from_revision(r)
            assert all_hold(check_contraction(c))
            assert revision_from_contraction(c).table == r.table
        for c in enumerate_contractions(u, x):
            assert all_hold(check_revision(revision_from_contraction(c)))
            e = entrenchment_from_contraction(c)
            assert all_hold(check_entrenchment(e))
            assert contraction_from_entrenchment(e).table == c.table
        for e in enumerate_entrenchments(u, x):
            assert all_hold(check_contraction(contraction_from_entrenchment(e)))


def test_revision_induces_ranked_choice():
    """With (7) and (8): f(A)∩B ≠ ∅ ⇒ f(A∩B) = f(A)∩B for f(A) = X|A."""
    for u, x in all_operators():
        sets = power_set(u)
        for r in enumerate_revisions(u, x):
            for a in sets:
                for b in sets:
                    if r(a) & b:
                        assert r(a & b) == r(a) & b


@given(st.integers(1, U), st.data())
def test_checker_matches_oracle_on_random_tables(x, data):
    sets = power_set(U)
    rev = {a: data.draw(st.sampled_from(submasks(a))) for a in sets}
    rop = RevisionOperator(U, x, rev)
    assert all_hold(check_revision(rop)) == revision_ok(fs(U), fs(x), {fs(a): fs(v) for a, v in rev.items()})
    con = {a: x | data.draw(st.sampled_from(submasks(U))) for a in sets}
    cop = ContractionOperator(U, x, con)
    assert all_hold(check_contraction(cop)) == contraction_ok(
        fs(U), fs(x), {fs(a): fs(v) for a, v in con.items()}
    )


def test_oracle_subsets_helper():
    assert len(subsets({0, 1, 2})) == 8

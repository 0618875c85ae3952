"""Synthesis of preferential structures from choice functions."""

from __future__ import annotations

from prefkit.choice import ChoiceFunction, enumerate_choice_functions, mu_holds
from prefkit.logic import DomainFamily
from prefkit.pref import choice_of, is_smooth, structure_flags
from prefkit.synth import SynthOptions, Unsat, synth_structure

A, B, C = 1, 2, 4
FULL = A | B | C


def rank_copies() -> ChoiceFunction:
    dom = DomainFamily(A | B, (A, B, A | B))
    return ChoiceFunction(dom, {A: A, B: B, A | B: 0}, ("a", "b"))


def test_identity_gives_empty_relation():
    f = ChoiceFunction.from_callable(DomainFamily.power_set(FULL), lambda x: x)
    for opts in (SynthOptions(), SynthOptions(require_smooth=True, require_transitive=True),
                 SynthOptions(require_ranked=True, max_copies=1)):
        s = synth_structure(f, opts)
        assert not isinstance(s, Unsat)
        assert not s.attacks


def test_copies_cannot_be_ranked():
    f = rank_copies()
    for k in (1, 2, 3):
        out = synth_structure(f, SynthOptions(require_ranked=True, max_copies=k))
        assert isinstance(out, Unsat) and out.exhausted
        assert any(not v.holds for v in out.violations)


def test_copies_representable_without_ranking():
    f = rank_copies()
    s = synth_structure(f, SynthOptions(max_copies=2))
    assert not isinstance(s, Unsat)
    assert choice_of(s, f.domain).table == f.table
    assert not structure_flags(s).cycle_free or s.max_copies == 2


def test_two_copies_needed_for_a_single_pair_of_attackers():
    """One copy per model cannot kill a model with two separate attackers only."""
    # carrier {m, x, y}; f keeps m against x alone and against y alone, drops it
    # against both, so each attacker must hit a different copy of m.
    m, x, y = 1, 2, 4
    table = {0: 0, m: m, x: x, y: y, m | x: m | x, m | y: m | y, x | y: x | y, m | x | y: x | y}
    f = ChoiceFunction(DomainFamily.power_set(m | x | y), table)
    assert isinstance(synth_structure(f, SynthOptions(max_copies=1)), Unsat)
    s = synth_structure(f, SynthOptions(max_copies=2))
    assert not isinstance(s, Unsat) and choice_of(s, f.domain).table == f.table


def test_violated_condition_is_reported():
    f = ChoiceFunction.from_callable(DomainFamily.power_set(FULL), lambda x: B if x == A | B else x)
    out = synth_structure(f)
    assert isinstance(out, Unsat)
    assert [v.property_id for v in out.violations] == ["mu_PR"]


def test_unsat_is_falsy():
    assert not Unsat((), True, "")


def test_ranked_auxiliary_equivalence():
    """Under (μ=) and (μ⊆): f(Y)∩(X−f(X)) ≠ ∅ iff f(Y)∩X ≠ ∅ and f(Y)∩f(X) = ∅."""
    for f in enumerate_choice_functions(FULL):
        if not (mu_holds(f, "mu_eq") and mu_holds(f, "mu_sub")):
            continue
        sets = f.domain.sets
        for x in sets:
            for y in sets:
                left = bool(f(y) & (x & ~f(x)))
                right = bool(f(y) & x) and not (f(y) & f(x))
                assert left == right


def test_ranked_with_copies_on_singleton_domains():
    """(μ⊆)+(μPR)+(μ‖)+(μ∪)+(μ∈) with singletons: a ranked structure exists.

    With finitely many copies a cycle-free ranked structure never chooses the
    empty set from a non-empty one, so (μ∅) is added to the premises.
    """
    needed = ("mu_sub", "mu_PR", "mu_par", "mu_cup", "mu_in", "mu_empty")
    found = 0
    for f in enumerate_choice_functions(FULL):
        if not all(mu_holds(f, p) for p in needed):
            continue
        found += 1
        s = synth_structure(f, SynthOptions(require_ranked=True))
        assert not isinstance(s, Unsat), f.table
        assert choice_of(s, f.domain).table == f.table
    assert found > 0


def test_completeness_sweep_smoke():
    """A slice of the representation sweep (the full one is an acceptance test)."""
    for i, f in enumerate(enumerate_choice_functions(FULL)):
        if i % 97:
            continue
        if mu_holds(f, "mu_sub") and mu_holds(f, "mu_PR"):
            s = synth_structure(f)
            assert choice_of(s, f.domain).table == f.table
            if mu_holds(f, "mu_CUM"):
                s = synth_structure(f, SynthOptions(require_smooth=True, require_transitive=True))
                assert structure_flags(s).transitive and is_smooth(s, f.domain).holds

"""Preferential structures: minimal elements, order flags, layers, smoothness."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import relations
from oracles import fs, has_cycle, pref_mu, ranked, transitive
from prefkit.choice import mu_holds
from prefkit.errors import NotRankedError
from prefkit.logic import DomainFamily, members, power_set
from prefkit.pref import (
    PrefStructure,
    choice_of,
    from_layers,
    is_smooth,
    mu_of,
    rank_layers,
    structure_flags,
)

a, b, c, d = 0, 1, 2, 3
A, B, C, D = 1, 2, 4, 8
ABC = ("a", "b", "c")

RANKED_SOUND = ("mu_eq", "mu_par", "mu_cup", "mu_in", "mu_RatM")


def rel(pairs, n=3):
    return PrefStructure.from_relation(pairs, (1 << n) - 1, ABC[:n] if n <= 3 else None)


def test_unique_minimum():
    assert mu_of(rel([(a, b)], 2), A | B) == A


def test_two_copies_need_two_attackers():
    m, m2, m3 = 0, 1, 2
    s = PrefStructure(
        0b111,
        ((m, 0), (m, 1), (m2, 0), (m3, 0)),
        {((m2, 0), (m, 0)), ((m3, 0), (m, 1))},
    )
    assert mu_of(s, 0b111) == 0b110
    assert mu_of(s, 0b011) == 0b011
    assert mu_of(s, 0b101) == 0b101


def test_empty_relation_chooses_everything():
    s = rel([])
    for x in power_set(0b111):
        assert mu_of(s, x) == x


def test_transitive_chain_flags():
    f = structure_flags(rel([(a, b), (b, c), (a, c)]))
    assert f.as_dict() == {"irreflexive": True, "transitive": True, "cycle_free": True, "ranked": True}


def test_intransitive_chain_flags():
    f = structure_flags(rel([(a, b), (b, c)]))
    assert not f.transitive and not f.ranked
    assert f.witnesses.get("ranked") is not None


def test_two_cycle_flags():
    f = structure_flags(rel([(a, b), (b, a)], 2))
    assert not f.cycle_free


def test_layers_of_fork():
    layers = rank_layers(rel([(a, b), (a, c)]))
    assert layers == {(a, 0): 0, (b, 0): 1, (c, 0): 1}


def test_layers_of_antichain():
    assert set(rank_layers(rel([])).values()) == {0}


def test_layers_reject_non_modular():
    with pytest.raises(NotRankedError) as exc:
        rank_layers(rel([(a, b), (b, c)]))
    assert exc.value.witness is not None


def test_two_cycle_is_not_smooth():
    v = is_smooth(rel([(a, b), (b, a)], 2), DomainFamily.power_set(A | B))
    assert not v.holds
    assert v.witness == {"X": A | B, "node": (a, 0)}


def test_empty_relation_is_smooth():
    assert is_smooth(rel([]), DomainFamily.power_set(0b111)).holds


# -- oracles and invariants -----------------------------------------------------------


@st.composite
def structures(draw, max_elems: int = 3, max_copies: int = 2):
    n = draw(st.integers(1, max_elems))
    nodes = [(e, k) for e in range(n) for k in range(draw(st.integers(1, max_copies)))]
    pairs = [(u, v) for u in nodes for v in nodes]
    attacks = draw(st.sets(st.sampled_from(pairs), max_size=8))
    return PrefStructure((1 << n) - 1, tuple(nodes), frozenset(attacks))


@given(structures())
def test_minimal_elements_match_oracle(s):
    for x in power_set(s.carrier):
        assert fs(mu_of(s, x)) == pref_mu(s.nodes, s.attacks, fs(x))


@given(relations())
def test_flags_match_oracle(pair):
    carrier, relation = pair
    s = PrefStructure.from_relation(relation, carrier)
    flags = structure_flags(s)
    elems = members(carrier)
    assert flags.transitive == transitive(relation)
    assert flags.cycle_free == (not has_cycle(relation, elems))
    assert flags.ranked == ranked(relation, elems)


@given(structures())
def test_soundness(s):
    domain = DomainFamily.power_set(s.carrier)
    f = choice_of(s, domain)
    assert mu_holds(f, "mu_sub") and mu_holds(f, "mu_PR")
    if is_smooth(s, domain).holds:
        assert mu_holds(f, "mu_CUM")
    flags = structure_flags(s)
    if flags.ranked and flags.cycle_free:
        for p in RANKED_SOUND:
            assert mu_holds(f, p), p


@given(structures())
def test_ranked_cycle_free_is_transitive(s):
    flags = structure_flags(s)
    if flags.ranked and flags.cycle_free:
        assert flags.transitive


@given(structures())
def test_ranked_iff_layers_reconstruct(s):
    flags = structure_flags(s)
    if flags.ranked and flags.cycle_free:
        layers = rank_layers(s)
        assert from_layers(layers, s.carrier).attacks == s.attacks
        assert sorted(set(layers.values())) == list(range(len(set(layers.values()))))
    else:
        with pytest.raises(NotRankedError):
            rank_layers(s)


@given(structures())
def test_finite_transitive_cycle_free_is_smooth(s):
    flags = structure_flags(s)
    if flags.cycle_free and flags.transitive:
        assert is_smooth(s, DomainFamily.power_set(s.carrier)).holds


def test_intransitive_chain_is_not_smooth():
    """Without transitivity the attacker of c inside {a,b,c} is itself attacked."""
    v = is_smooth(rel([(a, b), (b, c)]), DomainFamily.power_set(0b111))
    assert not v.holds and v.witness == {"X": 0b111, "node": (c, 0)}

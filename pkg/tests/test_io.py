"""JSON codecs: round trips and input errors."""

from __future__ import annotations

import json
import random

import pytest

from prefkit import io
from prefkit.agm import ContractionOperator, EntrenchmentRelation, RevisionOperator
from prefkit.choice import ChoiceFunction, enumerate_choice_functions
from prefkit.consequence import logic_from_mu
from prefkit.distance import BinaryOperator, PseudoDistance, hamming
from prefkit.errors import InputError
from prefkit.logic import DomainFamily, Vocabulary, power_set
from prefkit.nabla import random_nstructure
from prefkit.pref import PrefStructure
from prefkit.size import Filter, random_ring, random_system

ABC = ("a", "b", "c")


def through_text(obj: dict) -> dict:
    return json.loads(io.dumps(obj))


def test_choice_round_trip():
    for i, f in enumerate(enumerate_choice_functions(0b111, labels=ABC)):
        if i % 211:
            continue
        g = io.choice_from_json(through_text(io.choice_to_json(f)))
        assert g.table == f.table and g.domain.sets == f.domain.sets and g.labels == f.labels


def test_structure_round_trip():
    s = PrefStructure(0b111, ((0, 0), (0, 1), (1, 0), (2, 0)), {((1, 0), (0, 0)), ((2, 0), (0, 1))}, ABC)
    t = io.structure_from_json(through_text(io.structure_to_json(s)))
    assert t.nodes == s.nodes and t.attacks == s.attacks and t.carrier == s.carrier


def test_logic_round_trip():
    vocab = Vocabulary(("p", "q"))
    f = ChoiceFunction.from_callable(DomainFamily.power_set(0b1111), lambda x: x & 0b0011 or x)
    c = logic_from_mu(f, vocab)
    c2, _ = io.logic_from_json(through_text(io.logic_to_json(c)))
    assert io.logic_to_json(c2) == io.logic_to_json(c)


def test_agm_round_trips():
    u, x = 0b111, 0b001
    rev = RevisionOperator(u, x, {a: (x & a) or a for a in power_set(u)})
    assert io.revision_from_json(through_text(io.agm_to_json(rev))).table == rev.table
    con = ContractionOperator(u, x, {a: x | (u & ~a) for a in power_set(u)})
    assert io.contraction_from_json(through_text(io.agm_to_json(con))).table == con.table
    sets = power_set(u)
    ee = EntrenchmentRelation(u, x, {(a, b) for a in sets for b in sets if bin(a).count("1") <= bin(b).count("1")})
    back = io.entrenchment_from_json(through_text(io.agm_to_json(ee)))
    assert all(back.le(a, b) == ee.le(a, b) for a in sets for b in sets)


def test_distance_and_operator_round_trips():
    d = hamming(Vocabulary(("p", "q")))
    d2 = io.distance_from_json(through_text(io.distance_to_json(d)))
    assert dict(d2.values) == dict(d.values)
    op = BinaryOperator.from_distance(d)
    assert io.binop_from_json(through_text(io.binop_to_json(op))).table == op.table
    asym = PseudoDistance(0b11, {(0, 0): 0, (1, 1): 0, (0, 1): 1, (1, 0): 2})
    assert dict(io.distance_from_json(through_text(io.distance_to_json(asym))).values) == dict(asym.values)


def test_size_round_trips():
    rng = random.Random(5)
    flt = Filter.principal(0b111, 0b001)
    back_flt = io.filter_from_json(through_text(io.filter_to_json(flt)))
    assert shape(back_flt) == shape(flt) and back_flt.is_principal()
    sys = random_system(random_ring(0b1111, rng), rng)
    back = io.system_from_json(through_text(io.system_to_json(sys)))
    assert {x: shape(f) for x, f in back.filters.items()} == {x: shape(f) for x, f in sys.filters.items()}
    m = random_nstructure(rng, 3)
    m2 = io.nstructure_from_json(through_text(io.nstructure_to_json(m)))
    assert m2.predicates == m.predicates
    assert {n: shape(f) for n, f in m2.nsystem.items()} == {n: shape(f) for n, f in m.nsystem.items()}


def shape(f: Filter) -> tuple:
    """The serialized content of a filter (the generator hint is not stored)."""
    return f.base, f.family, f.kind


def test_set_codec():
    assert io.decode_set(["a", "c"], ABC) == 0b101
    assert io.decode_set([0, 2]) == 0b101
    assert io.encode_set(0b101) == [0, 2]
    with pytest.raises(InputError):
        io.decode_set(["z"], ABC)


def test_malformed_inputs(tmp_path):
    with pytest.raises(InputError):
        io.choice_from_json({"universe": [0, 1]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        io.load_json(bad)
    with pytest.raises(InputError):
        io.load_json(tmp_path / "missing.json")


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1, 2]}) == io.dumps({"a": [1, 2], "b": 1})

"""JSON encodings of every artifact.

Sets of universe elements are arrays of element indices.  Any document may
carry a top-level ``"labels"`` array; elements can then also be written by
label.  Decoders raise :class:`~prefkit.errors.InputError` on malformed input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Sequence

from .agm import ContractionOperator, EntrenchmentRelation, RevisionOperator
from .choice import ChoiceFunction
from .consequence import ConsequenceOperator, TheoryPool
from .distance import BinaryOperator, PseudoDistance
from .errors import InputError, PrefkitError
from .logic import DomainFamily, ModelSet, Vocabulary, from_members, members, parse_theory
from .nabla import NStructure
from .pref import PrefStructure
from .size import Filter, FilterSystem

Labels = Optional[tuple[str, ...]]


def load_json(path: str | Path) -> dict:
    """Read a JSON object from ``path``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _labels(d: dict) -> Labels:
    lab = d.get("labels")
    if lab is None:
        return None
    if not isinstance(lab, list) or not all(isinstance(x, str) for x in lab):
        raise InputError("labels must be an array of strings")
    if len(set(lab)) != len(lab):
        raise InputError("labels must be distinct")
    return tuple(lab)


def _require(d: dict, key: str) -> Any:
    if key not in d:
        raise InputError(f"missing key {key!r}")
    return d[key]


def decode_element(v: Any, labels: Labels) -> int:
    if isinstance(v, bool):
        raise InputError(f"not an element: {v!r}")
    if isinstance(v, int):
        if v < 0:
            raise InputError(f"negative element {v}")
        return v
    if isinstance(v, str) and labels is not None and v in labels:
        return labels.index(v)
    raise InputError(f"unknown element {v!r}")


def decode_set(v: Any, labels: Labels = None) -> ModelSet:
    if not isinstance(v, list):
        raise InputError(f"a set must be an array, got {v!r}")
    return from_members(decode_element(e, labels) for e in v)


def encode_set(s: ModelSet) -> list[int]:
    return members(s)


def _with_labels(out: dict, labels: Labels) -> dict:
    if labels:
        out["labels"] = list(labels)
    return out


def _pairs(v: Any, arity: int, what: str) -> list:
    if not isinstance(v, list) or not all(isinstance(p, list) and len(p) == arity for p in v):
        raise InputError(f"{what} must be an array of {arity}-element arrays")
    return v


def _wrap(fn, *args):
    try:
        return fn(*args)
    except PrefkitError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(str(exc)) from None


# -- vocabulary and domains ---------------------------------------------------


def vocab_from_json(v: Any) -> Vocabulary:
    if not isinstance(v, list) or not all(isinstance(a, str) for a in v):
        raise InputError("a vocabulary must be an array of atom names")
    return _wrap(Vocabulary, tuple(v))


# -- choice functions -----------------------------------------------------------


def choice_to_json(f: ChoiceFunction) -> dict:
    return _with_labels(
        {
            "universe": encode_set(f.universe),
            "domain": [encode_set(x) for x in f.domain.sets],
            "map": [[encode_set(x), encode_set(f(x))] for x in f.domain.sets],
        },
        f.labels,
    )


def choice_from_json(d: dict) -> ChoiceFunction:
    labels = _labels(d)
    table = {decode_set(x, labels): decode_set(y, labels) for x, y in _pairs(_require(d, "map"), 2, "map")}
    domain_sets = [decode_set(x, labels) for x in d.get("domain", [])] or list(table)
    universe = decode_set(d["universe"], labels) if "universe" in d else 0
    for x in domain_sets:
        universe |= x
    return _wrap(ChoiceFunction, _wrap(DomainFamily, universe, domain_sets), table, labels)


# -- consequence operators ------------------------------------------------------


def logic_from_json(d: dict) -> tuple[ConsequenceOperator, Optional[TheoryPool]]:
    """``{"vocab": [...], "universe": [...], "map": [[X, fX], ...], "pool": [[formula, ...], ...]}``.

    Model sets are arrays of model indices.  ``pool`` (optional) lists the
    theories over which the rules are checked; by default every model set's
    canonical theory is used.
    """
    vocab = vocab_from_json(_require(d, "vocab"))
    universe = decode_set(d["universe"]) if "universe" in d else vocab.full
    table = {decode_set(x): decode_set(y) for x, y in _pairs(_require(d, "map"), 2, "map")}
    c = _wrap(ConsequenceOperator, vocab, universe, table)
    pool = None
    if "pool" in d:
        theories = tuple(parse_theory(t, vocab) for t in d["pool"])
        pool = _wrap(TheoryPool, vocab, universe, theories)
    return c, pool


def logic_to_json(c: ConsequenceOperator) -> dict:
    return {
        "vocab": list(c.vocab.atoms),
        "universe": encode_set(c.universe),
        "map": [[encode_set(x), encode_set(y)] for x, y in sorted(c.table.items())],
    }


# -- preferential structures ----------------------------------------------------


def structure_to_json(s: PrefStructure) -> dict:
    return _with_labels(
        {
            "carrier": encode_set(s.carrier),
            "nodes": [list(n) for n in s.nodes],
            "attacks": [[list(u), list(v)] for u, v in sorted(s.attacks)],
        },
        s.labels,
    )


def structure_from_json(d: dict) -> PrefStructure:
    labels = _labels(d)

    def node(v):
        if not isinstance(v, list) or len(v) != 2 or not isinstance(v[1], int):
            raise InputError(f"a node must be [element, copy], got {v!r}")
        return (decode_element(v[0], labels), v[1])

    nodes = tuple(node(n) for n in _require(d, "nodes"))
    attacks = frozenset((node(u), node(v)) for u, v in _pairs(d.get("attacks", []), 2, "attacks"))
    carrier = decode_set(d["carrier"], labels) if "carrier" in d else from_members(e for e, _ in nodes)
    return _wrap(PrefStructure, carrier, nodes, attacks, labels)


# -- AGM -----------------------------------------------------------------------------


def _agm_table(d: dict, labels: Labels) -> tuple[ModelSet, ModelSet, dict]:
    table = {decode_set(a, labels): decode_set(r, labels) for a, r in _pairs(_require(d, "map"), 2, "map")}
    universe = decode_set(d["universe"], labels) if "universe" in d else 0
    for a in table:
        universe |= a
    return universe, decode_set(_require(d, "base"), labels), table


def revision_from_json(d: dict) -> RevisionOperator:
    u, base, table = _agm_table(d, _labels(d))
    return _wrap(RevisionOperator, u, base, table)


def contraction_from_json(d: dict) -> ContractionOperator:
    u, base, table = _agm_table(d, _labels(d))
    return _wrap(ContractionOperator, u, base, table)


def entrenchment_from_json(d: dict) -> EntrenchmentRelation:
    labels = _labels(d)
    pairs = frozenset(
        (decode_set(a, labels), decode_set(b, labels)) for a, b in _pairs(_require(d, "rel"), 2, "rel")
    )
    universe = decode_set(d["universe"], labels) if "universe" in d else 0
    for a, b in pairs:
        universe |= a | b
    return _wrap(EntrenchmentRelation, universe, decode_set(_require(d, "base"), labels), pairs)


def agm_to_json(op: RevisionOperator | ContractionOperator | EntrenchmentRelation) -> dict:
    out = {"universe": encode_set(op.universe), "base": encode_set(op.base)}
    if isinstance(op, EntrenchmentRelation):
        out["rel"] = [[encode_set(a), encode_set(b)] for a, b in sorted(op.pairs)]
    else:
        out["map"] = [[encode_set(a), encode_set(r)] for a, r in sorted(op.table.items())]
    return out


# -- distances ------------------------------------------------------------------


def distance_to_json(d: PseudoDistance) -> dict:
    return _with_labels(
        {
            "universe": encode_set(d.universe),
            "pairs": [[u, v, r] for (u, v), r in sorted(d.values.items())],
            "symmetric": d.symmetric,
            "respects_identity": d.respects_identity,
        },
        d.labels,
    )


def distance_from_json(d: dict) -> PseudoDistance:
    labels = _labels(d)
    values = {}
    for u, v, r in _pairs(_require(d, "pairs"), 3, "pairs"):
        if not isinstance(r, int) or isinstance(r, bool):
            raise InputError(f"distance rank must be an integer, got {r!r}")
        values[(decode_element(u, labels), decode_element(v, labels))] = r
    universe = decode_set(d["universe"], labels) if "universe" in d else from_members(
        e for pair in values for e in pair
    )
    dist = _wrap(PseudoDistance, universe, values, labels)
    for flag in ("symmetric", "respects_identity"):
        if flag in d and bool(d[flag]) != getattr(dist, flag):
            raise InputError(f"declared {flag}={d[flag]} does not match the distance")
    return dist


def binop_to_json(op: BinaryOperator) -> dict:
    out = {
        "universe": encode_set(op.universe),
        "family": [encode_set(x) for x in op.family.sets],
        "map": [[encode_set(x), encode_set(y), encode_set(z)] for (x, y), z in sorted(op.table.items())],
    }
    if op.partial:
        out["partial"] = True
    return _with_labels(out, op.labels)


def binop_from_json(d: dict) -> BinaryOperator:
    labels = _labels(d)
    table = {
        (decode_set(x, labels), decode_set(y, labels)): decode_set(z, labels)
        for x, y, z in _pairs(_require(d, "map"), 3, "map")
    }
    if "family" in d:
        sets = [decode_set(x, labels) for x in d["family"]]
    else:
        sets = sorted({s for pair in table for s in pair})
    universe = decode_set(d["universe"], labels) if "universe" in d else 0
    for s in sets:
        universe |= s
    family = _wrap(DomainFamily, universe, sets)
    return _wrap(BinaryOperator, family, table, labels, bool(d.get("partial", False)))


# -- size -------------------------------------------------------------------------


def filter_to_json(f: Filter) -> dict:
    return {"base": encode_set(f.base), "family": [encode_set(a) for a in f.sorted_family()], "kind": f.kind}


def filter_from_json(d: dict, labels: Labels = None) -> Filter:
    labels = _labels(d) or labels
    fam = frozenset(decode_set(a, labels) for a in _require(d, "family"))
    return _wrap(Filter, decode_set(_require(d, "base"), labels), fam, d.get("kind", "strong"))


def system_to_json(sys: FilterSystem) -> dict:
    return {
        "universe": encode_set(sys.domain.universe),
        "filters": [[encode_set(x), filter_to_json(sys[x])] for x in sys.domain.sets],
    }


def system_from_json(d: dict) -> FilterSystem:
    labels = _labels(d)
    entries = _pairs(_require(d, "filters"), 2, "filters")
    filters = {decode_set(x, labels): filter_from_json(f, labels) for x, f in entries}
    universe = decode_set(d["universe"], labels) if "universe" in d else 0
    for x in filters:
        universe |= x
    return _wrap(FilterSystem, _wrap(DomainFamily, universe, list(filters)), filters)


def nstructure_to_json(m: NStructure) -> dict:
    return {
        "domain": m.size,
        "predicates": {k: encode_set(v) for k, v in sorted(m.predicates.items())},
        "nsystem": [[encode_set(n), filter_to_json(f)] for n, f in sorted(m.nsystem.items())],
    }


def nstructure_from_json(d: dict) -> NStructure:
    size = _require(d, "domain")
    if not isinstance(size, int) or isinstance(size, bool):
        raise InputError("domain must be the number of elements")
    preds = d.get("predicates", {})
    if not isinstance(preds, dict):
        raise InputError("predicates must be an object")
    predicates = {k: decode_set(v) for k, v in preds.items()}
    system = {decode_set(n): filter_from_json(f) for n, f in _pairs(d.get("nsystem", []), 2, "nsystem")}
    return _wrap(NStructure, size, predicates, system)


def formulas_from_json(v: Any) -> list[str]:
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise InputError("expected an array of formula strings")
    return list(v)


def labels_of(d: dict) -> Labels:
    return _labels(d)


def set_names(s: ModelSet, labels: Sequence[str] | None) -> list:
    """Members of ``s`` as labels when available, else indices (for reports)."""
    return [labels[e] if labels and e < len(labels) else e for e in members(s)]

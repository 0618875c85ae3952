"""Belief revision, contraction and epistemic entrenchment on model sets.

All three kinds of operator are stated semantically for a fixed base set ``X``
(the models of the belief set) inside a finite universe ``U``:

* revision ``A ↦ X | A``,
* contraction ``A ↦ X ⊖ A``,
* entrenchment, a relation ``A ≤_X B`` between subsets of ``U``.

Checks quantify over every subset of the universe; complements are relative
to ``U``.  The module also provides the four translations between the
operators and an exhaustive generator of operators satisfying the postulates
on small universes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .choice import PropertyVerdict
from .errors import DomainMissError
from .logic import ModelSet, is_subset, members, power_set, submasks


def _check_table(universe: ModelSet, base: ModelSet, table: Mapping[ModelSet, ModelSet]) -> dict:
    if not is_subset(base, universe):
        raise ValueError("base is not inside the universe")
    out = dict(table)
    for a in power_set(universe):
        if a not in out:
            raise DomainMissError(a, f"operator has no value for {sorted(members(a))}")
    for a, r in out.items():
        if not is_subset(a, universe) or not is_subset(r, universe):
            raise ValueError("operator value leaves the universe")
    return out


@dataclass(frozen=True)
class RevisionOperator:
    """``X | A`` for every subset ``A`` of the universe."""

    universe: ModelSet
    base: ModelSet
    table: Mapping[ModelSet, ModelSet] = field(hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _check_table(self.universe, self.base, self.table))

    def __call__(self, a: ModelSet) -> ModelSet:
        return self.table[a]


@dataclass(frozen=True)
class ContractionOperator:
    """``X ⊖ A`` for every subset ``A`` of the universe."""

    universe: ModelSet
    base: ModelSet
    table: Mapping[ModelSet, ModelSet] = field(hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _check_table(self.universe, self.base, self.table))

    def __call__(self, a: ModelSet) -> ModelSet:
        return self.table[a]


@dataclass(frozen=True)
class EntrenchmentRelation:
    """``A ≤_X B`` as a set of pairs of subsets of the universe."""

    universe: ModelSet
    base: ModelSet
    pairs: frozenset[tuple[ModelSet, ModelSet]]

    def __post_init__(self) -> None:
        pairs = frozenset((a, b) for a, b in self.pairs)
        for a, b in pairs:
            if not is_subset(a, self.universe) or not is_subset(b, self.universe):
                raise ValueError("entrenchment pair leaves the universe")
        object.__setattr__(self, "pairs", pairs)

    def le(self, a: ModelSet, b: ModelSet) -> bool:
        return (a, b) in self.pairs

    def lt(self, a: ModelSet, b: ModelSet) -> bool:
        return (a, b) in self.pairs and (b, a) not in self.pairs


# ---------------------------------------------------------------------------
# Postulate checks
# ---------------------------------------------------------------------------


def _run(pid: str, instances: Iterator[tuple[dict, bool]]) -> PropertyVerdict:
    checked = 0
    for inst, ok in instances:
        checked += 1
        if not ok:
            return PropertyVerdict(pid, False, inst, checked)
    return PropertyVerdict(pid, True, None, checked)


REVISION_POSTULATES = {
    "rev2": "X|A ⊆ A",
    "rev3": "X ∩ A ⊆ X|A",
    "rev4": "X ∩ A ≠ ∅ ⇒ X|A ⊆ X ∩ A",
    "rev5": "X|A = ∅ ⇒ A = ∅",
    "rev7": "(X|A) ∩ B ⊆ X|(A ∩ B)",
    "rev8": "(X|A) ∩ B ≠ ∅ ⇒ X|(A ∩ B) ⊆ (X|A) ∩ B",
}

CONTRACTION_POSTULATES = {
    "con2": "X ⊆ X⊖A",
    "con3": "X ⊈ A ⇒ X⊖A = X",
    "con4": "A ≠ U ⇒ X⊖A ⊈ A",
    "con5": "(X⊖A) ∩ A ⊆ X",
    "con7": "X⊖(A ∩ B) ⊆ (X⊖A) ∪ (X⊖B)",
    "con8": "X⊖(A ∩ B) ⊈ A ⇒ X⊖A ⊆ X⊖(A ∩ B)",
}

ENTRENCHMENT_POSTULATES = {
    "EE1": "A ≤ B, B ≤ C ⇒ A ≤ C",
    "EE2": "A ⊆ B ⇒ A ≤ B",
    "EE3": "A ≤ A ∩ B or B ≤ A ∩ B",
    "EE4": "X ≠ ∅ ⇒ (X ⊈ A iff A ≤ B for all B)",
    "EE5": "(B ≤ A for all B) ⇒ A = U",
}


def check_revision(op: RevisionOperator) -> list[PropertyVerdict]:
    """Check the revision postulates (2)–(5), (7), (8)."""
    x, r = op.base, op.table
    sets = power_set(op.universe)
    return [
        _run("rev2", (({"A": a}, is_subset(r[a], a)) for a in sets)),
        _run("rev3", (({"A": a}, is_subset(x & a, r[a])) for a in sets)),
        _run("rev4", (({"A": a}, not (x & a) or is_subset(r[a], x & a)) for a in sets)),
        _run("rev5", (({"A": a}, r[a] != 0 or a == 0) for a in sets)),
        _run("rev7", (({"A": a, "B": b}, is_subset(r[a] & b, r[a & b])) for a in sets for b in sets)),
        _run(
            "rev8",
            (
                ({"A": a, "B": b}, not (r[a] & b) or is_subset(r[a & b], r[a] & b))
                for a in sets
                for b in sets
            ),
        ),
    ]


def check_contraction(op: ContractionOperator) -> list[PropertyVerdict]:
    """Check the contraction postulates (2)–(5), (7), (8)."""
    x, c, u = op.base, op.table, op.universe
    sets = power_set(u)
    return [
        _run("con2", (({"A": a}, is_subset(x, c[a])) for a in sets)),
        _run("con3", (({"A": a}, is_subset(x, a) or c[a] == x) for a in sets)),
        _run("con4", (({"A": a}, a == u or not is_subset(c[a], a)) for a in sets)),
        _run("con5", (({"A": a}, is_subset(c[a] & a, x)) for a in sets)),
        _run(
            "con7",
            (({"A": a, "B": b}, is_subset(c[a & b], c[a] | c[b])) for a in sets for b in sets),
        ),
        _run(
            "con8",
            (
                ({"A": a, "B": b}, is_subset(c[a & b], a) or is_subset(c[a], c[a & b]))
                for a in sets
                for b in sets
            ),
        ),
    ]


def check_entrenchment(rel: EntrenchmentRelation) -> list[PropertyVerdict]:
    """Check the entrenchment postulates EE1–EE5."""
    x, u = rel.base, rel.universe
    sets = power_set(u)
    le = rel.le

    def ee4():
        for a in sets:
            top = all(le(a, b) for b in sets)
            yield {"A": a}, x == 0 or ((not is_subset(x, a)) == top)

    return [
        _run(
            "EE1",
            (
                ({"A": a, "B": b, "C": c}, not (le(a, b) and le(b, c)) or le(a, c))
                for a in sets
                for b in sets
                for c in sets
            ),
        ),
        _run("EE2", (({"A": a, "B": b}, not is_subset(a, b) or le(a, b)) for a in sets for b in sets)),
        _run(
            "EE3",
            (({"A": a, "B": b}, le(a, a & b) or le(b, a & b)) for a in sets for b in sets),
        ),
        _run("EE4", ee4()),
        _run("EE5", (({"A": a}, not all(le(b, a) for b in sets) or a == u) for a in sets)),
    ]


def all_hold(verdicts: list[PropertyVerdict]) -> bool:
    return all(v.holds for v in verdicts)


# ---------------------------------------------------------------------------
# Translations
# ---------------------------------------------------------------------------


def revision_from_contraction(op: ContractionOperator) -> RevisionOperator:
    """``X | A = (X ⊖ ∁A) ∩ A``."""
    u = op.universe
    return RevisionOperator(u, op.base, {a: op.table[u & ~a] & a for a in power_set(u)})


def contraction_from_revision(op: RevisionOperator) -> ContractionOperator:
    """``X ⊖ A = X ∪ (X | ∁A)``."""
    u = op.universe
    return ContractionOperator(u, op.base, {a: op.base | op.table[u & ~a] for a in power_set(u)})


def contraction_from_entrenchment(rel: EntrenchmentRelation) -> ContractionOperator:
    """``X ⊖ A = X`` if ``A = U``, else ``⋂{B : X ⊆ B ⊆ U, A <_X A ∪ B}``.

    An empty intersection is ``U``.
    """
    u, x = rel.universe, rel.base
    table = {}
    for a in power_set(u):
        if a == u:
            table[a] = x
            continue
        acc = u
        for b in power_set(u):
            if is_subset(x, b) and rel.lt(a, a | b):
                acc &= b
        table[a] = acc
    return ContractionOperator(u, x, table)


def entrenchment_from_contraction(op: ContractionOperator) -> EntrenchmentRelation:
    """``A ≤_X B`` iff ``A = B = U`` or ``X ⊖ (A ∩ B) ⊈ A``."""
    u = op.universe
    sets = power_set(u)
    pairs = frozenset(
        (a, b)
        for a in sets
        for b in sets
        if (a == u and b == u) or not is_subset(op.table[a & b], a)
    )
    return EntrenchmentRelation(u, op.base, pairs)


# ---------------------------------------------------------------------------
# Exhaustive generation on small universes
# ---------------------------------------------------------------------------


def enumerate_revisions(universe: ModelSet, base: ModelSet) -> Iterator[RevisionOperator]:
    """Every revision operator on ``base`` satisfying all revision postulates.

    Postulates (2)–(5) fix ``X | A = X ∩ A`` when that is non-empty, ``∅`` for
    ``A = ∅`` and leave a non-empty subset of ``A`` otherwise; all such
    candidates are generated and filtered by (7) and (8).
    """
    sets = power_set(universe)
    free = [a for a in sets if a and not a & base]
    fixed = {a: base & a for a in sets if a not in free}
    choices = [submasks(a)[1:] for a in free]
    for vals in product(*choices):
        table = dict(fixed)
        table.update(zip(free, vals))
        op = RevisionOperator(universe, base, table)
        if all_hold(check_revision(op)):
            yield op


def enumerate_contractions(universe: ModelSet, base: ModelSet) -> Iterator[ContractionOperator]:
    """Every contraction operator on ``base`` satisfying all contraction postulates.

    Postulates (2)–(5) force ``X ⊖ A = X`` unless ``X ⊆ A ≠ U``, where the
    value is ``X`` plus a non-empty subset of ``∁A``; candidates are filtered by
    (7) and (8).
    """
    sets = power_set(universe)
    free = [a for a in sets if is_subset(base, a) and a != universe]
    fixed = {a: base for a in sets if a not in free}
    choices = [[base | s for s in submasks(universe & ~a)[1:]] for a in free]
    for vals in product(*choices):
        table = dict(fixed)
        table.update(zip(free, vals))
        op = ContractionOperator(universe, base, table)
        if all_hold(check_contraction(op)):
            yield op


def enumerate_entrenchments(universe: ModelSet, base: ModelSet) -> Iterator[EntrenchmentRelation]:
    """Every entrenchment relation on ``base`` satisfying EE1–EE5.

    EE1–EE3 make ``≤`` a total preorder extending ``⊆``, so candidates are
    generated as monotone level assignments and filtered by the postulates.
    """
    sets = power_set(universe)  # ascending ints: subsets come before supersets
    n = len(sets)
    levels: dict[ModelSet, int] = {}

    def rec(i: int) -> Iterator[dict[ModelSet, int]]:
        if i == n:
            used = sorted(set(levels.values()))
            if used == list(range(len(used))):
                yield dict(levels)
            return
        a = sets[i]
        low = max((levels[b] for b in sets[:i] if is_subset(b, a)), default=0)
        for lv in range(low, n):
            levels[a] = lv
            yield from rec(i + 1)
        del levels[a]

    for lv in rec(0):
        pairs = frozenset((a, b) for a in sets for b in sets if lv[a] <= lv[b])
        rel = EntrenchmentRelation(universe, base, pairs)
        if all_hold(check_entrenchment(rel)):
            yield rel

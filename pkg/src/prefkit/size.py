"""Abstract size: filters, ideals and their coherence across base sets.

A :class:`Filter` on a base set ``X`` lists the *big* subsets of ``X``; their
complements relative to ``X`` are the *small* subsets (the ideal), everything
else has *medium* size.  A :class:`FilterSystem` assigns a filter to every
base set of a domain family, and the coherence conditions relate the filters
of different base sets.

The bridge to choice functions maps ``f`` to the principal system
``F(X) = {X' : f(X) ⊆ X' ⊆ X}`` and back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .choice import ChoiceFunction, PropertyVerdict, mu_holds
from .errors import ClosureError, InputError, PreconditionError
from .logic import DomainFamily, ModelSet, is_subset, submasks

FILTER_KINDS = ("strong", "weak")

FILTER_CONDITIONS = {
    "FAll": "X ∈ F(X)",
    "F_up": "A ⊆ B ⊆ X, A ∈ F(X) ⇒ B ∈ F(X)",
    "F_cap": "A, B ∈ F(X) ⇒ A ∩ B ∈ F(X)",
    "F_cap_prime": "A, B ∈ F(X) ⇒ A ∩ B ≠ ∅",
}

IDEAL_CONDITIONS = {
    "I_empty": "∅ ∈ I(X)",
    "I_down": "A ⊆ B ⊆ X, B ∈ I(X) ⇒ A ∈ I(X)",
    "I_cup": "A, B ∈ I(X) ⇒ A ∪ B ∈ I(X)",
    "I_cup_prime": "A, B ∈ I(X) ⇒ A ∪ B ≠ X",
}

COHERENCE_CONDITIONS = {
    "R_up": "X ⊆ Y ⇒ I(X) ⊆ I(Y)",
    "R_down": "A, B ∈ I(X) ⇒ A − B ∈ I(X − B)",
    "R_downdown": "A ∈ I(X), B ∉ F(X) ⇒ A − B ∈ I(X − B)",
    "R_cup_disj": "A ∈ I(X), B ∈ I(Y), X ∩ Y = ∅ ⇒ A ∪ B ∈ I(X ∪ Y)",
}

COHERENCE_VERSIONS = {
    "R_up": ("v1",),
    "R_down": ("v1", "v2"),
    "R_downdown": ("v1", "v2", "v3"),
    "R_cup_disj": ("v1",),
}


def _principal_family(base: ModelSet, generator: ModelSet) -> frozenset[ModelSet]:
    rest = base & ~generator
    return frozenset(generator | s for s in submasks(rest))


@dataclass(frozen=True)
class Filter:
    """A family of big subsets of ``base``.

    ``kind`` records whether the family is meant as a (strong) filter or a
    weak filter; :func:`check_filter` verifies the claim.  ``generator``, when
    given, must regenerate the family as ``{A : generator ⊆ A ⊆ base}``.
    """

    base: ModelSet
    family: frozenset[ModelSet]
    kind: str = "strong"
    generator: Optional[ModelSet] = None

    def __post_init__(self) -> None:
        fam = frozenset(int(a) for a in self.family)
        object.__setattr__(self, "family", fam)
        if self.kind not in FILTER_KINDS:
            raise InputError(f"unknown filter kind {self.kind!r}")
        for a in fam:
            if not is_subset(a, self.base):
                raise InputError(f"filter member {a:#b} is not a subset of the base {self.base:#b}")
        if self.generator is not None:
            if not is_subset(self.generator, self.base):
                raise InputError("filter generator is not a subset of the base")
            if _principal_family(self.base, self.generator) != fam:
                raise InputError("filter generator does not regenerate the family")

    @classmethod
    def principal(cls, base: ModelSet, generator: ModelSet, kind: str = "strong") -> "Filter":
        """``{A : generator ⊆ A ⊆ base}``."""
        return cls(base, _principal_family(base, generator), kind, generator)

    def sorted_family(self) -> list[ModelSet]:
        return sorted(self.family)

    def big(self, a: ModelSet) -> bool:
        return a in self.family

    @property
    def ideal(self) -> frozenset[ModelSet]:
        """The small sets: complements of big sets relative to the base."""
        return frozenset(self.base & ~a for a in self.family)

    def small(self, a: ModelSet) -> bool:
        return (self.base & ~a) in self.family

    def not_small(self, a: ModelSet) -> bool:
        """Membership in ``M⁺``: medium or big."""
        return not self.small(a)

    def medium(self, a: ModelSet) -> bool:
        return not self.small(a) and not self.big(a)

    def smallest(self) -> Optional[ModelSet]:
        """The member contained in all others, if there is one."""
        if not self.family:
            return None
        core = self.base
        for a in self.family:
            core &= a
        return core if core in self.family else None

    def is_principal(self) -> bool:
        g = self.smallest()
        return g is not None and _principal_family(self.base, g) == self.family

    def is_ultrafilter(self) -> bool:
        return all(
            a in self.family or (self.base & ~a) in self.family for a in submasks(self.base)
        )


@dataclass(frozen=True)
class FilterCheck:
    """Filter and ideal conditions of one filter, plus its classification."""

    verdicts: tuple[PropertyVerdict, ...]
    principal_generator: Optional[ModelSet]
    ultrafilter: bool

    def holds(self, prop: str) -> bool:
        return next(v.holds for v in self.verdicts if v.property_id == prop)

    @property
    def is_filter(self) -> bool:
        return all(self.holds(p) for p in ("FAll", "F_up", "F_cap"))

    @property
    def is_weak_filter(self) -> bool:
        return all(self.holds(p) for p in ("FAll", "F_up", "F_cap_prime"))

    def kind_ok(self, kind: str) -> bool:
        return self.is_filter if kind == "strong" else self.is_weak_filter


def _family_verdicts(base: ModelSet, fam: frozenset[ModelSet], dual: bool) -> list[PropertyVerdict]:
    """Filter conditions on ``fam`` (or ideal conditions when ``dual``)."""
    subsets = submasks(base)
    members = sorted(fam)
    out = []
    name_all, name_mono, name_join, name_weak = (
        ("I_empty", "I_down", "I_cup", "I_cup_prime") if dual else ("FAll", "F_up", "F_cap", "F_cap_prime")
    )
    top = 0 if dual else base
    out.append(
        PropertyVerdict(name_all, top in fam, None if top in fam else {"X": base}, 1)
    )

    def mono():
        checked = 0
        for a in members:
            for b in subsets:
                related = is_subset(b, a) if dual else is_subset(a, b)
                if not related:
                    continue
                checked += 1
                if b not in fam:
                    return PropertyVerdict(name_mono, False, {"A": a, "B": b}, checked)
        return PropertyVerdict(name_mono, True, None, checked)

    def join(strict: bool, name: str):
        checked = 0
        for i, a in enumerate(members):
            for b in members[i:]:
                checked += 1
                c = (a | b) if dual else (a & b)
                ok = (c != base) if (strict and dual) else (c != 0) if strict else (c in fam)
                if not ok:
                    return PropertyVerdict(name, False, {"A": a, "B": b}, checked)
        return PropertyVerdict(name, True, None, checked)

    out.append(mono())
    out.append(join(False, name_join))
    out.append(join(True, name_weak))
    return out


def check_filter(flt: Filter) -> FilterCheck:
    """Filter conditions, the dual ideal conditions, and a classification."""
    verdicts = _family_verdicts(flt.base, flt.family, dual=False)
    verdicts += _family_verdicts(flt.base, flt.ideal, dual=True)
    gen = flt.smallest() if flt.is_principal() else None
    return FilterCheck(tuple(verdicts), gen, flt.is_ultrafilter())


# ---------------------------------------------------------------------------
# Systems of filters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FilterSystem:
    """One filter per base set of a domain family."""

    domain: DomainFamily
    filters: Mapping[ModelSet, Filter] = field(hash=False)

    def __post_init__(self) -> None:
        filters = {int(x): f for x, f in dict(self.filters).items()}
        for x in self.domain.sets:
            if x not in filters:
                raise InputError(f"filter system lacks a filter for base {x:#b}")
        for x, f in filters.items():
            if x not in self.domain:
                raise InputError(f"filter for {x:#b} is outside the domain")
            if f.base != x:
                raise InputError(f"filter stored under {x:#b} has base {f.base:#b}")
        object.__setattr__(self, "filters", filters)

    def __getitem__(self, x: ModelSet) -> Filter:
        return self.filters[x]

    def big(self, x: ModelSet, a: ModelSet) -> bool:
        return self.filters[x].big(a)

    def small(self, x: ModelSet, a: ModelSet) -> bool:
        return self.filters[x].small(a)

    def not_small(self, x: ModelSet, a: ModelSet) -> bool:
        return self.filters[x].not_small(a)


def _run(pid: str, instances: Iterable[tuple[dict, Optional[bool]]], note: str = "") -> PropertyVerdict:
    checked = skipped = 0
    for inst, ok in instances:
        if ok is None:
            skipped += 1
            continue
        checked += 1
        if not ok:
            return PropertyVerdict(pid, False, inst, checked, skipped, note=note)
    return PropertyVerdict(pid, True, None, checked, skipped, note=note)


def _at(sys: FilterSystem, x: ModelSet) -> Optional[Filter]:
    """The filter over ``x``, or None when ``x`` is not a base of the system."""
    return sys.filters.get(x)


def _small_sets(sys: FilterSystem, x: ModelSet) -> list[ModelSet]:
    return sorted(sys[x].ideal)


def _big_sets(sys: FilterSystem, x: ModelSet) -> list[ModelSet]:
    return sorted(sys[x].family)


def _r_up(sys: FilterSystem):
    sets = sys.domain.sets
    for x in sets:
        for y in sets:
            if x == y or not is_subset(x, y):
                continue
            for a in _small_sets(sys, x):
                yield {"X": x, "Y": y, "A": a}, sys.small(y, a)


def _r_down_v1(sys: FilterSystem):
    for x in sys.domain.sets:
        small = _small_sets(sys, x)
        for b in small:
            target = _at(sys, x & ~b)
            for a in small:
                yield {"X": x, "A": a, "B": b}, None if target is None else target.small(a & ~b)


def _r_down_v2(sys: FilterSystem):
    for x in sys.domain.sets:
        for b in _small_sets(sys, x):
            target = _at(sys, x & ~b)
            for a in _big_sets(sys, x):
                yield {"X": x, "A": a, "B": b}, None if target is None else target.big(a & ~b)


def _r_downdown_v1(sys: FilterSystem):
    for x in sys.domain.sets:
        small = _small_sets(sys, x)
        for b in submasks(x):
            if sys.big(x, b):
                continue
            target = _at(sys, x & ~b)
            for a in small:
                yield {"X": x, "A": a, "B": b}, None if target is None else target.small(a & ~b)


def _r_downdown_v2(sys: FilterSystem):
    for x in sys.domain.sets:
        big = _big_sets(sys, x)
        for b in submasks(x):
            if sys.big(x, b):
                continue
            target = _at(sys, x & ~b)
            for a in big:
                yield {"X": x, "A": a, "B": b}, None if target is None else target.big(a & ~b)


def _r_downdown_v3(sys: FilterSystem):
    """Transitivity of "not small": A ∈ M⁺(X), X ∈ M⁺(Y) ⇒ A ∈ M⁺(Y)."""
    sets = sys.domain.sets
    for y in sets:
        for x in sets:
            if not is_subset(x, y) or not sys.not_small(y, x):
                continue
            for a in submasks(x):
                if sys.not_small(x, a):
                    yield {"X": x, "Y": y, "A": a}, sys.not_small(y, a)


def _r_cup_disj(sys: FilterSystem):
    sets = sys.domain.sets
    for x in sets:
        for y in sets:
            if x & y or (x | y) not in sys.domain:
                continue
            for a in _small_sets(sys, x):
                for b in _small_sets(sys, y):
                    yield {"X": x, "Y": y, "A": a, "B": b}, sys.small(x | y, a | b)


_VERSIONS = {
    ("R_up", "v1"): _r_up,
    ("R_down", "v1"): _r_down_v1,
    ("R_down", "v2"): _r_down_v2,
    ("R_downdown", "v1"): _r_downdown_v1,
    ("R_downdown", "v2"): _r_downdown_v2,
    ("R_downdown", "v3"): _r_downdown_v3,
    ("R_cup_disj", "v1"): _r_cup_disj,
}


def system_has_ideal_down(sys: FilterSystem) -> bool:
    """(I↓) for every filter of the system."""
    return all(check_filter(f).holds("I_down") for f in sys.filters.values())


def coherence_versions(sys: FilterSystem, cond: str) -> dict[str, PropertyVerdict]:
    """Evaluate every printed version of a coherence condition separately.

    The set-difference conditions need a domain closed under difference;
    instances whose reduced base ``X − B`` is still not a base (``B`` need not
    be one) are counted as skipped.  The
    third version of (R↓↓) is only claimed equivalent under (I↓); without it
    that version is reported with a note but still evaluated.
    """
    if cond not in COHERENCE_CONDITIONS:
        raise InputError(f"unknown coherence condition {cond!r}")
    if cond in ("R_down", "R_downdown") and not sys.domain.closed_difference:
        raise ClosureError(f"{cond} needs a domain closed under set difference")
    out = {}
    for v in COHERENCE_VERSIONS[cond]:
        note = ""
        if cond == "R_downdown" and v == "v3" and not system_has_ideal_down(sys):
            note = "system violates (I↓); this version is not claimed equivalent"
        out[v] = _run(f"{cond}.{v}", _VERSIONS[(cond, v)](sys), note)
    return out


def check_coherence(sys: FilterSystem, cond: str) -> PropertyVerdict:
    """A coherence condition, with all its printed versions cross-checked.

    The verdict holds when the first version holds.  Disagreement between
    versions is reported in ``note`` and, since the versions are claimed
    equivalent, also makes the verdict fail with ``witness["disagreement"]``.
    """
    versions = coherence_versions(sys, cond)
    claimed = {
        v: r for v, r in versions.items() if not r.note
    }
    first = versions["v1"]
    outcome = {v: r.holds for v, r in claimed.items()}
    note = ", ".join(f"{v}={'holds' if h else 'fails'}" for v, h in outcome.items())
    checked = sum(r.checked for r in versions.values())
    if len(set(outcome.values())) > 1:
        return PropertyVerdict(cond, False, {"disagreement": outcome}, checked, note=note)
    return PropertyVerdict(cond, first.holds, first.witness, checked, note=note)


def check_ideal_cup(sys: FilterSystem) -> PropertyVerdict:
    """(I∪) for every filter of the system, with the failing base as witness."""
    checked = 0
    for x in sys.domain.sets:
        v = next(v for v in check_filter(sys[x]).verdicts if v.property_id == "I_cup")
        checked += v.checked
        if not v.holds:
            return PropertyVerdict("I_cup", False, {"X": x, **v.witness}, checked)
    return PropertyVerdict("I_cup", True, None, checked)


# ---------------------------------------------------------------------------
# Bridge to choice functions
# ---------------------------------------------------------------------------


def filter_from_choice(f: ChoiceFunction) -> FilterSystem:
    """``F(X) = {X' : f(X) ⊆ X' ⊆ X}`` for every ``X`` in the domain."""
    if not mu_holds(f, "mu_sub"):
        raise PreconditionError("filter_from_choice needs f(X) ⊆ X everywhere")
    filters = {x: Filter.principal(x, f(x)) for x in f.domain.sets}
    return FilterSystem(f.domain, filters)


def choice_from_filter(sys: FilterSystem, labels=None) -> ChoiceFunction:
    """``f(X)`` := the smallest big subset of ``X``."""
    table = {}
    for x in sys.domain.sets:
        flt = sys[x]
        gen = flt.smallest() if flt.is_principal() else None
        if gen is None:
            raise PreconditionError(f"filter over {x:#b} is not principal")
        table[x] = gen
    return ChoiceFunction(sys.domain, table, labels)


@dataclass(frozen=True)
class RefClassRow:
    """A size condition (possibly combined) and the μ-condition it matches."""

    id: int
    size_conditions: tuple[str, ...]
    mu: str


REFCLASS_ROWS: dict[int, RefClassRow] = {
    r.id: r
    for r in [
        RefClassRow(1, ("R_up",), "mu_wOR"),
        RefClassRow(2, ("R_up", "I_cup"), "mu_OR"),
        RefClassRow(3, ("R_up", "I_cup"), "mu_PR"),
        RefClassRow(4, ("R_cup_disj",), "mu_disjOR"),
        RefClassRow(5, ("R_down",), "mu_CM"),
        RefClassRow(6, ("R_downdown",), "mu_RatM"),
    ]
}


def size_side_holds(sys: FilterSystem, conditions: Iterable[str]) -> tuple[bool, list[PropertyVerdict]]:
    verdicts = []
    for c in conditions:
        verdicts.append(check_ideal_cup(sys) if c == "I_cup" else check_coherence(sys, c))
    return all(v.holds for v in verdicts), verdicts


def check_refclass_row(row: int, f: ChoiceFunction) -> PropertyVerdict:
    """Both directions of one size/choice correspondence on ``f``.

    Direction 1 reads the size side on the principal system built from ``f``
    and the μ side on the choice function recovered from that system;
    direction 2 reads the μ side on ``f`` and the size side on the system
    built from it.  The verdict holds when both directions hold.
    """
    try:
        spec = REFCLASS_ROWS[row]
    except KeyError:
        raise InputError(f"unknown row {row!r}") from None
    if not f.domain.is_full_power_set:
        raise ClosureError("the size/choice correspondence is stated for full power-set domains")
    sys = filter_from_choice(f)
    back = choice_from_filter(sys, f.labels)
    left, left_verdicts = size_side_holds(sys, spec.size_conditions)
    right_from_sys = mu_holds(back, spec.mu)
    right = mu_holds(f, spec.mu)
    dir1 = (not left) or right_from_sys
    dir2 = (not right) or left
    note = f"size side {'holds' if left else 'fails'}, {spec.mu} {'holds' if right else 'fails'}"
    if dir1 and dir2:
        return PropertyVerdict(f"refclass_{row}", True, None, 1, note=note)
    failing = [v for v in left_verdicts if not v.holds]
    witness = {"direction": f"{row}.1" if not dir1 else f"{row}.2",
               "size": [v.property_id for v in failing]}
    return PropertyVerdict(f"refclass_{row}", False, witness, 1, note=note)


# ---------------------------------------------------------------------------
# Random systems
# ---------------------------------------------------------------------------

SYSTEM_MODES = ("principal", "weak", "upward")


def random_filter(base: ModelSet, rng: random.Random, mode: str) -> Filter:
    """A random filter over ``base``.

    * ``"principal"`` – a principal (strong) filter with a random generator;
    * ``"weak"`` – the upward closure of ``base`` plus random pairwise
      intersecting sets (a weak filter);
    * ``"upward"`` – the upward closure of random sets and ``base``: (FAll)
      and (F↑) hold, nothing else is guaranteed.
    """
    subs = submasks(base)
    if mode == "principal":
        return Filter.principal(base, rng.choice(subs))
    gens = [base]
    for _ in range(rng.randint(0, 3)):
        cand = rng.choice(subs)
        if mode == "weak" and (cand == 0 or any(not (cand & g) for g in gens)):
            continue
        gens.append(cand)
    fam = frozenset(s for s in subs if any(is_subset(g, s) for g in gens))
    kind = "weak" if mode == "weak" else "strong"
    if base == 0:
        fam = frozenset({0})
    return Filter(base, fam, kind)


def random_ring(universe: ModelSet, rng: random.Random) -> DomainFamily:
    """All unions of blocks of a random partition of ``universe``.

    The result is closed under union, intersection and set difference.
    """
    blocks: list[ModelSet] = []
    for e in range(universe.bit_length()):
        if not (universe >> e) & 1:
            continue
        k = rng.randint(0, len(blocks))
        if k == len(blocks):
            blocks.append(1 << e)
        else:
            blocks[k] |= 1 << e
    sets = set()
    for choice in range(1 << len(blocks)):
        s = 0
        for i, b in enumerate(blocks):
            if (choice >> i) & 1:
                s |= b
        sets.add(s)
    return DomainFamily(universe, sorted(sets))


def random_system(domain: DomainFamily, rng: random.Random, mode: Optional[str] = None) -> FilterSystem:
    """A random system; ``mode=None`` picks a mode per base set."""
    filters = {}
    for x in domain.sets:
        m = mode or rng.choice(SYSTEM_MODES)
        filters[x] = random_filter(x, rng, m)
    return FilterSystem(domain, filters)

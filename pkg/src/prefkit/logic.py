"""Finite propositional logic over bitset model sets.

Everything in prefkit is finite, so sets of models are encoded as Python
integers used as bitsets: bit ``m`` of a :data:`ModelSet` is set when model
``m`` belongs to the set.  A model over a vocabulary of ``n`` atoms is an index
in ``range(2 ** n)`` whose bit ``j`` gives the truth value of atom ``j``.

The same integer encoding is reused for abstract universes (``{a, b, c}`` is
``0b111``), which keeps choice functions, preferential structures, revision
operators and filters on a single representation.

This module provides

* bitset helpers (:func:`members`, :func:`from_members`, :func:`submasks`, ...),
* :class:`Vocabulary` and the formula AST with a parser and printer,
* :func:`models_of`, :func:`theory_of` and :func:`entails`,
* :class:`DomainFamily` with recomputed closure flags, and
* :func:`def_closure`, the least member of a family containing a set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    ClosureError,
    FormulaSyntaxError,
    UnknownAtomError,
    VocabularyError,
)

ModelSet = int
"""A finite set of models (or abstract elements) encoded as a bitmask."""

MAX_ATOMS = 16

# ---------------------------------------------------------------------------
# Bitset helpers
# ---------------------------------------------------------------------------


def members(s: ModelSet) -> list[int]:
    """Return the elements of ``s`` in ascending order."""
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return out


def from_members(elements: Iterable[int]) -> ModelSet:
    """Build a bitset from an iterable of non-negative element indices."""
    s = 0
    for e in elements:
        if e < 0:
            raise ValueError(f"negative element index {e}")
        s |= 1 << e
    return s


def size(s: ModelSet) -> int:
    """Cardinality of a bitset."""
    return bin(s).count("1")


def is_subset(a: ModelSet, b: ModelSet) -> bool:
    """``a ⊆ b``."""
    return a & ~b == 0


def submasks(s: ModelSet) -> list[ModelSet]:
    """All subsets of ``s`` in ascending integer order (including 0 and ``s``)."""
    out = []
    sub = s
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & s
    out.reverse()
    return out


def power_set(universe: ModelSet, include_empty: bool = True) -> list[ModelSet]:
    """All subsets of ``universe`` in ascending order."""
    subs = submasks(universe)
    return subs if include_empty else subs[1:]


def format_set(s: ModelSet, labels: Sequence[str] | None = None) -> str:
    """Human readable rendering such as ``{a,b}`` or ``{0,2}``."""
    items = members(s)
    if labels is not None:
        names = [labels[i] if i < len(labels) else str(i) for i in items]
    else:
        names = [str(i) for i in items]
    return "{" + ",".join(names) + "}"


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"true", "false"}


@dataclass(frozen=True)
class Vocabulary:
    """An ordered, duplicate-free list of propositional atoms."""

    atoms: tuple[str, ...]
    max_atoms: int = field(default=MAX_ATOMS, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(set(self.atoms)) != len(self.atoms):
            raise VocabularyError(f"duplicate atoms in {list(self.atoms)}")
        if len(self.atoms) > self.max_atoms:
            raise VocabularyError(
                f"{len(self.atoms)} atoms exceed the limit of {self.max_atoms}"
            )
        for a in self.atoms:
            if not _ATOM_RE.match(a) or a in _RESERVED:
                raise VocabularyError(f"invalid atom name {a!r}")

    @classmethod
    def default(cls, n: int) -> "Vocabulary":
        """A vocabulary of ``n`` conventional atom names (p, q, r, ...)."""
        names = "pqrstuvw"
        if n <= len(names):
            return cls(tuple(names[:n]))
        return cls(tuple(f"p{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def n_models(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full(self) -> ModelSet:
        """The set of all models."""
        return (1 << self.n_models) - 1

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise UnknownAtomError(atom) from None

    @cached_property
    def atom_masks(self) -> tuple[ModelSet, ...]:
        """For each atom, the set of models in which it is true."""
        masks = []
        n_models = self.n_models
        for j in range(len(self.atoms)):
            # Models with bit j set form blocks of 2**j ones every 2**(j+1).
            block = ((1 << (1 << j)) - 1) << (1 << j)
            period = 1 << (j + 1)
            m = 0
            for start in range(0, n_models, period):
                m |= block << start
            masks.append(m)
        return tuple(masks)

    def model_name(self, model: int) -> str:
        """Render a model as the conjunction of its literals, e.g. ``p&~q``."""
        return "&".join(
            a if (model >> j) & 1 else "~" + a for j, a in enumerate(self.atoms)
        ) or "true"


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

# Binding strength used by the printer; higher binds tighter.
_PREC = {"iff": 1, "imp": 2, "or": 3, "and": 4, "not": 5, "leaf": 6}


class Formula:
    """Base class for propositional formulas."""

    __slots__ = ()
    kind = "leaf"

    def models(self, vocab: Vocabulary) -> ModelSet:
        raise NotImplementedError

    def atoms(self) -> set[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        return self._show(0)

    def _show(self, ctx: int) -> str:
        raise NotImplementedError

    # Convenience constructors, handy in tests and generated pools.
    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool
    kind = "leaf"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return vocab.full if self.value else 0

    def atoms(self) -> set[str]:
        return set()

    def _show(self, ctx: int) -> str:
        return "true" if self.value else "false"



TOP = Const(True)
BOTTOM = Const(False)


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str
    kind = "leaf"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return vocab.atom_masks[vocab.index(self.name)]

    def atoms(self) -> set[str]:
        return {self.name}

    def _show(self, ctx: int) -> str:
        return self.name



@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula
    kind = "not"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return vocab.full & ~self.arg.models(vocab)

    def atoms(self) -> set[str]:
        return self.arg.atoms()

    def _show(self, ctx: int) -> str:
        return "~" + self.arg._show(_PREC["not"])



@dataclass(frozen=True, eq=True)
class _Binary(Formula):
    left: Formula
    right: Formula
    symbol = ""

    def atoms(self) -> set[str]:
        return self.left.atoms() | self.right.atoms()

    def _show(self, ctx: int) -> str:
        p = _PREC[self.kind]
        if self.kind == "imp":  # right associative
            body = f"{self.left._show(p + 1)} {self.symbol} {self.right._show(p)}"
        else:  # left associative
            body = f"{self.left._show(p)} {self.symbol} {self.right._show(p + 1)}"
        return f"({body})" if p < ctx else body



@dataclass(frozen=True, eq=True)
class And(_Binary):
    kind = "and"
    symbol = "&"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return self.left.models(vocab) & self.right.models(vocab)



@dataclass(frozen=True, eq=True)
class Or(_Binary):
    kind = "or"
    symbol = "|"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return self.left.models(vocab) | self.right.models(vocab)



@dataclass(frozen=True, eq=True)
class Implies(_Binary):
    kind = "imp"
    symbol = "->"

    def models(self, vocab: Vocabulary) -> ModelSet:
        return (vocab.full & ~self.left.models(vocab)) | self.right.models(vocab)



@dataclass(frozen=True, eq=True)
class Iff(_Binary):
    kind = "iff"
    symbol = "<->"

    def models(self, vocab: Vocabulary) -> ModelSet:
        a = self.left.models(vocab)
        b = self.right.models(vocab)
        return vocab.full & ~(a ^ b)



Theory = tuple[Formula, ...]
"""A finite set of formulas, kept as a tuple in a stable order."""

# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|[~&|()])|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("op") if m.group("op") else m.start("name")
        if m.group("op"):
            tokens.append(("op", m.group("op"), start))
        else:
            tokens.append(("name", m.group("name"), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary | None) -> None:
        self.tokens = _tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.take()
        if val != value or kind != "op":
            found = val or "end of input"
            raise FormulaSyntaxError(f"expected {value!r} but found {found!r}", pos)

    def parse(self) -> Formula:
        f = self.iff()
        kind, val, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected token {val!r}", pos)
        return f

    def iff(self) -> Formula:
        left = self.imp()
        while self.peek()[1] == "<->" and self.peek()[0] == "op":
            self.take()
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->" and self.peek()[0] == "op":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek()[1] == "|" and self.peek()[0] == "op":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&" and self.peek()[0] == "op":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "op" and val == "~":
            return Not(self.unary())
        if kind == "op" and val == "(":
            inner = self.iff()
            self.expect(")")
            return inner
        if kind == "name":
            if val == "true":
                return TOP
            if val == "false":
                return BOTTOM
            if self.vocab is not None and val not in self.vocab.atoms:
                raise UnknownAtomError(val)
            return Atom(val)
        found = val or "end of input"
        raise FormulaSyntaxError(f"expected a formula but found {found!r}", pos)


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    Connectives are ``~ & | -> <->`` with that binding order (``~`` tightest);
    ``->`` associates to the right, the others to the left.  ``true`` and
    ``false`` are the constants.  When ``vocab`` is given, every atom must
    belong to it.
    """
    return _Parser(text, vocab).parse()


def parse_theory(texts: Iterable[str], vocab: Vocabulary | None = None) -> Theory:
    """Parse several formulas into a theory."""
    return tuple(parse_formula(t, vocab) for t in texts)


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


def models_of(theory: Union[Formula, Iterable[Formula]], vocab: Vocabulary) -> ModelSet:
    """The set of models satisfying every formula of ``theory``."""
    if isinstance(theory, Formula):
        return theory.models(vocab)
    s = vocab.full
    for f in theory:
        s &= f.models(vocab)
    return s


def model_formula(model: int, vocab: Vocabulary) -> Formula:
    """The complete conjunction of literals describing one model."""
    lits: list[Formula] = [
        Atom(a) if (model >> j) & 1 else Not(Atom(a))
        for j, a in enumerate(vocab.atoms)
    ]
    if not lits:
        return TOP
    f = lits[0]
    for lit in lits[1:]:
        f = And(f, lit)
    return f


def dnf_of(models_: ModelSet, vocab: Vocabulary) -> Formula:
    """Canonical full disjunctive normal form of a model set (``false`` if empty)."""
    ms = members(models_)
    if not ms:
        return BOTTOM
    f = model_formula(ms[0], vocab)
    for m in ms[1:]:
        f = Or(f, model_formula(m, vocab))
    return f


def theory_of(models_: ModelSet, vocab: Vocabulary) -> Theory:
    """A single-formula theory whose models are exactly ``models_``.

    The formula is the canonical full DNF, so equal model sets give equal
    theories; the empty set yields ``(false,)``.
    """
    return (dnf_of(models_, vocab),)


def entails(theory: Union[Formula, Iterable[Formula]], phi: Formula, vocab: Vocabulary) -> bool:
    """Classical consequence ``T ⊢ φ`` decided by model inclusion."""
    return is_subset(models_of(theory, vocab), phi.models(vocab))


# ---------------------------------------------------------------------------
# Domain families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainFamily:
    """A finite family of subsets of a universe, with recomputed closure flags.

    Flags are always derived from ``sets``; nothing declared by a caller is
    trusted.  Complements are taken relative to ``universe``.
    """

    universe: ModelSet
    sets: tuple[ModelSet, ...]

    def __post_init__(self) -> None:
        canon = tuple(sorted(set(self.sets)))
        for s in canon:
            if s < 0 or not is_subset(s, self.universe):
                raise ValueError(f"set {s:#b} is not inside the universe")
        object.__setattr__(self, "sets", canon)

    @classmethod
    def power_set(cls, universe: ModelSet, include_empty: bool = True) -> "DomainFamily":
        """All subsets of ``universe`` (optionally without the empty set)."""
        return cls(universe, tuple(power_set(universe, include_empty)))

    @cached_property
    def members_set(self) -> frozenset[ModelSet]:
        return frozenset(self.sets)

    def __contains__(self, s: object) -> bool:
        return s in self.members_set

    def __iter__(self) -> Iterator[ModelSet]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def _closed(self, op) -> bool:
        ms = self.members_set
        return all(op(a, b) in ms for a in self.sets for b in self.sets)

    @cached_property
    def closed_intersection(self) -> bool:
        return self._closed(lambda a, b: a & b)

    @cached_property
    def closed_union(self) -> bool:
        return self._closed(lambda a, b: a | b)

    @cached_property
    def closed_complement(self) -> bool:
        ms = self.members_set
        return all((self.universe & ~a) in ms for a in self.sets)

    @cached_property
    def closed_difference(self) -> bool:
        return self._closed(lambda a, b: a & ~b)

    @cached_property
    def has_singletons(self) -> bool:
        ms = self.members_set
        return all((1 << e) in ms for e in members(self.universe))

    @cached_property
    def is_full_power_set(self) -> bool:
        return len(self.sets) == 1 << size(self.universe)

    def flags(self) -> dict[str, bool]:
        """All closure flags, keyed by short names."""
        return {
            "intersection": self.closed_intersection,
            "union": self.closed_union,
            "complement": self.closed_complement,
            "difference": self.closed_difference,
            "singletons": self.has_singletons,
        }

    def flag(self, name: str) -> bool:
        return self.flags()[name]


def def_closure(family: DomainFamily, a: ModelSet) -> ModelSet:
    """The least member of ``family`` containing ``a``.

    Requires the family to be closed under finite intersections.  The full
    universe is used as the fallback when it is present; if no member contains
    ``a`` and the universe is absent, a :class:`ClosureError` is raised.
    """
    if not family.closed_intersection:
        raise ClosureError("definability closure needs a family closed under intersection")
    result = None
    for s in family.sets:
        if is_subset(a, s):
            result = s if result is None else result & s
    if result is None:
        raise ClosureError(f"no member of the family contains {a:#b}")
    return result

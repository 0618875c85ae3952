"""Preferential structures with copies.

A structure has a *carrier* of elements, a set of *nodes* ``(element, copy)``
and an attack relation between nodes; ``u ≺ v`` reads "u attacks v" (u is
strictly preferred to v).  The choice it induces on a set ``X`` keeps the
elements of ``X`` that have at least one copy not attacked by any node whose
element lies in ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .choice import ChoiceFunction, PropertyVerdict
from .errors import NotRankedError
from .logic import DomainFamily, ModelSet, members

Node = tuple[int, int]
"""A node: ``(element, copy index)``."""


@dataclass(frozen=True)
class PrefStructure:
    """A finite preferential structure.

    ``attacks`` contains pairs ``(u, v)`` meaning ``u ≺ v``.
    """

    carrier: ModelSet
    nodes: tuple[Node, ...]
    attacks: frozenset[tuple[Node, Node]]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(tuple(n) for n in self.nodes)))
        attacks = frozenset((tuple(u), tuple(v)) for u, v in self.attacks)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "attacks", attacks)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        for e, c in nodes:
            if not (self.carrier >> e) & 1:
                raise ValueError(f"node ({e}, {c}) has an element outside the carrier")
        known = set(nodes)
        for u, v in attacks:
            if u not in known or v not in known:
                raise ValueError(f"attack {u} ≺ {v} mentions an unknown node")

    @classmethod
    def from_relation(
        cls,
        relation: Iterable[tuple[int, int]],
        carrier: ModelSet,
        labels: Optional[Sequence[str]] = None,
    ) -> "PrefStructure":
        """A structure with one copy per carrier element and ``x ≺ y`` pairs."""
        nodes = tuple((e, 0) for e in members(carrier))
        attacks = frozenset(((x, 0), (y, 0)) for x, y in relation)
        return cls(carrier, nodes, attacks, tuple(labels) if labels else None)

    # -- internal indexed form -------------------------------------------------

    @cached_property
    def index(self) -> dict[Node, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def incoming(self) -> tuple[int, ...]:
        """For each node index, the bitmask of node indices attacking it."""
        inc = [0] * len(self.nodes)
        idx = self.index
        for u, v in self.attacks:
            inc[idx[v]] |= 1 << idx[u]
        return tuple(inc)

    @cached_property
    def element_nodes(self) -> dict[int, int]:
        """For each element, the bitmask of its nodes."""
        out: dict[int, int] = {}
        for i, (e, _) in enumerate(self.nodes):
            out[e] = out.get(e, 0) | (1 << i)
        return out

    def nodes_in(self, x: ModelSet) -> int:
        m = 0
        for e, mask in self.element_nodes.items():
            if (x >> e) & 1:
                m |= mask
        return m

    def node_name(self, node: Node) -> str:
        e, c = node
        name = self.labels[e] if self.labels and e < len(self.labels) else str(e)
        return f"{name}#{c}"

    @property
    def max_copies(self) -> int:
        counts: dict[int, int] = {}
        for e, _ in self.nodes:
            counts[e] = counts.get(e, 0) + 1
        return max(counts.values(), default=0)


def mu_of(s: PrefStructure, x: ModelSet) -> ModelSet:
    """Elements of ``x`` with some copy unattacked from ``x``."""
    inside = s.nodes_in(x)
    inc = s.incoming
    out = 0
    for e, mask in s.element_nodes.items():
        if not (x >> e) & 1:
            continue
        m = mask
        while m:
            low = m & -m
            if not inc[low.bit_length() - 1] & inside:
                out |= 1 << e
                break
            m ^= low
    return out


def choice_of(s: PrefStructure, domain: DomainFamily) -> ChoiceFunction:
    """The choice function a structure induces on ``domain``."""
    return ChoiceFunction(domain, {x: mu_of(s, x) for x in domain.sets}, s.labels)


@dataclass(frozen=True)
class StructureFlags:
    """Order-theoretic properties of the attack relation, with witnesses."""

    irreflexive: bool
    transitive: bool
    cycle_free: bool
    ranked: bool
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict[str, bool]:
        return {
            "irreflexive": self.irreflexive,
            "transitive": self.transitive,
            "cycle_free": self.cycle_free,
            "ranked": self.ranked,
        }


def _find_cycle(n: int, inc: Sequence[int]) -> Optional[list[int]]:
    """A directed cycle (as node indices, following attacks) or None."""
    succ = [[] for _ in range(n)]
    for v in range(n):
        for u in members(inc[v]):
            succ[u].append(v)
    color = [0] * n
    parent = [-1] * n
    for start in range(n):
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        while stack:
            u, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[u] = 2
                stack.pop()
                continue
            if color[nxt] == 1:
                cycle = [u]
                w = u
                while w != nxt:
                    w = parent[w]
                    cycle.append(w)
                cycle.reverse()
                return cycle
            if color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = u
                stack.append((nxt, iter(succ[nxt])))
    return None


def structure_flags(s: PrefStructure) -> StructureFlags:
    """Irreflexivity, transitivity, cycle-freeness and rankedness.

    A structure is *ranked* when its relation is irreflexive and incomparable
    nodes have the same strict predecessors and successors: if neither ``x ≺ y``
    nor ``y ≺ x`` then ``z ≺ x ⇒ z ≺ y`` and ``x ≺ z ⇒ y ≺ z`` for all ``z``.
    """
    n = len(s.nodes)
    inc = s.incoming
    names = s.nodes
    w: dict = {}

    irreflexive = True
    for v in range(n):
        if (inc[v] >> v) & 1:
            irreflexive = False
            w["irreflexive"] = (names[v], names[v])
            break

    transitive = True
    for c in range(n):
        for b in members(inc[c]):
            extra = inc[b] & ~inc[c]
            if extra:
                a = members(extra)[0]
                transitive = False
                w["transitive"] = (names[a], names[b], names[c])
                break
        if not transitive:
            break

    cyc = _find_cycle(n, inc)
    cycle_free = cyc is None
    if cyc is not None:
        w["cycle_free"] = tuple(names[i] for i in cyc)

    def att(u, v):
        return (inc[v] >> u) & 1

    ranked = irreflexive
    if not irreflexive:
        w["ranked"] = w["irreflexive"]
    else:
        for x in range(n):
            for y in range(n):
                if x == y or att(x, y) or att(y, x):
                    continue
                for z in range(n):
                    if (att(z, x) and not att(z, y)) or (att(x, z) and not att(y, z)):
                        ranked = False
                        w["ranked"] = (names[x], names[y], names[z])
                        break
                if not ranked:
                    break
            if not ranked:
                break
    return StructureFlags(irreflexive, transitive, cycle_free, ranked, w)


def rank_layers(s: PrefStructure) -> dict[Node, int]:
    """Layer numbers with ``u ≺ v`` iff ``layer(u) < layer(v)``.

    Layers are numbered from 0 without gaps.  Raises
    :class:`~prefkit.errors.NotRankedError` with a witness when the structure is
    not ranked or not cycle-free.
    """
    flags = structure_flags(s)
    if not flags.ranked:
        raise NotRankedError("structure is not ranked", flags.witnesses.get("ranked"))
    if not flags.cycle_free:
        raise NotRankedError("structure has a cycle", flags.witnesses.get("cycle_free"))
    n = len(s.nodes)
    inc = s.incoming
    depth = [-1] * n

    def d(v: int) -> int:
        if depth[v] < 0:
            depth[v] = 1 + max((d(u) for u in members(inc[v])), default=-1)
        return depth[v]

    layers = {s.nodes[v]: d(v) for v in range(n)}
    # Sanity: in a ranked cycle-free relation the longest-chain depth is exact.
    for v in range(n):
        for u in range(n):
            if bool((inc[v] >> u) & 1) != (depth[u] < depth[v]):
                raise NotRankedError("relation is not a layered order", (s.nodes[u], s.nodes[v]))
    return layers


def from_layers(
    layers: dict[Node, int], carrier: ModelSet, labels: Optional[Sequence[str]] = None
) -> PrefStructure:
    """The ranked structure in which lower layers attack higher ones."""
    nodes = tuple(layers)
    attacks = frozenset(
        (u, v) for u in nodes for v in nodes if layers[u] < layers[v]
    )
    return PrefStructure(carrier, nodes, attacks, tuple(labels) if labels else None)


def is_smooth(s: PrefStructure, domain: DomainFamily) -> PropertyVerdict:
    """Smoothness with respect to ``domain``.

    For every ``X`` in the domain, every node attacked from ``X`` must have an
    attacker from ``X`` that is itself unattacked from ``X``.  The witness names
    the first failing set and node.
    """
    inc = s.incoming
    checked = 0
    for x in domain.sets:
        inside = s.nodes_in(x)
        minimal = 0
        m = inside
        while m:
            low = m & -m
            if not inc[low.bit_length() - 1] & inside:
                minimal |= low
            m ^= low
        m = inside
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            checked += 1
            if inc[v] & inside and not inc[v] & minimal:
                return PropertyVerdict("smooth", False, {"X": x, "node": s.nodes[v]}, checked)
    return PropertyVerdict("smooth", True, None, checked)

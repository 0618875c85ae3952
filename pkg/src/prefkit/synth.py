"""Synthesis of preferential structures that induce a given choice function.

:func:`synth_structure` either returns a structure whose induced choice equals
``f`` on ``f``'s domain, or an :class:`Unsat` report.  The report keeps two
kinds of evidence apart:

* algebraic conditions that every structure of the requested class satisfies
  and that ``f`` violates (a proof that no such structure exists), and
* exhaustion of the bounded search (no structure within the copy bound).

Running out of the node or step budget raises
:class:`~prefkit.errors.BudgetExceededError` instead; that outcome decides
nothing.

Search strategy
---------------
A few cheap constructions are tried first and verified.  If none fits, a
backtracking search runs over copy-count vectors in increasing total size.
For every node it chooses the set of nodes attacking it, subject to:

* *kill*: if ``x ∈ X − f(X)``, each copy of ``x`` is attacked from ``X``;
* *survive*: if ``x ∈ f(X)``, some copy of ``x`` is unattacked from ``X``;
* transitivity, checked incrementally, when requested;
* smoothness, checked on complete candidates, when requested.

Copies of one element are interchangeable, so they are generated in
non-decreasing order of the element sets attacking them.

Ranked structures are searched as layer assignments.  In a layered structure
only the lowest copy of an element affects the induced choice, so assigning
one layer per element (or leaving it out of the carrier) covers every copy
bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional, Union

from .choice import ChoiceFunction, PropertyVerdict, check_mu_property
from .errors import BudgetExceededError
from .logic import ModelSet, members, submasks
from .pref import PrefStructure, choice_of, from_layers, is_smooth, structure_flags

GENERAL_NECESSARY = ("mu_sub", "mu_PR")
SMOOTH_NECESSARY = ("mu_sub", "mu_PR", "mu_CUM")
RANKED_NECESSARY = (
    "mu_sub", "mu_PR", "mu_eq", "mu_eq_prime", "mu_par", "mu_cup",
    "mu_cup_prime", "mu_in", "mu_RatM",
)
DEFAULT_STEP_BUDGET = 2_000_000


@dataclass(frozen=True)
class SynthOptions:
    """Requested structure class and search bounds."""

    require_transitive: bool = False
    require_smooth: bool = False
    require_ranked: bool = False
    max_copies: int = 2
    node_budget: int = 24
    step_budget: int = DEFAULT_STEP_BUDGET


@dataclass(frozen=True)
class Unsat:
    """No structure of the requested class induces ``f``.

    ``violations`` lists failing conditions that hold in every structure of
    the class.  ``exhausted`` records that the bounded search was run to
    completion; ``searched`` describes what it covered.
    """

    violations: tuple[PropertyVerdict, ...]
    exhausted: bool
    searched: str

    def __bool__(self) -> bool:
        return False


SynthResult = Union[PrefStructure, Unsat]


def necessary_conditions(opts: SynthOptions) -> tuple[str, ...]:
    if opts.require_ranked:
        return RANKED_NECESSARY
    if opts.require_smooth:
        return SMOOTH_NECESSARY
    return GENERAL_NECESSARY


def _fits(s: PrefStructure, f: ChoiceFunction, opts: SynthOptions) -> bool:
    if s.max_copies > opts.max_copies or len(s.nodes) > opts.node_budget:
        return False
    if choice_of(s, f.domain).table != f.table:
        return False
    if opts.require_transitive or opts.require_ranked:
        flags = structure_flags(s)
        if opts.require_transitive and not flags.transitive:
            return False
        if opts.require_ranked and not (flags.ranked and flags.cycle_free):
            return False
    if opts.require_smooth and not is_smooth(s, f.domain).holds:
        return False
    return True


def _with_labels(s: PrefStructure, f: ChoiceFunction) -> PrefStructure:
    if f.labels is None:
        return s
    return PrefStructure(s.carrier, s.nodes, s.attacks, f.labels)


def synth_structure(f: ChoiceFunction, opts: SynthOptions = SynthOptions()) -> SynthResult:
    """Find a preferential structure of the requested class inducing ``f``."""
    violations = tuple(
        v for v in (check_mu_property(f, p) for p in necessary_conditions(opts)) if not v.holds
    )
    if opts.require_ranked:
        found = _ranked_search(f, opts)
        if found is not None:
            return _with_labels(found, f)
        return Unsat(
            violations,
            True,
            f"all layer assignments with at most {opts.max_copies} copies per element "
            "(only an element's lowest copy affects the choice)",
        )
    if violations:
        return Unsat(violations, False, "search skipped: a necessary condition fails")
    for cand in _constructions(f, opts):
        if _fits(cand, f, opts):
            return _with_labels(cand, f)
    found = _Search(f, opts).run()
    if found is not None:
        return _with_labels(found, f)
    return Unsat(
        (),
        True,
        f"all structures with at most {opts.max_copies} copies per element",
    )


# ---------------------------------------------------------------------------
# Ranked search
# ---------------------------------------------------------------------------


def _ranked_search(f: ChoiceFunction, opts: SynthOptions) -> Optional[PrefStructure]:
    elems = members(f.universe)
    n = len(elems)
    options = [None] + list(range(n))
    total = len(options) ** n
    if total > opts.step_budget:
        raise BudgetExceededError(
            f"ranked search needs {total} assignments, budget is {opts.step_budget}"
        )
    table = f.table
    sets = f.domain.sets
    for assign in product(options, repeat=n):
        layer = {e: l for e, l in zip(elems, assign) if l is not None}
        used = sorted(set(layer.values()))
        if used != list(range(len(used))):
            continue  # only gap-free layerings
        ok = True
        for x in sets:
            present = [e for e in members(x) if e in layer]
            if present:
                low = min(layer[e] for e in present)
                mu = 0
                for e in present:
                    if layer[e] == low:
                        mu |= 1 << e
            else:
                mu = 0
            if mu != table[x]:
                ok = False
                break
        if ok:
            carrier = 0
            for e in layer:
                carrier |= 1 << e
            return from_layers({(e, 0): l for e, l in layer.items()}, carrier)
    return None


# ---------------------------------------------------------------------------
# Direct constructions (verified before use)
# ---------------------------------------------------------------------------


def _chosen(f: ChoiceFunction) -> ModelSet:
    c = 0
    for fx in f.table.values():
        c |= fx
    return c


def _transitive_closure(s: PrefStructure) -> PrefStructure:
    n = len(s.nodes)
    inc = list(s.incoming)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            acc = inc[v]
            for u in members(inc[v]):
                acc |= inc[u]
            if acc != inc[v]:
                inc[v] = acc
                changed = True
    attacks = frozenset(
        (s.nodes[u], s.nodes[v]) for v in range(n) for u in members(inc[v])
    )
    return PrefStructure(s.carrier, s.nodes, attacks)


def _seed(f: ChoiceFunction, carrier: ModelSet) -> PrefStructure:
    """One copy per element; y attacks x when y is chosen where x is not."""
    rel = set()
    for x, fx in f.table.items():
        for y in members(fx):
            for z in members(x & ~fx):
                if (carrier >> y) & 1 and (carrier >> z) & 1:
                    rel.add((y, z))
    chosen = _chosen(f)
    for e in members(carrier & ~chosen):
        rel.add((e, e))
    return PrefStructure.from_relation(rel, carrier)


def _maximal_sets(f: ChoiceFunction) -> PrefStructure:
    """One copy of ``x`` per maximal domain set in which ``x`` is chosen.

    The copy for ``X`` is attacked by every element outside ``X``; elements
    that are never chosen get a single self-attacking copy.
    """
    u = f.universe
    nodes = []
    owner: dict[tuple[int, int], ModelSet] = {}
    for e in members(u):
        sets = [x for x, fx in f.table.items() if (fx >> e) & 1]
        maximal = [x for x in sets if not any(x != y and x & ~y == 0 for y in sets)]
        if not maximal:
            nodes.append((e, 0))
            owner[(e, 0)] = -1
        for c, x in enumerate(sorted(maximal)):
            nodes.append((e, c))
            owner[(e, c)] = x
    attacks = set()
    for v in nodes:
        x = owner[v]
        if x == -1:
            attacks.add((v, v))
            continue
        for e in members(u & ~x):
            attacks.add(((e, 0), v))
    return PrefStructure(u, tuple(nodes), frozenset(attacks))


def _selection_copies(f: ChoiceFunction, carrier: ModelSet, max_copies: int) -> Optional[PrefStructure]:
    """Copies indexed by selections from the chosen sets where ``x`` loses.

    Copy ``⟨x, g⟩`` picks one chosen element ``g(X) ∈ f(X)`` for every domain
    set ``X`` with ``x ∈ X − f(X)``, and is attacked by all copies of the
    picked elements.
    """
    per_elem = {}
    for e in members(carrier):
        losing = [x for x, fx in sorted(f.table.items()) if (x >> e) & 1 and not (fx >> e) & 1]
        options = [members(f.table[x] & carrier) for x in losing]
        if any(not o for o in options):
            return None
        count = 1
        for o in options:
            count *= len(o)
            if count > max_copies:
                return None
        per_elem[e] = [frozenset(sel) for sel in product(*options)]
    nodes = []
    picks = {}
    for e, sels in per_elem.items():
        uniq = sorted(set(sels), key=sorted)
        for c, sel in enumerate(uniq):
            nodes.append((e, c))
            picks[(e, c)] = sel
    attacks = set()
    for v in nodes:
        for w in nodes:
            if w[0] in picks[v]:
                attacks.add((w, v))
    return PrefStructure(carrier, tuple(nodes), frozenset(attacks))


def _constructions(f: ChoiceFunction, opts: SynthOptions) -> Iterator[PrefStructure]:
    chosen = _chosen(f)
    carriers = [chosen] if opts.require_smooth else [f.universe, chosen]
    for carrier in carriers:
        seed = _seed(f, carrier)
        yield seed
        yield _transitive_closure(seed)
        sel = _selection_copies(f, carrier, opts.max_copies)
        if sel is not None:
            yield sel
            yield _transitive_closure(sel)
    general = _maximal_sets(f)
    yield general
    yield _transitive_closure(general)


# ---------------------------------------------------------------------------
# Backtracking search
# ---------------------------------------------------------------------------


class _Search:
    """Two-level backtracking search over structures with a copy bound.

    Level one assigns to every node the *set of elements* attacking it; the
    induced choice depends on nothing else, so kill and survive constraints
    are decided here.  Level two picks, for each attacking element, which of
    its copies attack; only transitivity and smoothness depend on this.
    """

    def __init__(self, f: ChoiceFunction, opts: SynthOptions) -> None:
        self.f = f
        self.opts = opts
        self.steps = 0
        chosen = _chosen(f)
        self.carrier = chosen if opts.require_smooth else f.universe
        self.elems = members(self.carrier)
        # Elements never chosen need a single copy that attacks only itself:
        # merging all their copies into one such node keeps the element sets
        # attacking every other node, hence the induced choice, and keeps
        # transitivity (its only attacker is itself).
        self.idle = set(members(self.carrier & ~chosen))
        self.kill = {}
        self.survive = {}
        for e in self.elems:
            self.kill[e] = [x for x, fx in f.table.items() if (x >> e) & 1 and not (fx >> e) & 1]
            self.survive[e] = [x for x, fx in f.table.items() if (fx >> e) & 1]
        self.esets = {
            e: [a for a in submasks(self.carrier) if all(a & x for x in self.kill[e])]
            for e in self.elems
        }

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.opts.step_budget:
            raise BudgetExceededError(
                f"structure search exceeded {self.opts.step_budget} steps"
            )

    def _count_vectors(self) -> list[tuple[int, ...]]:
        m = self.opts.max_copies
        ranges = [range(1, 2) if e in self.idle else range(1, m + 1) for e in self.elems]
        vectors = list(product(*ranges))
        vectors.sort(key=lambda v: (sum(v), v))
        return vectors

    def run(self) -> Optional[PrefStructure]:
        skipped_for_budget = False
        for vec in self._count_vectors():
            if sum(vec) > self.opts.node_budget:
                skipped_for_budget = True
                continue
            found = self._search_config(vec)
            if found is not None:
                return found
        if skipped_for_budget:
            raise BudgetExceededError(
                f"copy configurations need more than {self.opts.node_budget} nodes"
            )
        return None

    def _search_config(self, vec: tuple[int, ...]) -> Optional[PrefStructure]:
        nodes: list[tuple[int, int]] = []
        for e, cnt in zip(self.elems, vec):
            nodes.extend((e, c) for c in range(cnt))
        n = len(nodes)
        elem_of = [e for e, _ in nodes]
        first = [i == 0 or elem_of[i - 1] != elem_of[i] for i in range(n)]
        last = [i == n - 1 or elem_of[i + 1] != elem_of[i] for i in range(n)]
        copies_of: dict[int, list[int]] = {}
        for i, e in enumerate(elem_of):
            copies_of.setdefault(e, []).append(i)
        E = [0] * n

        def survive_ok(i: int) -> bool:
            ours = [E[j] for j in copies_of[elem_of[i]]]
            return all(any(not (a & x) for a in ours) for x in self.survive[elem_of[i]])

        def level_one(i: int) -> Optional[PrefStructure]:
            if i == n:
                return self._realize(nodes, elem_of, copies_of, E)
            e = elem_of[i]
            if e in self.idle:
                choices = [1 << e]
            else:
                lower = 0 if first[i] else E[i - 1]
                choices = [a for a in self.esets[e] if a >= lower]
            for a in choices:
                self._tick()
                E[i] = a
                if last[i] and not survive_ok(i):
                    continue
                r = level_one(i + 1)
                if r is not None:
                    return r
            E[i] = 0
            return None

        return level_one(0)

    def _realize(self, nodes, elem_of, copies_of, E) -> Optional[PrefStructure]:
        f, opts = self.f, self.opts
        n = len(nodes)
        transitive = opts.require_transitive
        if transitive:
            # Some copy v of each attacking element must have E(v) ⊆ E(w).
            for w in range(n):
                for y in members(E[w]):
                    if not any(E[v] & ~E[w] == 0 for v in copies_of[y]):
                        return None
        options = []
        for w in range(n):
            if elem_of[w] in self.idle:
                options.append([1 << w])
                continue
            per_elem = []
            for y in members(E[w]):
                usable = [v for v in copies_of[y] if not transitive or E[v] & ~E[w] == 0]
                masks = [
                    sum(1 << v for v in sub)
                    for k in range(len(usable), 0, -1)
                    for sub in combinations(usable, k)
                ]
                per_elem.append(masks)
            options.append([sum(c) for c in product(*per_elem)])
        inc = [0] * n

        def trans_ok(i: int, m: int) -> bool:
            for j in range(i):
                if (m >> j) & 1 and inc[j] & ~m:
                    return False
                if (inc[j] >> i) & 1 and m & ~inc[j]:
                    return False
            return True

        def rec(i: int) -> Optional[PrefStructure]:
            if i == n:
                attacks = frozenset(
                    (nodes[u], nodes[v]) for v in range(n) for u in members(inc[v])
                )
                s = PrefStructure(self.carrier, tuple(nodes), attacks)
                return s if _fits(s, f, opts) else None
            for m in options[i]:
                self._tick()
                if transitive and not trans_ok(i, m):
                    continue
                inc[i] = m
                r = rec(i + 1)
                if r is not None:
                    return r
            inc[i] = 0
            return None

        if not transitive and not opts.require_smooth:
            # The induced choice depends only on E: all copies attack.
            for i in range(n):
                inc[i] = options[i][0]
            return rec(n)
        return rec(0)

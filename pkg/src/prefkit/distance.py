"""Distance-based revision on finite universes.

A :class:`PseudoDistance` assigns a natural-number rank to each ordered pair
of universe elements; only the order of ranks matters.  It induces

* the *collective* operator ``X | Y``: the elements of ``Y`` at globally
  minimal distance from ``X``, and
* the *individual* operator ``X ↑ Y``: the elements of ``Y`` closest to at
  least one element of ``X``.

:func:`check_operator` tests an arbitrary binary operator for the conditions
that characterize collective operators of symmetric distances.
:func:`synth_distance` searches for a distance that induces a given
operator, or proves that none exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .agm import RevisionOperator
from .choice import PropertyVerdict
from .errors import BudgetExceededError
from .logic import DomainFamily, ModelSet, Vocabulary, format_set, is_subset, members, power_set

DEFAULT_K_MAX = 6
DEFAULT_SEARCH_BUDGET = 200_000


@dataclass(frozen=True)
class PseudoDistance:
    """Ranks ``d(u, v)`` for all ordered pairs of universe elements."""

    universe: ModelSet
    values: Mapping[tuple[int, int], int] = field(hash=False)
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        vals = {(int(u), int(v)): int(r) for (u, v), r in dict(self.values).items()}
        elems = members(self.universe)
        for u in elems:
            for v in elems:
                if (u, v) not in vals:
                    raise ValueError(f"distance missing for pair ({u}, {v})")
        for (u, v), r in vals.items():
            if not (self.universe >> u) & 1 or not (self.universe >> v) & 1:
                raise ValueError(f"pair ({u}, {v}) leaves the universe")
            if r < 0:
                raise ValueError("distance ranks must be natural numbers")
        object.__setattr__(self, "values", vals)

    def __call__(self, u: int, v: int) -> int:
        return self.values[(u, v)]

    @property
    def symmetric(self) -> bool:
        return all(r == self.values[(v, u)] for (u, v), r in self.values.items())

    @property
    def respects_identity(self) -> bool:
        """``d(u, v) = 0`` iff ``u = v``."""
        return all((r == 0) == (u == v) for (u, v), r in self.values.items())


def hamming(vocab: Vocabulary) -> PseudoDistance:
    """Number of atoms on which two models differ."""
    n = vocab.n_models
    vals = {(u, v): bin(u ^ v).count("1") for u in range(n) for v in range(n)}
    return PseudoDistance(vocab.full, vals)


def set_distance(d: PseudoDistance, x: ModelSet, y: ModelSet) -> int:
    """``d(X, Y) = min{d(x, y) : x ∈ X, y ∈ Y}``."""
    return min(d(a, b) for a in members(x) for b in members(y))


def collective_rev(d: PseudoDistance, x: ModelSet, y: ModelSet) -> ModelSet:
    """``X | Y``: elements of ``Y`` realizing the least distance from ``X``."""
    if not x or not y:
        raise ValueError("collective revision needs non-empty sets")
    best = set_distance(d, x, y)
    xs = members(x)
    out = 0
    for b in members(y):
        if any(d(a, b) == best for a in xs):
            out |= 1 << b
    return out


def individual_rev(d: PseudoDistance, x: ModelSet, y: ModelSet) -> ModelSet:
    """``X ↑ Y``: elements of ``Y`` closest to at least one element of ``X``."""
    if not x or not y:
        raise ValueError("individual revision needs non-empty sets")
    ys = members(y)
    out = 0
    for a in members(x):
        best = min(d(a, b) for b in ys)
        for b in ys:
            if d(a, b) == best:
                out |= 1 << b
    return out


def neighborhood(d: PseudoDistance, x: ModelSet, y: ModelSet) -> ModelSet:
    """``{z : d(X, z) ≤ d(X, Y)}``."""
    bound = set_distance(d, x, y)
    out = 0
    for z in members(d.universe):
        if set_distance(d, x, 1 << z) <= bound:
            out |= 1 << z
    return out


def revision_from_distance(d: PseudoDistance, base: ModelSet) -> RevisionOperator:
    """``A ↦ base | A`` with ``base | ∅ = ∅`` (the base must be non-empty)."""
    if not base:
        raise ValueError("distance revision needs a non-empty base")
    table = {a: (collective_rev(d, base, a) if a else 0) for a in power_set(d.universe)}
    return RevisionOperator(d.universe, base, table)


# ---------------------------------------------------------------------------
# Binary operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryOperator:
    """A binary operator ``(X, Y) ↦ X | Y`` on a family of non-empty sets.

    A *partial* operator only constrains the listed pairs; it can be handed to
    :func:`synth_distance` (a set of observations) but not to
    :func:`check_operator`, whose conditions quantify over all pairs.
    """

    family: DomainFamily
    table: Mapping[tuple[ModelSet, ModelSet], ModelSet] = field(hash=False)
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)
    partial: bool = False

    def __post_init__(self) -> None:
        if 0 in self.family:
            raise ValueError("the family of a binary operator excludes the empty set")
        table = {(int(x), int(y)): int(z) for (x, y), z in dict(self.table).items()}
        for x, y in table:
            if x not in self.family or y not in self.family:
                raise ValueError(f"operator pair ({x:#b}, {y:#b}) is outside the family")
        if not self.partial:
            for x in self.family.sets:
                for y in self.family.sets:
                    if (x, y) not in table:
                        raise ValueError(f"operator missing a value for ({x:#b}, {y:#b})")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_distance(
        cls,
        d: PseudoDistance,
        family: Optional[DomainFamily] = None,
        individual: bool = False,
    ) -> "BinaryOperator":
        fam = family or DomainFamily.power_set(d.universe, include_empty=False)
        rev = individual_rev if individual else collective_rev
        table = {(x, y): rev(d, x, y) for x in fam.sets for y in fam.sets}
        return cls(fam, table, d.labels)

    @property
    def universe(self) -> ModelSet:
        return self.family.universe

    def __call__(self, x: ModelSet, y: ModelSet) -> ModelSet:
        return self.table[(x, y)]


def _loop_chain_fails(op: BinaryOperator, chain: Sequence[ModelSet]) -> Optional[bool]:
    """Evaluate the loop condition on one chain X0..Xk (None: out of family)."""
    k = len(chain) - 1
    t = op.table
    fam = op.family

    def row(prev, cur, nxt):
        u = prev | nxt
        if u not in fam:
            return None
        return bool(t[(cur, u)] & prev)

    for i in range(1, k):
        r = row(chain[i - 1], chain[i], chain[i + 1])
        if not r:
            return None if r is None else False
    r = row(chain[k - 1], chain[k], chain[0])
    if not r:
        return None if r is None else False
    concl = row(chain[1], chain[0], chain[k])
    if concl is None:
        return None
    return not concl


def loop_chains_naive(op: BinaryOperator, k_max: int = DEFAULT_K_MAX) -> Iterator[tuple[ModelSet, ...]]:
    """All failing loop chains, by depth-first enumeration (small cases only)."""
    sets = op.family.sets
    t = op.table
    fam = op.family

    def extend(chain):
        j = len(chain) - 1
        if j >= 2:
            if _loop_chain_fails(op, chain):
                yield tuple(chain)
        if j == k_max:
            return
        for nxt in sets:
            if j >= 1:
                u = chain[j - 1] | nxt
                if u not in fam or not t[(chain[j], u)] & chain[j - 1]:
                    continue
            yield from extend(chain + [nxt])

    for x0 in sets:
        yield from extend([x0])


def _loop_check(op: BinaryOperator, k_max: int) -> PropertyVerdict:
    """Loop condition for all chain lengths 2..k_max via reachability tensors."""
    sets = list(op.family.sets)
    n = len(sets)
    pos = {s: i for i, s in enumerate(sets)}
    t = op.table
    # cond[a, b, c]: (X_b | (X_a ∪ X_c)) ∩ X_a ≠ ∅
    cond = np.zeros((n, n, n), dtype=bool)
    for ia, a in enumerate(sets):
        for ic, c in enumerate(sets):
            u = a | c
            if u not in pos:
                continue
            for ib, b in enumerate(sets):
                cond[ia, ib, ic] = bool(t[(b, u)] & a)
    # concl[x0, x1, xk]: (X0 | (Xk ∪ X1)) ∩ X1 ≠ ∅  (equals cond[x1, x0, xk])
    concl = cond.transpose(1, 0, 2)
    # R[s0, s1, a, b]: chain starting X0=s0, X1=s1 currently ends with (a, b)
    reach = np.zeros((n, n, n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            reach[i, j, i, j] = True
    history = [reach]
    cond_i = cond.astype(np.int32)
    checked = 0
    for k in range(2, k_max + 1):
        # extend by one set: R'[s0,s1,b,c] = OR_a R[s0,s1,a,b] & cond[a,b,c]
        reach = np.einsum("xyab,abc->xybc", reach.astype(np.int32), cond_i) > 0
        history.append(reach)
        # close: last row cond[X_{k-1}, X_k, X0]; failure when conclusion false
        closing = np.zeros_like(reach)
        for s0 in range(n):
            closing[s0] = reach[s0] & cond[:, :, s0][None, :, :]
        checked += int(closing.sum())
        fail = closing & ~concl[:, :, None, :]
        if fail.any():
            s0, s1, a, b = (int(v) for v in np.argwhere(fail)[0])
            chain = [b, a]
            for depth in range(k - 1, 1, -1):
                prev = history[depth - 1]
                cands = np.nonzero(prev[s0, s1, :, chain[-1]] & cond[:, chain[-1], chain[-2]])[0]
                chain.append(int(cands[0]))
            chain.append(s0)
            chain = [sets[i] for i in reversed(chain)]
            return PropertyVerdict("loop", False, {"chain": chain, "k": k}, checked)
    return PropertyVerdict("loop", True, None, checked)


def check_operator(op: BinaryOperator, k_max: int = DEFAULT_K_MAX) -> list[PropertyVerdict]:
    """Success, consistency and the loop condition (chains up to ``k_max``)."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    if op.partial:
        raise ValueError("the operator conditions need a total operator")
    sets = op.family.sets
    t = op.table
    succ = PropertyVerdict("succ", True, None, len(sets) ** 2)
    for x in sets:
        for y in sets:
            if not is_subset(t[(x, y)], y):
                succ = PropertyVerdict("succ", False, {"X": x, "Y": y})
                break
        if not succ.holds:
            break
    con = PropertyVerdict("con", True, None, len(sets) ** 2)
    for x in sets:
        for y in sets:
            if x & y and t[(x, y)] != x & y:
                con = PropertyVerdict("con", False, {"X": x, "Y": y})
                break
        if not con.holds:
            break
    return [succ, con, _loop_check(op, k_max)]


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceOptions:
    symmetric: bool = True
    respects_identity: bool = True
    individual: bool = False
    budget: int = DEFAULT_SEARCH_BUDGET


@dataclass(frozen=True)
class DistanceUnsat:
    """No distance of the requested kind induces the operator.

    ``cycle`` (when present) is a chain of comparisons forced by the operator
    alone that returns to its start through a strict step; each entry is
    ``(left, relation, right)`` with ``relation`` one of ``"<"``, ``"<="``.
    ``exhausted`` is true when every branch of the witness search failed.
    """

    cycle: Optional[tuple[tuple[str, str, str], ...]]
    exhausted: bool
    reason: str
    violations: tuple[PropertyVerdict, ...] = ()

    def __bool__(self) -> bool:
        return False


class _Order:
    """Incrementally closed system of ``≤``/``<`` constraints between variables.

    Also keeps the raw edges so that a contradiction can be explained as a
    cycle.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.le = [1 << i for i in range(n)]  # le[a]: b with a ≤ b entailed
        self.lt = [0] * n  # lt[a]: b with a < b entailed
        self.edges: list[tuple[int, int, bool]] = []

    def copy(self) -> "_Order":
        o = _Order.__new__(_Order)
        o.n = self.n
        o.le = list(self.le)
        o.lt = list(self.lt)
        o.edges = list(self.edges)
        return o

    def entails_lt(self, a: int, b: int) -> bool:
        return bool((self.lt[a] >> b) & 1)

    def entails_le(self, a: int, b: int) -> bool:
        return bool((self.le[a] >> b) & 1)

    def add(self, a: int, b: int, strict: bool) -> bool:
        """Add ``a ≤ b`` (or ``a < b``); return False on contradiction."""
        self.edges.append((a, b, strict))
        if strict:
            if self.entails_lt(a, b):
                return True
        elif self.entails_le(a, b):
            return True
        up_b = self.le[b]
        up_b_strict = self.lt[b]
        for x in range(self.n):
            if not (self.le[x] >> a) & 1:
                continue
            x_strict_to_a = bool((self.lt[x] >> a) & 1)
            self.le[x] |= up_b
            if strict or x_strict_to_a:
                self.lt[x] |= up_b
            else:
                self.lt[x] |= up_b_strict
        return not any((self.lt[i] >> i) & 1 for i in range(self.n))

    def ranks(self) -> list[int]:
        """Least ranks consistent with the constraints (strict steps add one)."""
        rank = [0] * self.n
        order = sorted(range(self.n), key=lambda i: bin(self._below(i)).count("1"))
        for v in order:
            r = 0
            for u in range(self.n):
                if u != v and (self.le[u] >> v) & 1:
                    step = 1 if (self.lt[u] >> v) & 1 else 0
                    r = max(r, rank[u] + step)
            rank[v] = r
        return rank

    def _below(self, v: int) -> int:
        m = 0
        for u in range(self.n):
            if (self.le[u] >> v) & 1:
                m |= 1 << u
        return m


def synth_distance(
    op: BinaryOperator, opts: DistanceOptions = DistanceOptions()
) -> PseudoDistance | DistanceUnsat:
    """Find a pseudo-distance inducing ``op`` (collective or individual reading).

    Every value ``Z = X | Y`` contributes an auxiliary variable ``m`` for the
    least relevant distance with forced constraints (``m ≤`` each candidate
    pair, ``m <`` each pair ending outside ``Z``) and existential ones (each
    element of ``Z`` is reached by a pair equal to ``m``).  Forced constraints
    are closed first; a contradiction there yields a cycle certificate.  The
    existential witnesses are then searched depth-first, most constrained
    first.  Ranks are assigned by layering the final order.
    """
    u = op.universe
    elems = members(u)
    labels = op.labels

    var_of: dict[tuple[int, int], int] = {}
    names: list[str] = []

    def ename(e: int) -> str:
        return labels[e] if labels and e < len(labels) else str(e)

    for a in elems:
        for b in elems:
            key = (min(a, b), max(a, b)) if opts.symmetric else (a, b)
            if key not in var_of:
                var_of[key] = len(names)
                names.append(f"d({ename(key[0])},{ename(key[1])})")

    def var(a: int, b: int) -> int:
        return var_of[(min(a, b), max(a, b)) if opts.symmetric else (a, b)]

    n_pairs = len(names)
    forced: list[tuple[int, int, bool]] = []
    disjunctions: list[list[tuple[int, int]]] = []  # each: any (p ≤ m) pair
    aux = 0

    def new_aux(desc: str) -> int:
        nonlocal aux
        names.append(desc)
        aux += 1
        return len(names) - 1

    if opts.respects_identity:
        zero = var(elems[0], elems[0])
        for a in elems:
            forced.append((var(a, a), zero, False))
            forced.append((zero, var(a, a), False))
            for b in elems:
                if a != b:
                    forced.append((zero, var(a, b), True))

    for (x, y), z in sorted(op.table.items()):
        if not is_subset(z, y) or not z:
            return DistanceUnsat(None, False, f"value for ({format_set(x, labels)}, {format_set(y, labels)}) is not a non-empty subset of the second argument")
        xs, ys = members(x), members(y)
        if not opts.individual:
            m = new_aux(f"min d({format_set(x, labels)},{format_set(y, labels)})")
            for a in xs:
                for b in ys:
                    forced.append((m, var(a, b), False))
                    if not (z >> b) & 1:
                        forced.append((m, var(a, b), True))
            for b in members(z):
                disjunctions.append([(var(a, b), m) for a in xs])
        else:
            ms = {}
            for a in xs:
                m = new_aux(f"min d({ename(a)},{format_set(y, labels)}) for X={format_set(x, labels)}")
                ms[a] = m
                for b in ys:
                    forced.append((m, var(a, b), False))
                    if not (z >> b) & 1:
                        forced.append((m, var(a, b), True))
                disjunctions.append([(var(a, b), m) for b in members(z)])
            for b in members(z):
                disjunctions.append([(var(a, b), ms[a]) for a in xs])

    order = _Order(len(names))
    for a, b, s in forced:
        if not order.add(a, b, s):
            return DistanceUnsat(_pair_cycle(order.edges, n_pairs, names), False, "forced constraints are contradictory")

    # Unit propagation: a witness choice with a single live option is forced.
    changed = True
    while changed:
        changed = False
        remaining = []
        for dis in disjunctions:
            if any(order.entails_le(p, m) for p, m in dis):
                continue
            live = [(p, m) for p, m in dis if not order.entails_lt(m, p)]
            if len(live) > 1:
                remaining.append(dis)
                continue
            p, m = (live or dis)[0]
            if not order.add(p, m, False) or not live:
                return DistanceUnsat(_pair_cycle(order.edges, n_pairs, names), False, "forced constraints are contradictory")
            changed = True
        disjunctions = remaining

    budget = [opts.budget]

    def solve(o: _Order, pending: list[list[tuple[int, int]]]) -> Optional[_Order]:
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceededError(f"distance search exceeded {opts.budget} steps")
        best = None
        best_opts = None
        rest = []
        for dis in pending:
            if any(o.entails_le(p, m) for p, m in dis):
                continue
            live = [(p, m) for p, m in dis if not o.entails_lt(m, p)]
            if not live:
                return None
            if best is None or len(live) < len(best_opts):
                if best is not None:
                    rest.append(best)
                best, best_opts = dis, live
            else:
                rest.append(dis)
        if best is None:
            return o
        for p, m in best_opts:
            o2 = o.copy()
            if o2.add(p, m, False):
                r = solve(o2, rest)
                if r is not None:
                    return r
        return None

    result = solve(order, disjunctions)
    if result is None:
        return DistanceUnsat(None, True, "every choice of witnesses leads to a contradiction")
    ranks = result.ranks()
    values = {}
    for a in elems:
        for b in elems:
            values[(a, b)] = ranks[var(a, b)]
    d = PseudoDistance(u, values, labels)
    # Independent confirmation that the distance reproduces the operator.
    rev = individual_rev if opts.individual else collective_rev
    if any(rev(d, x, y) != z for (x, y), z in op.table.items()):  # pragma: no cover - would be an internal bug
        raise AssertionError("synthesized distance does not reproduce the operator")
    return d


def _pair_cycle(
    edges: Sequence[tuple[int, int, bool]], n_pairs: int, names: Sequence[str]
) -> Optional[tuple[tuple[str, str, str], ...]]:
    """A strict cycle expressed over pair distances only.

    Auxiliary minimum variables (indices ``≥ n_pairs``) only ever sit between
    two pair variables, so every path through them collapses into a single
    pair-to-pair comparison, strict when any step on the path is strict.
    """
    out: dict[int, list[tuple[int, int, bool]]] = {}
    for a, b, st in edges:
        out.setdefault(a, []).append((b, st))
    derived: dict[tuple[int, int], bool] = {}
    for p in range(n_pairs):
        # best strictness reaching each node from p through auxiliaries only
        best: dict[int, bool] = {}
        stack = [(p, False)]
        while stack:
            u, st = stack.pop()
            for v, s2 in out.get(u, []):
                st2 = st or s2
                if v < n_pairs:
                    if st2 or (p, v) not in derived:
                        derived[(p, v)] = derived.get((p, v), False) or st2
                    continue
                if best.get(v) is True or (v in best and not st2):
                    continue
                best[v] = st2
                stack.append((v, st2))
    succ: dict[int, list[tuple[int, bool]]] = {}
    for (a, b), st in sorted(derived.items()):
        if a != b:
            succ.setdefault(a, []).append((b, st))
    candidates = sorted(((a, b) for (a, b), st in derived.items() if st),
                        key=lambda e: (e[0] == e[1], e))
    for a0, b0 in candidates:
        if a0 == b0:
            return ((names[a0], "<", names[a0]),)
        prev: dict[int, Optional[tuple[int, bool]]] = {b0: None}
        queue = [b0]
        while queue and a0 not in prev:
            u = queue.pop(0)
            for v, st in succ.get(u, []):
                if v not in prev:
                    prev[v] = (u, st)
                    queue.append(v)
        if a0 in prev:
            path = []
            v = a0
            while prev[v] is not None:
                u, st = prev[v]
                path.append((names[u], "<" if st else "<=", names[v]))
                v = u
            return ((names[a0], "<", names[b0]),) + tuple(reversed(path))
    return None


def render_cycle(cycle: Sequence[tuple[str, str, str]]) -> str:
    """Render a certificate as a chain, e.g. ``d(a,b) < d(a,c) < d(a,b)``."""
    if not cycle:
        return ""
    parts = [cycle[0][0]]
    for _, rel, right in cycle:
        parts += [rel, right]
    return " ".join(parts)

"""Nonmonotonic consequence operators and the logical rules they may satisfy.

A :class:`ConsequenceOperator` sends a theory ``T`` to the theory of the
selected models of ``T``.  It is stored extensionally, as a table from model
sets to model sets, over a *universe* of admissible models.  The universe may
be a strict subset of all valuations: models outside it play no role.

Logical rules are checked on the *theory* side.  Deductively closed theories
are bitmasks over the finite set of formula classes (a class is a set of
admissible models; two formulas are in the same class iff they are equivalent
over the universe).  Rule premises such as ``T ⊆ Cl(T')`` are evaluated with
classical entailment on the actual formulas of the pool theories, and
disjunctions ``T ∨ T'`` are built formula by formula.  This keeps the logical
check an independent route from the algebraic checks in :mod:`prefkit.choice`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .choice import ChoiceFunction, PropertyVerdict
from .errors import DomainMissError
from .logic import (
    DomainFamily,
    Formula,
    ModelSet,
    Or,
    Theory,
    Vocabulary,
    dnf_of,
    is_subset,
    members,
    models_of,
    power_set,
    theory_of,
)

MAX_RULE_UNIVERSE = 10
"""Largest universe (in models) for which logical rules are checked."""


@dataclass(frozen=True)
class ConsequenceOperator:
    """Extensional consequence operator ``T ↦ Th(select(M(T)))``.

    ``table`` maps a set of admissible models to the selected subset.  A
    theory whose model set is missing from the table cannot be evaluated and
    raises :class:`~prefkit.errors.DomainMissError`.
    """

    vocab: Vocabulary
    universe: ModelSet
    table: Mapping[ModelSet, ModelSet] = field(hash=False)

    def __post_init__(self) -> None:
        if not is_subset(self.universe, self.vocab.full):
            raise ValueError("universe contains models outside the vocabulary")
        object.__setattr__(self, "table", dict(self.table))

    @classmethod
    def from_function(
        cls,
        vocab: Vocabulary,
        fn: Callable[[Theory], Sequence[Formula]],
        universe: Optional[ModelSet] = None,
    ) -> "ConsequenceOperator":
        """Tabulate a theory-to-theory function on canonical theories."""
        u = vocab.full if universe is None else universe
        table = {}
        for x in power_set(u):
            table[x] = models_of(tuple(fn(theory_of(x, vocab))), vocab) & u
        return cls(vocab, u, table)

    def models(self, theory: Sequence[Formula] | Formula) -> ModelSet:
        """Admissible models of a theory."""
        return models_of(theory, self.vocab) & self.universe

    def select(self, x: ModelSet) -> ModelSet:
        try:
            return self.table[x]
        except KeyError:
            raise DomainMissError(
                x, f"the operator is undefined on the model set {sorted(members(x))}"
            ) from None

    def closure(self, theory: Sequence[Formula] | Formula) -> Theory:
        """The nonmonotonic consequences of ``theory`` as a (canonical) theory."""
        return theory_of(self.select(self.models(theory)), self.vocab)

    def nm_entails(self, theory: Sequence[Formula] | Formula, phi: Formula) -> bool:
        """``T |~ φ``."""
        return is_subset(self.select(self.models(theory)), self.models(phi))


# ---------------------------------------------------------------------------
# Translations between the algebraic and the logical side
# ---------------------------------------------------------------------------


def _vocab_for(universe: ModelSet) -> Vocabulary:
    n = 0
    while (1 << (1 << n)) <= universe:
        n += 1
    return Vocabulary.default(n)


def logic_from_mu(f: ChoiceFunction, vocab: Optional[Vocabulary] = None) -> ConsequenceOperator:
    """Read a choice function on model sets as a consequence operator.

    Universe elements are taken as model indices of ``vocab`` (by default the
    smallest conventional vocabulary that has enough models).  Queries on
    theories whose model set is outside ``f``'s domain raise a domain-miss error.
    """
    vocab = vocab or _vocab_for(f.universe)
    return ConsequenceOperator(vocab, f.universe, dict(f.table))


def mu_from_logic(c: ConsequenceOperator) -> ChoiceFunction:
    """Recover ``f(M(T)) = M(closure(T))`` by going through actual theories."""
    table = {}
    for x in power_set(c.universe):
        t = theory_of(x, c.vocab)
        table[x] = c.models(c.closure(t))
    return ChoiceFunction(DomainFamily.power_set(c.universe), table)


# ---------------------------------------------------------------------------
# Closed theories as bitmasks over formula classes
# ---------------------------------------------------------------------------


class _ClassAlgebra:
    """Formula classes over a universe and closed theories as class bitmasks."""

    def __init__(self, universe: ModelSet) -> None:
        self.universe = universe
        self.elems = members(universe)
        k = len(self.elems)
        if k > MAX_RULE_UNIVERSE:
            raise ValueError(
                f"logical rules are checked only for universes of at most "
                f"{MAX_RULE_UNIVERSE} models (got {k})"
            )
        self.classes = power_set(universe)
        self.index = {s: i for i, s in enumerate(self.classes)}
        self.all_mask = (1 << len(self.classes)) - 1
        th = {}
        for s in self.classes:
            m = 0
            for t in self.classes:
                if s & ~t == 0:
                    m |= 1 << self.index[t]
            th[s] = m
        self._th = th
        self._mods: dict[int, ModelSet] = {}

    def bit(self, s: ModelSet) -> int:
        return 1 << self.index[s]

    def th(self, s: ModelSet) -> int:
        """The closed theory of a model set: all classes containing it."""
        return self._th[s]

    def mods(self, mask: int) -> ModelSet:
        """Models of a set of classes (their intersection)."""
        r = self._mods.get(mask)
        if r is None:
            r = self.universe
            m = mask
            while m:
                low = m & -m
                r &= self.classes[low.bit_length() - 1]
                m ^= low
            self._mods[mask] = r
        return r


@dataclass(frozen=True)
class TheoryPool:
    """A finite pool of theories used to instantiate rule schemata."""

    vocab: Vocabulary
    universe: ModelSet
    theories: tuple[Theory, ...]

    @classmethod
    def canonical(cls, vocab: Vocabulary, universe: ModelSet) -> "TheoryPool":
        """One canonical theory for every set of admissible models."""
        return cls(vocab, universe, tuple(theory_of(x, vocab) for x in power_set(universe)))


class _PoolData:
    """Operator-independent facts about a pool, computed once."""

    def __init__(self, pool: TheoryPool) -> None:
        v, u = pool.vocab, pool.universe
        self.pool = pool
        self.alg = _ClassAlgebra(u)
        ts = pool.theories
        n = len(ts)
        self.n = n
        self.pm = [models_of(t, v) & u for t in ts]
        self.fclasses = [[models_of(phi, v) & u for phi in t] for t in ts]
        self.cl = [self.alg.th(m) for m in self.pm]
        self.union = [[models_of(ts[i] + ts[j], v) & u for j in range(n)] for i in range(n)]
        self.disj = [[_disjunction_models(ts[i], ts[j], v) & u for j in range(n)] for i in range(n)]
        # derives[i][j]: every formula of T_i follows classically from T_j.
        self.derives = [
            [all(is_subset(self.pm[j], fc) for fc in self.fclasses[i]) for j in range(n)]
            for i in range(n)
        ]


def _disjunction_models(t1: Theory, t2: Theory, vocab: Vocabulary) -> ModelSet:
    """Models of ``T ∨ T' = {φ ∨ ψ : φ ∈ T, ψ ∈ T'}``."""
    disj = tuple(Or(a, b) for a in t1 for b in t2)
    return models_of(disj, vocab)


@lru_cache(maxsize=32)
def _pool_data(pool: TheoryPool) -> _PoolData:
    return _PoolData(pool)


class _View:
    """Per-operator values of the nonmonotonic closure on a pool."""

    def __init__(self, c: ConsequenceOperator, pd: _PoolData) -> None:
        self.c = c
        self.pd = pd
        alg = pd.alg
        th = alg.th
        sel = c.table.get
        self.sel = sel

        def k(m):
            s = sel(m)
            return None if s is None else th(s)

        self.K = [k(m) for m in pd.pm]
        self.KU = [[k(m) for m in row] for row in pd.union]
        self.KV = [[k(m) for m in row] for row in pd.disj]

    def k_of(self, m: ModelSet) -> Optional[int]:
        s = self.sel(m)
        return None if s is None else self.pd.alg.th(s)


# Each rule generator yields (result, instance) pairs where result is True,
# False or None (skipped: a needed model set is outside the operator's table)
# and instance is a tuple of ("kind", index) slot values for witness display.

def _pairs(v: _View):
    n = v.pd.n
    for i in range(n):
        for j in range(n):
            yield i, j


def _r_and(v: _View):
    alg = v.pd.alg
    classes = alg.classes
    for i in range(v.pd.n):
        k = v.K[i]
        if k is None:
            yield None, ()
            continue
        for a in classes:
            if not k & alg.bit(a):
                continue
            for b in classes:
                if not k & alg.bit(b):
                    continue
                yield bool(k & alg.bit(a & b)), (("T", i), ("psi", a), ("psi'", b))


def _pair_rule(test):
    def gen(v: _View):
        for i, j in _pairs(v):
            r = test(v, i, j)
            yield r, (("T", i), ("T'", j))

    return gen


def _single_rule(test):
    def gen(v: _View):
        for i in range(v.pd.n):
            yield test(v, i), (("T", i),)

    return gen


def _none_in(*xs):
    return any(x is None for x in xs)


def _t_or(v, i, j):
    a, b, c = v.K[i], v.K[j], v.KV[i][j]
    if _none_in(a, b, c):
        return None
    return a & b & ~c == 0


def _t_wor(v, i, j):
    a, c = v.K[i], v.KV[i][j]
    if _none_in(a, c):
        return None
    return a & v.pd.cl[j] & ~c == 0


def _t_disjor(v, i, j):
    if v.pd.union[i][j]:
        return True
    return _t_or(v, i, j)


def _t_lle(v, i, j):
    if v.pd.cl[i] != v.pd.cl[j]:
        return True
    if _none_in(v.K[i], v.K[j]):
        return None
    return v.K[i] == v.K[j]


def _r_rw(v: _View):
    alg = v.pd.alg
    for i in range(v.pd.n):
        k = v.K[i]
        if k is None:
            yield None, ()
            continue
        for a in alg.classes:
            if not k & alg.bit(a):
                continue
            for b in alg.classes:
                if a & ~b == 0:  # ⊢ ψ → ψ'
                    yield bool(k & alg.bit(b)), (("T", i), ("psi", a), ("psi'", b))


def _t_ccl(v, i):
    k = v.K[i]
    if k is None:
        return None
    alg = v.pd.alg
    return alg.th(alg.mods(k)) == k


def _t_sc(v, i):
    k = v.K[i]
    if k is None:
        return None
    return v.pd.cl[i] & ~k == 0


def _r_ref(v: _View):
    alg = v.pd.alg
    for i in range(v.pd.n):
        for a in alg.classes:
            k = v.k_of(v.pd.pm[i] & a)
            if k is None:
                yield None, ()
                continue
            yield bool(k & alg.bit(a)), (("T", i), ("alpha", a))


def _t_cp(v, i):
    k = v.K[i]
    if k is None:
        return None
    if k & v.pd.alg.bit(0):
        return v.pd.pm[i] == 0
    return True


def _t_pr(v, i, j):
    ku, k = v.KU[i][j], v.K[i]
    if _none_in(ku, k):
        return None
    alg = v.pd.alg
    return ku & ~alg.th(alg.mods(k) & v.pd.pm[j]) == 0


def _cut_premise(v, i, j):
    # T ⊆ Cl(T') ⊆ K(T)
    k = v.K[i]
    return v.pd.derives[i][j] and k is not None and v.pd.cl[j] & ~k == 0


def _t_cut(v, i, j):
    if v.K[i] is None:
        return None
    if not _cut_premise(v, i, j):
        return True
    if v.K[j] is None:
        return None
    return v.K[j] & ~v.K[i] == 0


def _t_cm(v, i, j):
    if v.K[i] is None:
        return None
    if not _cut_premise(v, i, j):
        return True
    if v.K[j] is None:
        return None
    return v.K[i] & ~v.K[j] == 0


def _t_cum(v, i, j):
    if v.K[i] is None:
        return None
    if not _cut_premise(v, i, j):
        return True
    if v.K[j] is None:
        return None
    return v.K[i] == v.K[j]


def _r_resm(v: _View):
    alg = v.pd.alg
    for i in range(v.pd.n):
        k = v.K[i]
        if k is None:
            yield None, ()
            continue
        for a in alg.classes:
            if not k & alg.bit(a):
                continue
            ka = v.k_of(v.pd.pm[i] & a)
            for b in alg.classes:
                if not k & alg.bit(b):
                    continue
                if ka is None:
                    yield None, ()
                    continue
                yield bool(ka & alg.bit(b)), (("T", i), ("alpha", a), ("beta", b))


def _t_subsup(v, i, j):
    ki, kj = v.K[i], v.K[j]
    if _none_in(ki, kj):
        return None
    alg = v.pd.alg
    if not all(kj & alg.bit(fc) for fc in v.pd.fclasses[i]):
        return True
    if not all(ki & alg.bit(fc) for fc in v.pd.fclasses[j]):
        return True
    return ki == kj


def _ratm_parts(v, i, j):
    ki, kj = v.K[i], v.K[j]
    if _none_in(ki, kj):
        return None
    alg = v.pd.alg
    if not (v.pd.pm[i] & alg.mods(kj)) or not v.pd.derives[j][i]:
        return True
    return ki, alg.th(alg.mods(kj) & v.pd.pm[i])


def _t_ratm(v, i, j):
    r = _ratm_parts(v, i, j)
    if r is None or r is True:
        return r
    ki, rhs = r
    return rhs & ~ki == 0


def _t_ratm_eq(v, i, j):
    r = _ratm_parts(v, i, j)
    if r is None or r is True:
        return r
    ki, rhs = r
    return rhs == ki


def _t_log_eq_prime(v, i, j):
    kj = v.K[j]
    if kj is None:
        return None
    alg = v.pd.alg
    if not alg.mods(kj) & v.pd.pm[i]:
        return True
    ku = v.KU[i][j]
    if ku is None:
        return None
    return ku == alg.th(alg.mods(kj) & v.pd.pm[i])


def _t_log_par(v, i, j):
    ki, kj, kv = v.K[i], v.K[j], v.KV[i][j]
    if _none_in(ki, kj, kv):
        return None
    return kv in (ki, kj, ki & kj)


def _cup_premise(v, i, j):
    alg = v.pd.alg
    mi, mj = alg.mods(v.K[i]), alg.mods(v.K[j])
    return bool(mj & v.pd.pm[i]) and not (mj & mi)


def _t_log_cup(v, i, j):
    if _none_in(v.K[i], v.K[j], v.KV[i][j]):
        return None
    if not _cup_premise(v, i, j):
        return True
    return v.pd.alg.mods(v.KV[i][j]) & v.pd.pm[j] == 0


def _t_log_cup_prime(v, i, j):
    if _none_in(v.K[i], v.K[j], v.KV[i][j]):
        return None
    if not _cup_premise(v, i, j):
        return True
    return v.KV[i][j] == v.K[i]


@dataclass(frozen=True)
class LogicRule:
    id: str
    label: str
    gen: Callable
    text: str
    group: str


LOGIC_RULES: dict[str, LogicRule] = {
    r.id: r
    for r in [
        LogicRule("AND", "(AND)", _r_and, "T |~ ψ, T |~ ψ′ ⇒ T |~ ψ∧ψ′", "Basics"),
        LogicRule("OR", "(OR)", _pair_rule(_t_or), "K(T) ∩ K(T′) ⊆ K(T∨T′)", "Basics"),
        LogicRule("wOR", "(wOR)", _pair_rule(_t_wor), "K(T) ∩ Cl(T′) ⊆ K(T∨T′)", "Basics"),
        LogicRule("disjOR", "(disjOR)", _pair_rule(_t_disjor), "¬Con(T∪T′) ⇒ K(T) ∩ K(T′) ⊆ K(T∨T′)", "Basics"),
        LogicRule("LLE", "(LLE)", _pair_rule(_t_lle), "Cl(T) = Cl(T′) ⇒ K(T) = K(T′)", "Basics"),
        LogicRule("RW", "(RW)", _r_rw, "T |~ ψ, ⊢ ψ→ψ′ ⇒ T |~ ψ′", "Basics"),
        LogicRule("CCL", "(CCL)", _single_rule(_t_ccl), "K(T) is classically closed", "Basics"),
        LogicRule("SC", "(SC)", _single_rule(_t_sc), "Cl(T) ⊆ K(T)", "Basics"),
        LogicRule("REF", "(REF)", _r_ref, "T ∪ {α} |~ α", "Basics"),
        LogicRule("CP", "(CP)", _single_rule(_t_cp), "T |~ ⊥ ⇒ T ⊢ ⊥", "Basics"),
        LogicRule("PR", "(PR)", _pair_rule(_t_pr), "K(T∪T′) ⊆ Cl(K(T) ∪ T′)", "Basics"),
        LogicRule("CUT", "(CUT)", _pair_rule(_t_cut), "T ⊆ Cl(T′) ⊆ K(T) ⇒ K(T′) ⊆ K(T)", "Basics"),
        LogicRule("CM", "(CM)", _pair_rule(_t_cm), "T ⊆ Cl(T′) ⊆ K(T) ⇒ K(T) ⊆ K(T′)", "Cumulativity"),
        LogicRule("ResM", "(ResM)", _r_resm, "T |~ α, β ⇒ T ∪ {α} |~ β", "Cumulativity"),
        LogicRule("CUM", "(CUM)", _pair_rule(_t_cum), "T ⊆ Cl(T′) ⊆ K(T) ⇒ K(T) = K(T′)", "Cumulativity"),
        LogicRule("subsup", "(⊆⊇)", _pair_rule(_t_subsup), "T ⊆ K(T′), T′ ⊆ K(T) ⇒ K(T) = K(T′)", "Cumulativity"),
        LogicRule("RatM", "(RatM)", _pair_rule(_t_ratm), "Con(T ∪ K(T′)), T ⊢ T′ ⇒ K(T) ⊇ Cl(K(T′) ∪ T)", "Rationality"),
        LogicRule("RatM_eq", "(RatM=)", _pair_rule(_t_ratm_eq), "Con(T ∪ K(T′)), T ⊢ T′ ⇒ K(T) = Cl(K(T′) ∪ T)", "Rationality"),
        LogicRule("log_eq_prime", "(Log=′)", _pair_rule(_t_log_eq_prime), "Con(K(T′) ∪ T) ⇒ K(T∪T′) = Cl(K(T′) ∪ T)", "Rationality"),
        LogicRule("log_par", "(Log‖)", _pair_rule(_t_log_par), "K(T∨T′) ∈ {K(T), K(T′), K(T) ∩ K(T′)}", "Rationality"),
        LogicRule("log_cup", "(Log∪)", _pair_rule(_t_log_cup), "Con(K(T′)∪T), ¬Con(K(T′)∪K(T)) ⇒ ¬Con(K(T∨T′) ∪ T′)", "Rationality"),
        LogicRule("log_cup_prime", "(Log∪′)", _pair_rule(_t_log_cup_prime), "Con(K(T′)∪T), ¬Con(K(T′)∪K(T)) ⇒ K(T∨T′) = K(T)", "Rationality"),
    ]
}
"""All supported logical rules, keyed by their ASCII identifier."""


class RuleChecker:
    """Check logical rules of one operator on one pool, sharing the work."""

    def __init__(self, c: ConsequenceOperator, pool: Optional[TheoryPool] = None) -> None:
        if pool is None:
            pool = TheoryPool.canonical(c.vocab, c.universe)
        if pool.vocab != c.vocab or pool.universe != c.universe:
            raise ValueError("pool and operator must share vocabulary and universe")
        self.c = c
        self.pool = pool
        self.view = _View(c, _pool_data(pool))

    def holds(self, rule: str) -> bool:
        for r, _ in LOGIC_RULES[rule].gen(self.view):
            if r is False:
                return False
        return True

    def check(self, rule: str) -> PropertyVerdict:
        try:
            spec = LOGIC_RULES[rule]
        except KeyError:
            raise ValueError(f"unknown rule {rule!r}") from None
        checked = skipped = 0
        for r, inst in spec.gen(self.view):
            if r is None:
                skipped += 1
                continue
            checked += 1
            if not r:
                return PropertyVerdict(rule, False, self._witness(inst), checked, skipped)
        return PropertyVerdict(rule, True, None, checked, skipped)

    def _witness(self, inst) -> dict:
        out = {}
        for name, val in inst:
            if name.startswith("T"):
                out[name] = "; ".join(str(phi) for phi in self.pool.theories[val])
            else:
                out[name] = str(dnf_of(val, self.c.vocab))
        return out


def check_logic_rule(
    c: ConsequenceOperator, rule: str, pool: Optional[TheoryPool] = None
) -> PropertyVerdict:
    """Check one logical rule of :data:`LOGIC_RULES` over a theory pool.

    The default pool has one canonical theory per set of admissible models,
    which is complete for a finite universe.
    """
    return RuleChecker(c, pool).check(rule)

"""Choice functions and the algebraic (μ-) conditions on them.

A choice function maps every set ``X`` of a :class:`~prefkit.logic.DomainFamily`
to a subset ``f(X)``.  Its algebraic properties are checked by exhaustive
instantiation over the domain.  Instances that would need a set outside the
domain (for example ``f(X ∪ Y)`` when ``X ∪ Y`` is absent) are skipped and
counted rather than silently treated as true.

Instances are enumerated in a fixed order: quantified sets are drawn from the
domain in ascending bitmask order and combined lexicographically in the order
they are quantified.  The first failing instance is therefore the
lexicographically least witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .errors import DomainMissError, EnumerationCapError
from .logic import DomainFamily, ModelSet, format_set, is_subset, members, size, submasks

DEFAULT_ENUMERATION_CAP = 10**7


# ---------------------------------------------------------------------------
# Choice functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChoiceFunction:
    """A finite choice function ``f : domain → P(universe)``.

    ``table`` maps each domain set to its chosen subset.  ``labels`` optionally
    names the universe elements for display (``labels[i]`` names element ``i``).
    """

    domain: DomainFamily
    table: Mapping[ModelSet, ModelSet]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        table = dict(self.table)
        missing = [x for x in self.domain.sets if x not in table]
        if missing:
            raise DomainMissError(missing[0], f"no value given for domain set {missing[0]:#b}")
        extra = [x for x in table if x not in self.domain]
        if extra:
            raise DomainMissError(extra[0], f"value given for {extra[0]:#b}, which is not in the domain")
        for x, fx in table.items():
            if not is_subset(fx, self.domain.universe):
                raise ValueError(f"f({x:#b}) = {fx:#b} leaves the universe")
        object.__setattr__(self, "table", table)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_callable(
        cls,
        domain: DomainFamily,
        fn: Callable[[ModelSet], ModelSet],
        labels: Optional[Sequence[str]] = None,
    ) -> "ChoiceFunction":
        """Tabulate ``fn`` over ``domain``."""
        return cls(domain, {x: fn(x) for x in domain.sets}, tuple(labels) if labels else None)

    @property
    def universe(self) -> ModelSet:
        return self.domain.universe

    def __call__(self, x: ModelSet) -> ModelSet:
        try:
            return self.table[x]
        except KeyError:
            raise DomainMissError(x) from None

    def get(self, x: ModelSet) -> Optional[ModelSet]:
        """``f(x)``, or ``None`` when ``x`` is outside the domain."""
        return self.table.get(x)

    def fmt(self, s: ModelSet) -> str:
        return format_set(s, self.labels)

    def __hash__(self) -> int:
        return hash((self.domain, tuple(sorted(self.table.items()))))


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of checking one property exhaustively.

    ``witness`` is present exactly when ``holds`` is false; it maps the names
    of the quantified variables to the failing instance.  ``checked`` counts
    evaluated instances and ``skipped`` those that needed an out-of-domain set.
    """

    property_id: str
    holds: bool
    witness: Optional[dict] = None
    checked: int = 0
    skipped: int = 0
    note: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - convenience only
        return self.holds


# ---------------------------------------------------------------------------
# The μ-conditions
# ---------------------------------------------------------------------------

# Each condition is described by the names of its quantified domain sets and a
# test ``(get, *sets) -> True | False | None``: ``get`` returns f(X) or None
# for out-of-domain X; ``None`` as the result marks a skipped instance.


def _sub(a: Optional[int], b: Optional[int]) -> Optional[bool]:
    if a is None or b is None:
        return None
    return a & ~b == 0


def _t_sub(g, x):
    return g(x) & ~x == 0


def _t_empty(g, x):
    return g(x) != 0 or x == 0


def _t_pr(g, x, y):
    if x & ~y:
        return True
    return g(y) & x & ~g(x) == 0


def _t_pr_prime(g, x, y):
    fxy = g(x & y)
    if fxy is None:
        return None
    return g(x) & y & ~fxy == 0


def _t_or(g, x, y):
    fu = g(x | y)
    if fu is None:
        return None
    return fu & ~(g(x) | g(y)) == 0


def _t_wor(g, x, y):
    fu = g(x | y)
    if fu is None:
        return None
    return fu & ~(g(x) | y) == 0


def _t_disjor(g, x, y):
    if x & y:
        return True
    return _t_or(g, x, y)


def _cum_premise(fx, x, y):
    return fx & ~y == 0 and y & ~x == 0


def _t_cut(g, x, y):
    fx = g(x)
    if not _cum_premise(fx, x, y):
        return True
    return fx & ~g(y) == 0


def _t_cm(g, x, y):
    fx = g(x)
    if not _cum_premise(fx, x, y):
        return True
    return g(y) & ~fx == 0


def _t_cum(g, x, y):
    fx = g(x)
    if not _cum_premise(fx, x, y):
        return True
    return g(y) == fx


def _t_resm(g, x, a, b):
    fx = g(x)
    if fx & ~(a & b):
        return True
    fxa = g(x & a)
    if fxa is None:
        return None
    return fxa & ~b == 0


def _t_subsup(g, x, y):
    fx, fy = g(x), g(y)
    if fx & ~y or fy & ~x:
        return True
    return fx == fy


def _t_ratm(g, x, y):
    if x & ~y:
        return True
    fy = g(y)
    if not x & fy:
        return True
    return g(x) & ~(fy & x) == 0


def _t_eq(g, x, y):
    if x & ~y:
        return True
    fy = g(y)
    if not x & fy:
        return True
    return g(x) == fy & x


def _t_eq_prime(g, x, y):
    fy = g(y)
    if not fy & x:
        return True
    fyx = g(y & x)
    if fyx is None:
        return None
    return fyx == fy & x


def _t_par(g, x, y):
    fu = g(x | y)
    if fu is None:
        return None
    fx, fy = g(x), g(y)
    return fu in (fx, fy, fx | fy)


def _t_cup(g, x, y):
    fx = g(x)
    if not g(y) & x & ~fx:
        return True
    fu = g(x | y)
    if fu is None:
        return None
    return fu & y == 0


def _t_cup_prime(g, x, y):
    fx = g(x)
    if not g(y) & x & ~fx:
        return True
    fu = g(x | y)
    if fu is None:
        return None
    return fu == fx


def _mu_in_offender(g, x) -> tuple[Optional[int], bool]:
    """Return (offending element, skipped) for the element condition at ``x``."""
    skipped = False
    for a in members(x & ~g(x)):
        bit_a = 1 << a
        found = False
        incomplete = False
        for b in members(x):
            fab = g(bit_a | (1 << b))
            if fab is None:
                incomplete = True
                continue
            if not fab & bit_a:
                found = True
                break
        if found:
            continue
        if incomplete:
            skipped = True
            continue
        return a, skipped
    return None, skipped


def _t_in(g, x):
    offender, skipped = _mu_in_offender(g, x)
    if offender is not None:
        return False
    return None if skipped else True


@dataclass(frozen=True)
class MuCondition:
    """Description of one algebraic condition on choice functions."""

    id: str
    label: str
    slots: tuple[str, ...]
    test: Callable
    text: str
    group: str


MU_CONDITIONS: dict[str, MuCondition] = {
    c.id: c
    for c in [
        MuCondition("mu_sub", "(μ⊆)", ("X",), _t_sub, "f(X) ⊆ X", "Basics"),
        MuCondition("mu_empty", "(μ∅)", ("X",), _t_empty, "f(X) = ∅ ⇒ X = ∅", "Basics"),
        MuCondition("mu_empty_fin", "(μ∅fin)", ("X",), _t_empty, "X ≠ ∅ ⇒ f(X) ≠ ∅ (finite X)", "Basics"),
        MuCondition("mu_OR", "(μOR)", ("X", "Y"), _t_or, "f(X∪Y) ⊆ f(X) ∪ f(Y)", "Basics"),
        MuCondition("mu_wOR", "(μwOR)", ("X", "Y"), _t_wor, "f(X∪Y) ⊆ f(X) ∪ Y", "Basics"),
        MuCondition("mu_disjOR", "(μdisjOR)", ("X", "Y"), _t_disjor, "X∩Y = ∅ ⇒ f(X∪Y) ⊆ f(X) ∪ f(Y)", "Basics"),
        MuCondition("mu_PR", "(μPR)", ("X", "Y"), _t_pr, "X ⊆ Y ⇒ f(Y) ∩ X ⊆ f(X)", "Basics"),
        MuCondition("mu_PR_prime", "(μPR′)", ("X", "Y"), _t_pr_prime, "f(X) ∩ Y ⊆ f(X∩Y)", "Basics"),
        MuCondition("mu_CUT", "(μCUT)", ("X", "Y"), _t_cut, "f(X) ⊆ Y ⊆ X ⇒ f(X) ⊆ f(Y)", "Basics"),
        MuCondition("mu_CM", "(μCM)", ("X", "Y"), _t_cm, "f(X) ⊆ Y ⊆ X ⇒ f(Y) ⊆ f(X)", "Cumulativity"),
        MuCondition("mu_ResM", "(μResM)", ("X", "A", "B"), _t_resm, "f(X) ⊆ A∩B ⇒ f(X∩A) ⊆ B", "Cumulativity"),
        MuCondition("mu_CUM", "(μCUM)", ("X", "Y"), _t_cum, "f(X) ⊆ Y ⊆ X ⇒ f(Y) = f(X)", "Cumulativity"),
        MuCondition("mu_subsup", "(μ⊆⊇)", ("X", "Y"), _t_subsup, "f(X) ⊆ Y, f(Y) ⊆ X ⇒ f(X) = f(Y)", "Cumulativity"),
        MuCondition("mu_RatM", "(μRatM)", ("X", "Y"), _t_ratm, "X ⊆ Y, X∩f(Y) ≠ ∅ ⇒ f(X) ⊆ f(Y)∩X", "Rationality"),
        MuCondition("mu_eq", "(μ=)", ("X", "Y"), _t_eq, "X ⊆ Y, X∩f(Y) ≠ ∅ ⇒ f(X) = f(Y)∩X", "Rationality"),
        MuCondition("mu_eq_prime", "(μ=′)", ("X", "Y"), _t_eq_prime, "f(Y)∩X ≠ ∅ ⇒ f(Y∩X) = f(Y)∩X", "Rationality"),
        MuCondition("mu_par", "(μ‖)", ("X", "Y"), _t_par, "f(X∪Y) ∈ {f(X), f(Y), f(X)∪f(Y)}", "Rationality"),
        MuCondition("mu_cup", "(μ∪)", ("X", "Y"), _t_cup, "f(Y)∩(X−f(X)) ≠ ∅ ⇒ f(X∪Y)∩Y = ∅", "Rationality"),
        MuCondition("mu_cup_prime", "(μ∪′)", ("X", "Y"), _t_cup_prime, "f(Y)∩(X−f(X)) ≠ ∅ ⇒ f(X∪Y) = f(X)", "Rationality"),
        MuCondition("mu_in", "(μ∈)", ("X",), _t_in, "a ∈ X−f(X) ⇒ ∃b∈X. a ∉ f({a,b})", "Rationality"),
    ]
}
"""All supported conditions, keyed by their ASCII identifier."""


def _offending_element(prop: str, f: ChoiceFunction, w: dict) -> Optional[int]:
    """Pick the least element that makes a failing instance fail."""
    g = f.get
    x = w.get("X", 0)
    y = w.get("Y", 0)
    diff = 0
    if prop == "mu_sub":
        diff = g(x) & ~x
    elif prop == "mu_PR":
        diff = g(y) & x & ~g(x)
    elif prop == "mu_PR_prime":
        diff = g(x) & y & ~g(x & y)
    elif prop in ("mu_OR", "mu_disjOR"):
        diff = g(x | y) & ~(g(x) | g(y))
    elif prop == "mu_wOR":
        diff = g(x | y) & ~(g(x) | y)
    elif prop in ("mu_CUT", "mu_CM", "mu_CUM", "mu_subsup"):
        diff = g(x) ^ g(y)
    elif prop == "mu_ResM":
        diff = g(x & w["A"]) & ~w["B"]
    elif prop in ("mu_RatM", "mu_eq"):
        diff = g(x) ^ (g(y) & x)
    elif prop == "mu_eq_prime":
        diff = g(y & x) ^ (g(y) & x)
    elif prop == "mu_cup":
        diff = g(x | y) & y
    elif prop == "mu_cup_prime":
        diff = g(x | y) ^ g(x)
    elif prop == "mu_in":
        return _mu_in_offender(g, x)[0]
    elif prop == "mu_par":
        return None
    ms = members(diff)
    return ms[0] if ms else None


def check_mu_property(f: ChoiceFunction, prop: str) -> PropertyVerdict:
    """Check one condition of :data:`MU_CONDITIONS` exhaustively on ``f``."""
    try:
        cond = MU_CONDITIONS[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}") from None
    g = f.table.get
    test = cond.test
    sets = f.domain.sets
    checked = skipped = 0
    for combo in product(sets, repeat=len(cond.slots)):
        r = test(g, *combo)
        if r is None:
            skipped += 1
            continue
        checked += 1
        if not r:
            witness = dict(zip(cond.slots, combo))
            element = _offending_element(prop, f, witness)
            if element is not None:
                witness["element"] = element
            return PropertyVerdict(prop, False, witness, checked, skipped)
    return PropertyVerdict(prop, True, None, checked, skipped)


def mu_holds(f: ChoiceFunction, prop: str) -> bool:
    """Fast boolean form of :func:`check_mu_property` (stops at the first failure)."""
    cond = MU_CONDITIONS[prop]
    g = f.table.get
    test = cond.test
    for combo in product(f.domain.sets, repeat=len(cond.slots)):
        if test(g, *combo) is False:
            return False
    return True


def check_all_mu(f: ChoiceFunction) -> list[PropertyVerdict]:
    """Check every supported condition, in the canonical order."""
    return [check_mu_property(f, p) for p in MU_CONDITIONS]


def witness_fails(f: ChoiceFunction, prop: str, witness: dict) -> bool:
    """Re-evaluate a witness: True iff the instance really violates ``prop``."""
    cond = MU_CONDITIONS[prop]
    args = [witness[s] for s in cond.slots]
    return cond.test(f.table.get, *args) is False


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def count_choice_functions(domain: DomainFamily) -> int:
    """Number of functions with ``f(X) ⊆ X`` on ``domain``."""
    n = 1
    for x in domain.sets:
        n <<= size(x)
    return n


def enumerate_choice_functions(
    universe: ModelSet,
    domain: Optional[DomainFamily] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
    labels: Optional[Sequence[str]] = None,
) -> Iterator[ChoiceFunction]:
    """Yield every ``f`` with ``f(X) ⊆ X`` over ``domain`` in a fixed order.

    ``domain`` defaults to the full power set of ``universe`` (empty set
    included).  Raises :class:`EnumerationCapError` before yielding anything if
    the count exceeds ``cap``.
    """
    if domain is None:
        domain = DomainFamily.power_set(universe)
    total = count_choice_functions(domain)
    if total > cap:
        raise EnumerationCapError(total, cap)
    sets = domain.sets
    choices = [submasks(x) for x in sets]
    lab = tuple(labels) if labels else None
    for values in product(*choices):
        yield ChoiceFunction(domain, dict(zip(sets, values)), lab)

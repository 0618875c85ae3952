"""Implication tables between algebraic conditions, and between the algebraic
and the logical side, evaluated on individual choice functions.

Two tables are encoded as data:

* :data:`MU_ROWS` – implications (and non-implications) between μ-conditions,
  each with the domain closure conditions it needs;
* :data:`ALG_LOG_ROWS` – correspondences between a logical rule and a
  μ-condition, with the extra μ-conditions a direction may need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .choice import ChoiceFunction, MU_CONDITIONS, PropertyVerdict, check_mu_property, mu_holds
from .consequence import RuleChecker, logic_from_mu
from .logic import Vocabulary

IMPLIES = "implies"
EQUIV = "equiv"
NOT_IMPLIES = "not-implies"
NOT_IMPLIES_INFINITE = "not-implies-infinite"


@dataclass(frozen=True)
class MuRow:
    """One row of the μ-implication table.

    ``lhs`` ⇒ ``rhs`` whenever the domain has every closure flag in ``flags``
    (and, for ``flags_absent``, lacks those flags).  ``kind`` says whether the
    row claims an implication, an equivalence, or a non-implication.
    """

    id: str
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]
    kind: str = IMPLIES
    flags: tuple[str, ...] = ()
    flags_absent: tuple[str, ...] = ()
    full_domain_only: bool = False
    note: str = ""


MU_ROWS: dict[str, MuRow] = {
    r.id: r
    for r in [
        MuRow("1.1", ("mu_PR", "mu_sub"), ("mu_PR_prime",), flags=("intersection",)),
        MuRow("1.2", ("mu_PR_prime",), ("mu_PR",)),
        MuRow("2.1", ("mu_PR", "mu_sub"), ("mu_OR",)),
        MuRow("2.2", ("mu_OR", "mu_sub"), ("mu_PR",), flags=("difference",)),
        MuRow("3", ("mu_PR",), ("mu_CUT",)),
        MuRow("4", ("mu_sub", "mu_subsup", "mu_CUM", "mu_RatM"), ("mu_PR",),
              kind=NOT_IMPLIES, flags=("intersection",)),
        MuRow("5.1", ("mu_CM", "mu_sub"), ("mu_ResM",), flags=("intersection",)),
        MuRow("5.2", ("mu_ResM",), ("mu_CM",)),
        MuRow("6", ("mu_CM", "mu_CUT"), ("mu_CUM",), kind=EQUIV),
        MuRow("7", ("mu_sub", "mu_subsup"), ("mu_CUM",)),
        MuRow("8", ("mu_sub", "mu_CUM"), ("mu_subsup",), flags=("intersection",)),
        MuRow("9", ("mu_sub", "mu_CUM"), ("mu_subsup",), kind=NOT_IMPLIES),
        MuRow("10", ("mu_RatM", "mu_PR"), ("mu_eq",)),
        MuRow("11", ("mu_eq",), ("mu_PR",)),
        MuRow("12.1", ("mu_eq", "mu_sub"), ("mu_eq_prime",), flags=("intersection",)),
        MuRow("12.2", ("mu_eq_prime",), ("mu_eq",)),
        MuRow("13", ("mu_sub", "mu_eq"), ("mu_cup",), flags=("union",)),
        MuRow("14", ("mu_sub", "mu_empty", "mu_eq"), ("mu_par", "mu_cup_prime", "mu_CUM"),
              flags=("union",)),
        MuRow("15", ("mu_sub", "mu_par"), ("mu_eq",), flags=("difference",)),
        MuRow("16", ("mu_par", "mu_in", "mu_PR", "mu_sub"), ("mu_eq",),
              flags=("union", "singletons")),
        MuRow("17", ("mu_CUM", "mu_eq"), ("mu_in",), flags=("union", "singletons")),
        MuRow("18", ("mu_CUM", "mu_eq", "mu_sub"), ("mu_par",), flags=("union",)),
        MuRow("19", ("mu_PR", "mu_CUM", "mu_par"), ("mu_eq",), full_domain_only=True),
        MuRow("20", ("mu_sub", "mu_PR", "mu_eq"), ("mu_par",), kind=NOT_IMPLIES_INFINITE),
        MuRow("21", ("mu_sub", "mu_PR", "mu_par"), ("mu_eq",), kind=NOT_IMPLIES_INFINITE,
              flags_absent=("difference",)),
        MuRow("22", ("mu_sub", "mu_PR", "mu_CUM", "mu_eq", "mu_cup"), ("mu_in",),
              kind=NOT_IMPLIES_INFINITE),
    ]
}


@dataclass(frozen=True)
class RowVerdict:
    """Outcome of one table row on one choice function.

    ``status`` is one of

    * ``"not-applicable"`` – the domain lacks a closure condition of the row;
    * ``"vacuous"`` – the left-hand side fails, so nothing is claimed;
    * ``"confirmed"`` – both sides hold;
    * ``"counterexample"`` – the left-hand side holds and the right-hand side
      fails.  For a positive row this contradicts the row; for a
      non-implication row it witnesses the non-implication.

    ``holds`` is the truth of the conditional "lhs ⇒ rhs" on this function
    (true when not applicable or vacuous).
    """

    row: str
    status: str
    holds: bool
    failures: tuple[PropertyVerdict, ...] = ()
    note: str = ""


def _applicable(row: MuRow, f: ChoiceFunction) -> Optional[str]:
    d = f.domain
    for flag in row.flags:
        if not d.flag(flag):
            return f"domain not closed under {flag}" if flag != "singletons" else "domain lacks singletons"
    for flag in row.flags_absent:
        if d.flag(flag):
            return f"row concerns domains not closed under {flag}"
    if row.full_domain_only and not d.is_full_power_set:
        return "tested on full power-set domains only"
    return None


def _direction(f, lhs, rhs, cache) -> tuple[bool, list[str]]:
    def h(p):
        if p not in cache:
            cache[p] = mu_holds(f, p)
        return cache[p]

    if not all(h(p) for p in lhs):
        return False, []
    return True, [p for p in rhs if not h(p)]


def check_mu_base_row(
    row: str, f: ChoiceFunction, cache: Optional[dict] = None
) -> RowVerdict:
    """Evaluate one row of :data:`MU_ROWS` on ``f``.

    ``cache`` may map condition ids to precomputed truth values; it is filled
    in as a side effect, which lets callers evaluate many rows cheaply.
    """
    try:
        spec = MU_ROWS[row]
    except KeyError:
        raise ValueError(f"unknown row {row!r}") from None
    why = _applicable(spec, f)
    if why is not None:
        return RowVerdict(row, "not-applicable", True, note=why)
    cache = {} if cache is None else cache
    lhs_ok, failing = _direction(f, spec.lhs, spec.rhs, cache)
    if spec.kind == EQUIV:
        back_ok, back_failing = _direction(f, spec.rhs, spec.lhs, cache)
        failing = failing + back_failing
        lhs_ok = lhs_ok or back_ok
    if not lhs_ok:
        return RowVerdict(row, "vacuous", True)
    if not failing:
        return RowVerdict(row, "confirmed", True)
    verdicts = tuple(check_mu_property(f, p) for p in failing)
    return RowVerdict(row, "counterexample", False, verdicts)


# ---------------------------------------------------------------------------
# Algebraic / logical correspondence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgLogRow:
    """A logical rule and the μ-condition it corresponds to.

    ``to_mu`` lists the extra μ-conditions needed for "rule ⇒ condition";
    ``to_log`` those needed for "condition ⇒ rule".  ``None`` means the
    direction is not claimed.
    """

    id: str
    rule: str
    mu: str
    to_mu: Optional[tuple[str, ...]] = ()
    to_log: Optional[tuple[str, ...]] = ()


ALG_LOG_ROWS: dict[str, AlgLogRow] = {
    r.id: r
    for r in [
        AlgLogRow("1", "OR", "mu_OR"),
        AlgLogRow("2", "disjOR", "mu_disjOR"),
        AlgLogRow("3", "wOR", "mu_wOR"),
        AlgLogRow("4", "SC", "mu_sub"),
        AlgLogRow("5", "CP", "mu_empty"),
        AlgLogRow("6", "PR", "mu_PR", to_mu=(), to_log=("mu_sub",)),
        AlgLogRow("6.5", "PR", "mu_PR_prime", to_mu=None, to_log=()),
        AlgLogRow("7", "CUT", "mu_CUT"),
        AlgLogRow("8", "CM", "mu_CM"),
        AlgLogRow("9", "ResM", "mu_ResM"),
        AlgLogRow("10", "subsup", "mu_subsup"),
        AlgLogRow("11", "CUM", "mu_CUM"),
        AlgLogRow("12", "RatM", "mu_RatM"),
        AlgLogRow("13", "RatM_eq", "mu_eq"),
        AlgLogRow("14", "log_eq_prime", "mu_eq_prime"),
        AlgLogRow("15", "log_par", "mu_par"),
        AlgLogRow("16", "log_cup", "mu_cup", to_mu=("mu_sub", "mu_eq"), to_log=()),
        AlgLogRow("17", "log_cup_prime", "mu_cup_prime", to_mu=("mu_sub", "mu_eq"), to_log=()),
    ]
}


@dataclass(frozen=True)
class CoherenceVerdict:
    """Agreement of both sides of one correspondence row on one function."""

    row: str
    rule_holds: bool
    mu_holds: bool
    disagreements: tuple[str, ...]

    @property
    def agrees(self) -> bool:
        return not self.disagreements


def translation_coherence(
    f: ChoiceFunction, vocab: Vocabulary, rows: Optional[list[str]] = None
) -> list[CoherenceVerdict]:
    """Compare every correspondence row on ``f`` and its logical reading.

    A direction counts as a disagreement when its side conditions hold, its
    premise holds and its conclusion fails.
    """
    checker = RuleChecker(logic_from_mu(f, vocab))
    cache: dict[str, bool] = {}

    def mu(p):
        if p not in cache:
            cache[p] = mu_holds(f, p)
        return cache[p]

    out = []
    for rid in rows or list(ALG_LOG_ROWS):
        r = ALG_LOG_ROWS[rid]
        lh = checker.holds(r.rule)
        mh = mu(r.mu)
        bad = []
        if r.to_mu is not None and all(mu(p) for p in r.to_mu) and lh and not mh:
            bad.append(f"{r.rule} ⇒ {r.mu}")
        if r.to_log is not None and all(mu(p) for p in r.to_log) and mh and not lh:
            bad.append(f"{r.mu} ⇒ {r.rule}")
        out.append(CoherenceVerdict(rid, lh, mh, tuple(bad)))
    return out


def mu_label(prop: str) -> str:
    return MU_CONDITIONS[prop].label

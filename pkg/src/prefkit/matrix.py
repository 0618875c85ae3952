"""Exhaustive implication matrix over all choice functions on a small universe.

:func:`run_matrix` enumerates every ``f`` with ``f(X) ⊆ X`` on the full power
set of an ``n``-element universe and

* evaluates each row of :data:`~prefkit.rows.MU_ROWS` (counting confirmations,
  vacuous cases and counterexamples, and keeping the first counterexample);
* builds the pairwise empirical implication matrix "P ⇒ Q on every
  enumerated f" next to the matrix claimed by the positive rows;
* checks the algebraic/logical correspondence rows on the logics induced by
  the enumerated functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .choice import (
    MU_CONDITIONS,
    ChoiceFunction,
    PropertyVerdict,
    count_choice_functions,
    enumerate_choice_functions,
    mu_holds,
)
from .errors import BudgetExceededError, InputError
from .logic import DomainFamily, Vocabulary, format_set
from .report import Report, Section
from .rows import (
    ALG_LOG_ROWS,
    EQUIV,
    IMPLIES,
    MU_ROWS,
    NOT_IMPLIES,
    NOT_IMPLIES_INFINITE,
    check_mu_base_row,
    translation_coherence,
)

DEFAULT_MATRIX_BUDGET = 1_000_000
"""Maximum number of choice functions an exhaustive run may enumerate."""

GROUP_ORDER = ("Basics", "Cumulativity", "Rationality")

# Non-implication rows and the corpus entry that witnesses each of them.
BUNDLED_COUNTEREXAMPLES = {"4": "need-pr", "9": "mu-cum-cd"}

MATRIX_CONDITIONS = tuple(
    p for g in GROUP_ORDER for p, c in MU_CONDITIONS.items() if c.group == g and p != "mu_empty_fin"
)


def describe_choice(f: ChoiceFunction) -> str:
    """Compact description: the entries where ``f(X) ≠ X``."""
    diffs = [
        f"{format_set(x, f.labels)}→{format_set(f(x), f.labels)}" for x in f.domain.sets if f(x) != x
    ]
    return "identity" if not diffs else "; ".join(diffs) + ("; identity elsewhere" if len(diffs) < len(f.domain.sets) else "")


@dataclass
class RowStats:
    """Per-row tallies over the enumeration."""

    row: str
    kind: str
    not_applicable: int = 0
    vacuous: int = 0
    confirmed: int = 0
    counterexamples: int = 0
    first: Optional[str] = None
    bundled: Optional[str] = None

    @property
    def positive(self) -> bool:
        return self.kind in (IMPLIES, EQUIV)

    @property
    def as_expected(self) -> bool:
        if self.positive:
            return self.counterexamples == 0
        if self.kind == NOT_IMPLIES:
            return self.counterexamples + (1 if self.bundled else 0) >= 1
        return True


@dataclass
class CoherenceStats:
    row: str
    rule: str
    mu: str
    checked: int = 0
    both: int = 0
    neither: int = 0
    disagreements: int = 0
    first: Optional[str] = None


@dataclass
class MatrixResult:
    n: int
    functions: int
    rows: list[RowStats]
    claimed: dict[tuple[str, str], bool] = field(default_factory=dict)
    empirical: dict[tuple[str, str], bool] = field(default_factory=dict)
    coherence: list[CoherenceStats] = field(default_factory=list)
    coherence_universe: str = ""

    @property
    def contradictions(self) -> list[tuple[str, str]]:
        return [k for k, v in self.claimed.items() if v and not self.empirical.get(k, True)]

    @property
    def ok(self) -> bool:
        return (
            all(r.as_expected for r in self.rows)
            and not self.contradictions
            and all(c.disagreements == 0 for c in self.coherence)
        )


def claimed_matrix(conditions: Sequence[str] = MATRIX_CONDITIONS) -> dict[tuple[str, str], bool]:
    """Cells ``(P, Q)`` directly claimed by a positive row on full domains.

    A row claims ``P ⇒ Q`` (with ``f(X) ⊆ X`` in the background) when its
    left-hand side is contained in ``{P, (μ⊆)}``, it applies to full power-set
    domains, and ``Q`` is on its right-hand side; equivalences claim both ways.
    """
    out = {(p, q): p == q for p in conditions for q in conditions}
    for r in MU_ROWS.values():
        if r.kind not in (IMPLIES, EQUIV) or "difference" in r.flags_absent:
            continue
        directions = [(r.lhs, r.rhs)] + ([(r.rhs, r.lhs)] if r.kind == EQUIV else [])
        for lhs, rhs in directions:
            extra = [p for p in lhs if p != "mu_sub"]
            if len(extra) > 1:
                continue
            sources = extra or list(conditions)
            for p in sources:
                for q in rhs:
                    if (p, q) in out:
                        out[(p, q)] = True
    return out


def _coherence_setup(n: int) -> tuple[Vocabulary, int]:
    k = max(1, n.bit_length())
    vocab = Vocabulary.default(k)
    universe = ((1 << (n + 1)) - 1) & ~1  # models 1..n
    return vocab, universe


def check_budget(n: int, budget: int) -> int:
    count = count_choice_functions(DomainFamily.power_set((1 << n) - 1))
    if count > budget:
        raise BudgetExceededError(
            f"exhaustive enumeration at |U|={n} needs {count} choice functions; budget is {budget}"
        )
    return count


def run_matrix(
    n: int = 3,
    rows: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_MATRIX_BUDGET,
    coherence: bool = True,
) -> MatrixResult:
    """Run the exhaustive enumeration on ``n`` elements (see module docs)."""
    if n < 1:
        raise InputError("the universe needs at least one element")
    selected = list(rows) if rows else list(MU_ROWS)
    unknown = [r for r in selected if r not in MU_ROWS]
    if unknown:
        raise InputError(f"unknown row(s): {', '.join(unknown)}")
    total = check_budget(n, budget)
    universe = (1 << n) - 1
    labels = tuple("abcdefgh"[:n]) if n <= 8 else None
    stats = {r: RowStats(r, MU_ROWS[r].kind) for r in selected}
    conds = MATRIX_CONDITIONS
    empirical = {(p, q): True for p in conds for q in conds}
    full_grid = rows is None
    for f in enumerate_choice_functions(universe, labels=labels):
        cache = {p: mu_holds(f, p) for p in conds}
        for r in selected:
            v = check_mu_base_row(r, f, cache)
            s = stats[r]
            if v.status == "not-applicable":
                s.not_applicable += 1
            elif v.status == "vacuous":
                s.vacuous += 1
            elif v.status == "confirmed":
                s.confirmed += 1
            else:
                s.counterexamples += 1
                if s.first is None:
                    failing = ", ".join(MU_CONDITIONS[x.property_id].label for x in v.failures)
                    s.first = f"{describe_choice(f)} (fails {failing})"
        if full_grid:
            for p in conds:
                if cache[p]:
                    for q in conds:
                        if not cache[q]:
                            empirical[(p, q)] = False
    _add_bundled(stats)
    result = MatrixResult(n, total, [stats[r] for r in selected])
    if full_grid:
        result.claimed = claimed_matrix(conds)
        result.empirical = empirical
        if coherence:
            _run_coherence(result, n)
    return result


def _add_bundled(stats: dict[str, RowStats]) -> None:
    from .golden import load_entry
    from .io import choice_from_json

    for row, name in BUNDLED_COUNTEREXAMPLES.items():
        if row not in stats:
            continue
        f = choice_from_json(load_entry(name)["artifact"])
        v = check_mu_base_row(row, f)
        if v.status == "counterexample":
            stats[row].bundled = name


def _run_coherence(result: MatrixResult, n: int) -> None:
    vocab, universe = _coherence_setup(n)
    result.coherence_universe = (
        f"vocabulary {{{', '.join(vocab.atoms)}}}, models "
        + ", ".join(vocab.model_name(m) for m in range(vocab.n_models) if (universe >> m) & 1)
    )
    stats = {rid: CoherenceStats(rid, r.rule, r.mu) for rid, r in ALG_LOG_ROWS.items()}
    for f in enumerate_choice_functions(universe):
        for cv in translation_coherence(f, vocab):
            s = stats[cv.row]
            s.checked += 1
            if cv.disagreements:
                s.disagreements += 1
                if s.first is None:
                    s.first = f"{describe_choice(f)}: {'; '.join(cv.disagreements)}"
            elif cv.rule_holds and cv.mu_holds:
                s.both += 1
            elif not cv.rule_holds and not cv.mu_holds:
                s.neither += 1
    result.coherence = list(stats.values())


# -- reporting -------------------------------------------------------------------


def _row_verdict(s: RowStats) -> PropertyVerdict:
    spec = MU_ROWS[s.row]
    checked = s.confirmed + s.counterexamples + s.vacuous
    witness = None
    note = ""
    if s.positive:
        if s.first:
            witness = {"counterexample": s.first}
    elif s.kind == NOT_IMPLIES:
        parts = []
        if s.first:
            parts.append(f"enumerated: {s.first}")
        if s.bundled:
            parts.append(f"bundled: {s.bundled}")
        note = "; ".join(parts) or "no counterexample found"
    else:
        note = "non-implication concerns infinite domains"
        if s.counterexamples:
            note += f"; finite counterexamples exist ({s.counterexamples})"
    return PropertyVerdict(f"row {s.row}", s.as_expected, witness, checked, s.not_applicable, note=note)


def _row_text(r) -> str:
    arrow = {IMPLIES: "⇒", EQUIV: "⇔", NOT_IMPLIES: "⇏", NOT_IMPLIES_INFINITE: "⇏ (infinite)"}[r.kind]
    lhs = " + ".join(MU_CONDITIONS[p].label for p in r.lhs)
    rhs = " + ".join(MU_CONDITIONS[p].label for p in r.rhs)
    flags = f" [{', '.join(r.flags)}]" if r.flags else ""
    return f"{lhs} {arrow} {rhs}{flags}"


def matrix_report(res: MatrixResult) -> Report:
    report = Report(f"Implication matrix, |U| = {res.n}")
    report.info["choice functions enumerated"] = res.functions
    rows_sec = Section("Rows", [_row_verdict(s) for s in res.rows])
    rows_sec.columns = ["row", "claim", "confirmed", "vacuous", "not applicable", "counterexamples"]
    for s in res.rows:
        rows_sec.rows.append(
            [s.row, _row_text(MU_ROWS[s.row]), s.confirmed, s.vacuous, s.not_applicable, s.counterexamples]
        )
    report.add(rows_sec)
    if res.claimed:
        conds = MATRIX_CONDITIONS
        grid = Section("Pairwise matrix (row ⇒ column, given (μ⊆))")
        grid.columns = [""] + [MU_CONDITIONS[q].label for q in conds]
        for p in conds:
            cells = [MU_CONDITIONS[p].label]
            for q in conds:
                c, e = res.claimed[(p, q)], res.empirical[(p, q)]
                cells.append("=" if p == q else "✗" if c and not e else "⇒" if c else "+" if e else "")
            grid.rows.append(cells)
        grid.notes.append("⇒ claimed and confirmed; + holds empirically but not claimed directly; ✗ claimed but refuted")
        grid.notes.append(f"claimed cells contradicted: {len(res.contradictions)}")
        grid.verdicts.append(
            PropertyVerdict(
                "claimed cells confirmed",
                not res.contradictions,
                {"cells": ", ".join(f"{p}⇒{q}" for p, q in res.contradictions)} if res.contradictions else None,
                sum(res.claimed.values()),
            )
        )
        report.add(grid)
    for group in GROUP_ORDER:
        if not res.coherence:
            break
        sec = Section(f"Algebraic / logical correspondence: {group}")
        sec.columns = ["row", "rule", "condition", "both hold", "neither", "disagreements"]
        for c in res.coherence:
            if MU_CONDITIONS[c.mu].group != group:
                continue
            sec.rows.append([c.row, c.rule, MU_CONDITIONS[c.mu].label, c.both, c.neither, c.disagreements])
            sec.verdicts.append(
                PropertyVerdict(
                    f"{c.rule} ~ {c.mu}",
                    c.disagreements == 0,
                    {"first": c.first} if c.first else None,
                    c.checked,
                )
            )
        if res.coherence_universe:
            sec.notes.append(f"logics over {res.coherence_universe}")
        report.add(sec)
    report.status = "PASS" if res.ok else "FAIL"
    return report

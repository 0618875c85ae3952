"""The bundled golden corpus: worked examples with their documented verdicts.

Each entry is a JSON file in the ``corpus`` package directory with keys
``name``, ``kind``, ``description``, ``artifact`` (or artifact-specific keys)
and ``expect``.  :func:`run_entry` recomputes every expected verdict and
reports mismatches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable, Optional

from .choice import PropertyVerdict, check_mu_property
from .consequence import check_logic_rule, logic_from_mu
from .distance import (
    BinaryOperator,
    DistanceOptions,
    DistanceUnsat,
    check_operator,
    collective_rev,
    individual_rev,
    render_cycle,
    synth_distance,
)
from .errors import InputError
from .io import (
    binop_from_json,
    choice_from_json,
    decode_set,
    distance_from_json,
    logic_from_json,
    structure_from_json,
    vocab_from_json,
)
from .logic import DomainFamily, format_set, parse_theory
from .pref import choice_of, mu_of
from .report import Report, Section
from .synth import SynthOptions, Unsat, synth_structure

CORPUS_PACKAGE = "prefkit.corpus"

GOLDEN_NAMES = (
    "need-pr",
    "mu-cum-cd",
    "rank-copies",
    "needcopies",
    "weaktr",
    "cut-pr",
    "tr-rank-indiv",
)


def corpus_path(name: str):
    """Filesystem path of a bundled corpus file (``name`` without ``.json``)."""
    return resources.files(CORPUS_PACKAGE).joinpath(f"{name}.json")


def load_entry(name: str) -> dict:
    path = corpus_path(name)
    if not path.is_file():
        raise InputError(f"no corpus entry named {name!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def list_entries() -> list[str]:
    return list(GOLDEN_NAMES)


@dataclass
class EntryResult:
    """Outcome of one corpus entry: one verdict per documented expectation."""

    name: str
    description: str
    checks: list[PropertyVerdict] = field(default_factory=list)
    labels: Optional[tuple[str, ...]] = None

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def expect(self, check_id: str, ok: bool, observed: Any = None, note: str = "") -> None:
        witness = None if ok else {"observed": str(observed)}
        self.checks.append(PropertyVerdict(check_id, ok, witness, 1, note=note))


def _witness_matches(expected: dict, got: Optional[dict], labels) -> bool:
    if got is None:
        return False
    for key, val in expected.items():
        if key not in got:
            return False
        g = got[key]
        if isinstance(val, list):
            if g != decode_set(val, labels):
                return False
        elif isinstance(val, str):
            if str(g) != val:
                return False
        elif g != val:
            return False
    return True


def _run_mu_expectations(res: EntryResult, f, expect: dict) -> None:
    labels = f.labels
    for prop in expect.get("pass", []):
        v = check_mu_property(f, prop)
        res.expect(f"{prop} holds", v.holds, "fails")
    for prop in expect.get("fail", []):
        v = check_mu_property(f, prop)
        res.expect(f"{prop} fails", not v.holds, "holds")
        want = expect.get("witness", {}).get(prop)
        if want is not None:
            ok = not v.holds and _witness_matches(want, v.witness, labels)
            res.expect(f"{prop} witness", ok, v.witness)


def _synth_options(d: dict) -> SynthOptions:
    return SynthOptions(
        require_transitive=d.get("transitive", False),
        require_smooth=d.get("smooth", False),
        require_ranked=d.get("ranked", False),
        max_copies=d.get("max_copies", 2),
    )


def _run_synth_expectations(res: EntryResult, f, runs: list[dict]) -> None:
    for run in runs:
        opts = _synth_options(run.get("options", {}))
        out = synth_structure(f, opts)
        tag = ", ".join(f"{k}={v}" for k, v in sorted(run.get("options", {}).items()))
        if run["result"] == "unsat":
            res.expect(f"synth[{tag}] Unsat", isinstance(out, Unsat), "structure found")
            for prop in run.get("violations", []):
                got = isinstance(out, Unsat) and any(
                    v.property_id == prop and not v.holds for v in out.violations
                )
                res.expect(f"synth[{tag}] names {prop}", got, getattr(out, "violations", None))
        else:
            ok = not isinstance(out, Unsat) and choice_of(out, f.domain).table == f.table
            res.expect(f"synth[{tag}] reproduces f", ok, out)


def _run_mu(entry: dict) -> EntryResult:
    f = choice_from_json(entry["artifact"])
    res = EntryResult(entry["name"], entry.get("description", ""), labels=f.labels)
    _run_mu_expectations(res, f, entry.get("expect", {}))
    _run_synth_expectations(res, f, entry.get("expect", {}).get("synth", []))
    return res


def _run_structure(entry: dict) -> EntryResult:
    s = structure_from_json(entry["artifact"])
    res = EntryResult(entry["name"], entry.get("description", ""), labels=s.labels)
    labels = s.labels
    expect = entry.get("expect", {})
    for x, fx in expect.get("mu", []):
        xs, want = decode_set(x, labels), decode_set(fx, labels)
        got = mu_of(s, xs)
        res.expect(f"mu({format_set(xs, labels)}) = {format_set(want, labels)}", got == want,
                   format_set(got, labels))
    domain = DomainFamily.power_set(s.carrier)
    f = choice_of(s, domain)
    _run_synth_expectations(res, f, expect.get("synth", []))
    if "logic" in expect:
        spec = expect["logic"]
        vocab = vocab_from_json(spec["vocab"])
        c = logic_from_mu(f, vocab)
        for case in spec.get("entails", []):
            theory = parse_theory(case["theory"], vocab)
            got = c.nm_entails(theory, parse_theory([case["phi"]], vocab)[0])
            res.expect(f"{' , '.join(case['theory'])} |~ {case['phi']} is {case['holds']}",
                       got == case["holds"], got)
    return res


def _run_logic(entry: dict) -> EntryResult:
    c, pool = logic_from_json(entry["artifact"])
    res = EntryResult(entry["name"], entry.get("description", ""))
    expect = entry.get("expect", {})
    for rule in expect.get("pass", []):
        v = check_logic_rule(c, rule, pool)
        res.expect(f"{rule} holds", v.holds, "fails")
    for rule in expect.get("fail", []):
        v = check_logic_rule(c, rule, pool)
        res.expect(f"{rule} fails", not v.holds, "holds")
        want = expect.get("witness", {}).get(rule)
        if want is not None:
            ok = not v.holds and all(v.witness.get(k) == w for k, w in want.items())
            res.expect(f"{rule} witness", ok, v.witness)
    return res


def _run_distance_pair(entry: dict) -> EntryResult:
    d1 = distance_from_json(entry["first"])
    d2 = distance_from_json(entry["second"])
    res = EntryResult(entry["name"], entry.get("description", ""), labels=d1.labels)
    expect = entry.get("expect", {})
    op1 = BinaryOperator.from_distance(d1)
    op2 = BinaryOperator.from_distance(d2)
    if "same_operator" in expect:
        res.expect("same collective operator", (op1.table == op2.table) == expect["same_operator"])
    if expect.get("conditions_hold"):
        verdicts = check_operator(op1, expect.get("k_max", 6))
        res.expect("(|Succ), (|Con), (|Loop) hold", all(v.holds for v in verdicts),
                   [v.property_id for v in verdicts if not v.holds])
    if expect.get("synth_reproduces"):
        d = synth_distance(op1)
        ok = not isinstance(d, DistanceUnsat) and BinaryOperator.from_distance(d).table == op1.table
        res.expect("synthesized distance reproduces the operator", ok, d)
    labels = d1.labels
    for cmp in expect.get("comparisons", []):
        (u1, v1), (u2, v2) = cmp["pairs"]
        idx = [labels.index(e) for e in (u1, v1, u2, v2)]
        for which, d in (("first", d1), ("second", d2)):
            a, b = d(idx[0], idx[1]), d(idx[2], idx[3])
            rel = "<" if a < b else ">" if a > b else "="
            res.expect(f"{which}: d({u1},{v1}) {cmp[which]} d({u2},{v2})", rel == cmp[which], rel)
    return res


def _run_distance_synth(entry: dict) -> EntryResult:
    op = binop_from_json(entry["artifact"])
    res = EntryResult(entry["name"], entry.get("description", ""), labels=op.labels)
    expect = entry.get("expect", {})
    for case in expect.get("runs", []):
        individual = case.get("individual", False)
        opts = DistanceOptions(individual=individual)
        out = synth_distance(op, opts)
        tag = "individual" if individual else "collective"
        if case["result"] == "unsat":
            res.expect(f"{tag}: Unsat", isinstance(out, DistanceUnsat), out)
            if "cycle" in case:
                got = render_cycle(out.cycle) if isinstance(out, DistanceUnsat) and out.cycle else None
                res.expect(f"{tag}: cycle {case['cycle']}", got == case["cycle"], got)
        else:
            rev = individual_rev if individual else collective_rev
            ok = not isinstance(out, DistanceUnsat) and all(
                rev(out, x, y) == z for (x, y), z in op.table.items()
            )
            res.expect(f"{tag}: distance reproduces the observations", ok, out)
    return res


_RUNNERS: dict[str, Callable[[dict], EntryResult]] = {
    "mu": _run_mu,
    "structure": _run_structure,
    "logic": _run_logic,
    "distance-pair": _run_distance_pair,
    "distance-synth": _run_distance_synth,
}


def run_entry(name: str) -> EntryResult:
    entry = load_entry(name)
    try:
        runner = _RUNNERS[entry["kind"]]
    except KeyError:
        raise InputError(f"corpus entry {name!r} has unknown kind {entry.get('kind')!r}") from None
    return runner(entry)


def run_golden(only: Optional[list[str]] = None) -> Report:
    """Run the corpus (or the named entries) into one report."""
    names = only or list_entries()
    report = Report("Golden corpus")
    for name in names:
        res = run_entry(name)
        sec = Section(f"{name}: {'PASS' if res.ok else 'FAIL'}", res.checks, labels=res.labels)
        if res.description:
            sec.notes.append(res.description)
        report.add(sec)
    return report

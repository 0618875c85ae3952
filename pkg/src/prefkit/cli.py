"""Command-line interface: ``prefkit {check|synth|translate|matrix|golden|enumerate}``.

Exit codes: 0 all checks pass, 1 a property fails, 2 input error (including
exhausted budgets and unmet preconditions), 3 no structure or distance exists.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Callable, Optional, Sequence

from . import agm, io
from .choice import MU_CONDITIONS, PropertyVerdict, check_all_mu, enumerate_choice_functions, mu_holds
from .consequence import LOGIC_RULES, RuleChecker, logic_from_mu, mu_from_logic
from .distance import (
    DEFAULT_K_MAX,
    DEFAULT_SEARCH_BUDGET,
    BinaryOperator,
    DistanceOptions,
    DistanceUnsat,
    check_operator,
    render_cycle,
    synth_distance,
)
from .errors import ClosureError, PrefkitError
from .golden import list_entries, run_golden
from .logic import DomainFamily, Vocabulary
from .matrix import DEFAULT_MATRIX_BUDGET, GROUP_ORDER, matrix_report, run_matrix
from .nabla import check_nabla_axioms, formula_pool, parse_nabla
from .pref import choice_of, is_smooth, structure_flags
from .report import Report, Section, witness_text
from .size import COHERENCE_CONDITIONS, check_coherence, check_filter, check_ideal_cup
from .synth import DEFAULT_STEP_BUDGET, SynthOptions, Unsat, synth_structure

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSAT = 0, 1, 2, 3

BUDGET_ENV = "PREFKIT_BUDGET"

CHECK_KINDS = ("mu", "logic", "structure", "agm-rev", "agm-con", "agm-ee", "distance-op", "filter", "coherence", "nabla")
SYNTH_TARGETS = ("pref", "smooth", "ranked", "distance")
TRANSLATIONS = ("mu-to-logic", "logic-to-mu", "rev-to-con", "con-to-rev", "con-to-ee", "ee-to-con")


class _Ctx:
    """Parsed flags plus helpers shared by the commands."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args

    def budget(self, default: int) -> int:
        if self.args.budget is not None:
            return self.args.budget
        env = os.environ.get(BUDGET_ENV)
        if env:
            try:
                value = int(env)
            except ValueError:
                raise PrefkitError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
            if value <= 0:
                raise PrefkitError(f"{BUDGET_ENV} must be positive")
            return value
        return default

    def vocab(self) -> Optional[Vocabulary]:
        v = self.args.vocab
        if v is None:
            return None
        if v.isdigit():
            return Vocabulary.default(int(v))
        return io.vocab_from_json([a.strip() for a in v.split(",") if a.strip()])

    def size(self, default: int = 3) -> int:
        v = self.args.vocab
        if v is None:
            return default
        if not v.isdigit():
            raise PrefkitError("--vocab must be a number of elements for this command")
        return int(v)

    def load(self) -> dict:
        data = io.load_json(self.args.input)
        # A corpus entry wraps its artifact; accept both forms.
        if "artifact" in data and "kind" in data:
            return data["artifact"]
        return data


# -- output ------------------------------------------------------------------------


def _emit_report(ctx: _Ctx, report: Report) -> None:
    if ctx.args.json:
        sys.stdout.write(io.dumps(report.to_json()) + "\n")
    else:
        sys.stdout.write(report.to_markdown())


def _emit_json(obj: dict) -> None:
    sys.stdout.write(io.dumps(obj) + "\n")


def _grouped(verdicts: Sequence[PropertyVerdict], group_of: Callable[[str], str], names: dict,
             labels=None, prefix: str = "") -> list[Section]:
    sections = []
    for g in GROUP_ORDER:
        vs = [v for v in verdicts if group_of(v.property_id) == g]
        if vs:
            sections.append(Section(f"{prefix}{g}", vs, labels=labels, names=names))
    return sections


_MU_NAMES = {k: c.label for k, c in MU_CONDITIONS.items()}
_RULE_NAMES = {k: r.label for k, r in LOGIC_RULES.items()}


# -- check ---------------------------------------------------------------------------


def _check_mu(ctx: _Ctx, data: dict) -> Report:
    f = io.choice_from_json(data)
    report = Report("Choice function conditions")
    report.info["domain sets"] = len(f.domain.sets)
    report.info["domain closure"] = ", ".join(k for k, v in f.domain.flags().items() if v) or "none"
    for s in _grouped(check_all_mu(f), lambda p: MU_CONDITIONS[p].group, _MU_NAMES, f.labels):
        report.add(s)
    return report


def _check_logic(ctx: _Ctx, data: dict) -> Report:
    c, pool = io.logic_from_json(data)
    checker = RuleChecker(c, pool)
    verdicts = [checker.check(r) for r in LOGIC_RULES]
    report = Report("Logical rules")
    report.info["vocabulary"] = ", ".join(c.vocab.atoms)
    report.info["theories"] = "given pool" if pool is not None else "one canonical theory per model set"
    for s in _grouped(verdicts, lambda r: LOGIC_RULES[r].group, _RULE_NAMES):
        report.add(s)
    return report


# Conditions every structure of a class induces on a full power-set domain.
_SOUND_ALWAYS = ("mu_sub", "mu_PR", "mu_OR", "mu_wOR", "mu_disjOR", "mu_CUT")
_SOUND_SMOOTH = ("mu_CUM", "mu_CM", "mu_subsup")
_SOUND_RANKED = ("mu_eq", "mu_RatM", "mu_par")


def _check_structure(ctx: _Ctx, data: dict) -> Report:
    s = io.structure_from_json(data)
    flags = structure_flags(s)
    domain = DomainFamily.power_set(s.carrier)
    smooth = is_smooth(s, domain)
    report = Report("Preferential structure")
    sec = Section("Flags", columns=["flag", "value", "witness"])
    for name, value in [*flags.as_dict().items(), ("smooth", smooth.holds)]:
        w = flags.witnesses.get(name) if name != "smooth" else smooth.witness
        sec.rows.append([name, value, "" if value or w is None else witness_text(w, s.labels)])
    report.add(sec)
    f = choice_of(s, domain)
    props = list(_SOUND_ALWAYS)
    if smooth.holds:
        props += _SOUND_SMOOTH
    if flags.ranked and flags.cycle_free:
        props += _SOUND_RANKED
    verdicts = [v for v in check_all_mu(f) if v.property_id in props]
    for sec in _grouped(verdicts, lambda p: MU_CONDITIONS[p].group, _MU_NAMES, s.labels, "Soundness: "):
        report.add(sec)
    return report


def _check_agm(kind: str) -> Callable[[_Ctx, dict], Report]:
    decode, check, title = {
        "agm-rev": (io.revision_from_json, agm.check_revision, "Revision postulates"),
        "agm-con": (io.contraction_from_json, agm.check_contraction, "Contraction postulates"),
        "agm-ee": (io.entrenchment_from_json, agm.check_entrenchment, "Entrenchment postulates"),
    }[kind]

    def run(ctx: _Ctx, data: dict) -> Report:
        op = decode(data)
        report = Report(title)
        report.add(Section("Postulates", check(op), labels=io.labels_of(data)))
        return report

    return run


def _operator_of(data: dict) -> BinaryOperator:
    if "pairs" in data:
        return BinaryOperator.from_distance(io.distance_from_json(data))
    return io.binop_from_json(data)


def _check_distance_op(ctx: _Ctx, data: dict) -> Report:
    op = _operator_of(data)
    k = ctx.args.k_max
    report = Report("Distance-operator conditions")
    report.info["k_max"] = k
    report.add(Section("Conditions", check_operator(op, k), labels=op.labels))
    return report


_STRONG_ONLY = ("F_cap", "I_cup")


def _check_filter(ctx: _Ctx, data: dict) -> Report:
    flt = io.filter_from_json(data)
    labels = io.labels_of(data)
    fc = check_filter(flt)
    report = Report("Filter conditions")
    report.info["kind"] = flt.kind
    report.info["filter"] = fc.is_filter
    report.info["weak filter"] = fc.is_weak_filter
    report.info["ultrafilter"] = fc.ultrafilter
    if fc.principal_generator is not None:
        report.info["principal, generated by"] = io.set_names(fc.principal_generator, labels)
    required = [v for v in fc.verdicts if flt.kind == "strong" or v.property_id not in _STRONG_ONLY]
    report.add(Section(f"Conditions of a {flt.kind} filter", required, labels=labels))
    extra = [v for v in fc.verdicts if v not in required]
    if extra:
        sec = Section("Further conditions (not required)", columns=["condition", "holds"])
        sec.rows = [[v.property_id, v.holds] for v in extra]
        report.add(sec)
    return report


def _check_coherence(ctx: _Ctx, data: dict) -> Report:
    system = io.system_from_json(data)
    report = Report("Coherence conditions")
    verdicts = []
    for cond in COHERENCE_CONDITIONS:
        try:
            verdicts.append(check_coherence(system, cond))
        except ClosureError as exc:
            verdicts.append(PropertyVerdict(cond, True, None, 0, 1, note=f"not evaluated: {exc}"))
    verdicts.append(check_ideal_cup(system))
    report.add(Section("Conditions", verdicts, labels=io.labels_of(data)))
    return report


def _check_nabla(ctx: _Ctx, data: dict) -> Report:
    m = io.nstructure_from_json(data)
    if "formulas" in data:
        pool = [parse_nabla(t) for t in io.formulas_from_json(data["formulas"])]
    else:
        pool = formula_pool(tuple(sorted(m.predicates))[:2] or ("P",))
    report = Report("Nabla axiom schemata")
    report.info["domain size"] = m.size
    report.info["formula pool"] = len(pool)
    report.add(Section("Schemata", check_nabla_axioms(m, pool)))
    return report


_CHECKS: dict[str, Callable[[_Ctx, dict], Report]] = {
    "mu": _check_mu,
    "logic": _check_logic,
    "structure": _check_structure,
    "agm-rev": _check_agm("agm-rev"),
    "agm-con": _check_agm("agm-con"),
    "agm-ee": _check_agm("agm-ee"),
    "distance-op": _check_distance_op,
    "filter": _check_filter,
    "coherence": _check_coherence,
    "nabla": _check_nabla,
}


def cmd_check(ctx: _Ctx) -> int:
    report = _CHECKS[ctx.args.kind](ctx, ctx.load())
    if not report.status:
        report.status = "PASS" if report.ok else "FAIL"
    _emit_report(ctx, report)
    return EXIT_OK if report.ok else EXIT_FAIL


# -- synth ---------------------------------------------------------------------------


def cmd_synth(ctx: _Ctx) -> int:
    data = ctx.load()
    target = ctx.args.target
    if target == "distance":
        op = _operator_of(data)
        opts = DistanceOptions(individual=ctx.args.individual, budget=ctx.budget(DEFAULT_SEARCH_BUDGET))
        out = synth_distance(op, opts)
        if isinstance(out, DistanceUnsat):
            report = Report("No distance induces the operator", status="Unsat")
            if out.cycle:
                report.info["cycle"] = render_cycle(out.cycle)
            if out.reason:
                report.info["reason"] = out.reason
            report.add(Section("Violated conditions", list(out.violations), labels=op.labels))
            _emit_report(ctx, report)
            return EXIT_UNSAT
        _emit_json(io.distance_to_json(out))
        return EXIT_OK
    f = io.choice_from_json(data)
    opts = SynthOptions(
        require_transitive=target == "smooth",
        require_smooth=target == "smooth",
        require_ranked=target == "ranked",
        max_copies=ctx.args.max_copies,
        step_budget=ctx.budget(DEFAULT_STEP_BUDGET),
    )
    out = synth_structure(f, opts)
    if isinstance(out, Unsat):
        report = Report(f"No {target} structure induces the choice function", status="Unsat")
        report.info["search"] = out.searched
        report.info["exhaustive"] = out.exhausted
        if out.violations:
            report.add(Section("Violated necessary conditions", list(out.violations), labels=f.labels,
                               names=_MU_NAMES))
        _emit_report(ctx, report)
        return EXIT_UNSAT
    _emit_json(io.structure_to_json(out))
    return EXIT_OK


# -- translate -----------------------------------------------------------------------


def cmd_translate(ctx: _Ctx) -> int:
    data = ctx.load()
    how = ctx.args.direction
    if how == "mu-to-logic":
        f = io.choice_from_json(data)
        _emit_json(io.logic_to_json(logic_from_mu(f, ctx.vocab())))
    elif how == "logic-to-mu":
        c, _ = io.logic_from_json(data)
        _emit_json(io.choice_to_json(mu_from_logic(c)))
    elif how == "rev-to-con":
        _emit_json(io.agm_to_json(agm.contraction_from_revision(io.revision_from_json(data))))
    elif how == "con-to-rev":
        _emit_json(io.agm_to_json(agm.revision_from_contraction(io.contraction_from_json(data))))
    elif how == "con-to-ee":
        _emit_json(io.agm_to_json(agm.entrenchment_from_contraction(io.contraction_from_json(data))))
    else:
        _emit_json(io.agm_to_json(agm.contraction_from_entrenchment(io.entrenchment_from_json(data))))
    return EXIT_OK


# -- matrix, golden, enumerate -------------------------------------------------------


def cmd_matrix(ctx: _Ctx) -> int:
    rows = [r.strip() for r in ctx.args.rows.split(",")] if ctx.args.rows else None
    res = run_matrix(ctx.size(), rows, ctx.budget(DEFAULT_MATRIX_BUDGET))
    report = matrix_report(res)
    _emit_report(ctx, report)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_golden(ctx: _Ctx) -> int:
    if ctx.args.list:
        sys.stdout.write("\n".join(list_entries()) + "\n")
        return EXIT_OK
    only = [n.strip() for n in ctx.args.filter.split(",")] if ctx.args.filter else None
    report = run_golden(only)
    report.status = "PASS" if report.ok else "FAIL"
    _emit_report(ctx, report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_enumerate(ctx: _Ctx) -> int:
    n = ctx.size()
    universe = (1 << n) - 1
    labels = tuple("abcdefgh"[:n]) if n <= 8 else None
    required = [p.strip() for p in ctx.args.require.split(",")] if ctx.args.require else []
    for p in required:
        if p not in MU_CONDITIONS:
            raise PrefkitError(f"unknown condition {p!r}")
    funcs = [
        f
        for f in enumerate_choice_functions(universe, cap=ctx.budget(DEFAULT_MATRIX_BUDGET), labels=labels)
        if all(mu_holds(f, p) for p in required)
    ]
    if ctx.args.sample is not None and ctx.args.sample < len(funcs):
        funcs = random.Random(ctx.args.seed).sample(funcs, ctx.args.sample)
    if ctx.args.json:
        _emit_json({"count": len(funcs), "functions": [io.choice_to_json(f) for f in funcs]})
        return EXIT_OK
    report = Report(f"Choice functions on {n} elements")
    report.info["required"] = ", ".join(MU_CONDITIONS[p].label for p in required) or "(μ⊆) only"
    report.info["count"] = len(funcs)
    sec = Section("Conditions satisfied", columns=["group", "condition", "functions"])
    for p, c in MU_CONDITIONS.items():
        sec.rows.append([c.group, c.label, sum(1 for f in funcs if mu_holds(f, p))])
    report.add(sec)
    _emit_report(ctx, report)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--markdown", action="store_true", help="emit markdown (default for reports)")
    common.add_argument("--vocab", help="atom count or comma-separated atoms (element count for matrix/enumerate)")
    common.add_argument("--k-max", type=int, default=DEFAULT_K_MAX, help="longest loop chain checked")
    common.add_argument("--max-copies", type=int, default=2, help="copies per element in synthesis")
    common.add_argument("--budget", type=int, help=f"search/enumeration budget (overrides {BUDGET_ENV})")
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step")

    p = argparse.ArgumentParser(prog="prefkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check an artifact's properties")
    c.add_argument("kind", choices=CHECK_KINDS)
    c.add_argument("input")
    c.set_defaults(run=cmd_check)

    s = sub.add_parser("synth", parents=[common], help="synthesize a structure or distance")
    s.add_argument("target", choices=SYNTH_TARGETS)
    s.add_argument("input")
    s.add_argument("--individual", action="store_true", help="individual reading for distance synthesis")
    s.set_defaults(run=cmd_synth)

    t = sub.add_parser("translate", parents=[common], help="translate between representations")
    t.add_argument("direction", choices=TRANSLATIONS)
    t.add_argument("input")
    t.set_defaults(run=cmd_translate)

    m = sub.add_parser("matrix", parents=[common], help="exhaustive implication matrix")
    m.add_argument("--rows", help="comma-separated row ids")
    m.set_defaults(run=cmd_matrix)

    g = sub.add_parser("golden", parents=[common], help="run the bundled example corpus")
    g.add_argument("--filter", help="comma-separated entry names")
    g.add_argument("--list", action="store_true", help="list the entries")
    g.set_defaults(run=cmd_golden)

    e = sub.add_parser("enumerate", parents=[common], help="enumerate choice functions")
    e.add_argument("--require", help="comma-separated condition ids to filter on")
    e.add_argument("--sample", type=int, help="keep a seeded random sample of this size")
    e.set_defaults(run=cmd_enumerate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    ctx = _Ctx(args)
    try:
        return args.run(ctx)
    except PrefkitError as exc:
        sys.stderr.write(f"prefkit: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

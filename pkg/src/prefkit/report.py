"""Structured reports with a JSON form and a deterministic markdown form.

A :class:`Report` is a list of sections; each section carries property
verdicts, optional table rows and free-form notes.  Both renderings are pure
functions of the content, so equal inputs give byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .choice import PropertyVerdict
from .logic import ModelSet, format_set, members

# Witness keys whose integer values are single elements or counts, not sets.
_SCALAR_KEYS = frozenset({"element", "k", "u", "v", "count"})


def _set_json(s: ModelSet, labels: Optional[Sequence[str]]) -> list:
    return [labels[e] if labels and e < len(labels) else e for e in members(s)]


def witness_json(value: Any, labels: Optional[Sequence[str]] = None, key: str = "") -> Any:
    """Witness values with sets rendered as member lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        if key in _SCALAR_KEYS:
            return labels[value] if key == "element" and labels and value < len(labels) else value
        return _set_json(value, labels)
    if isinstance(value, dict):
        return {str(k): witness_json(v, labels, str(k)) for k, v in value.items()}
    if isinstance(value, tuple) and len(value) == 2 and key in ("node",):
        e, c = value
        return [labels[e] if labels and e < len(labels) else e, c]
    if isinstance(value, (list, tuple)):
        return [witness_json(v, labels, key) for v in value]
    return str(value)


def witness_text(value: Any, labels: Optional[Sequence[str]] = None, key: str = "") -> str:
    """Compact human-readable witness."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        if key in _SCALAR_KEYS:
            return labels[value] if key == "element" and labels and value < len(labels) else str(value)
        return format_set(value, labels)
    if isinstance(value, dict):
        return ", ".join(f"{k}={witness_text(v, labels, str(k))}" for k, v in value.items())
    if isinstance(value, tuple) and key == "node":
        e, c = value
        return f"{labels[e] if labels and e < len(labels) else e}#{c}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(witness_text(v, labels, key) for v in value) + "]"
    return str(value)


@dataclass
class Section:
    """A titled group of verdicts, table rows and notes."""

    title: str
    verdicts: list[PropertyVerdict] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    labels: Optional[Sequence[str]] = None
    names: dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return sum(1 for v in self.verdicts if not v.holds)


@dataclass
class Report:
    """The outcome of one command."""

    title: str
    sections: list[Section] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)
    status: str = ""
    extra_failures: int = 0

    def add(self, section: Section) -> Section:
        self.sections.append(section)
        return section

    @property
    def failed(self) -> int:
        return sum(s.failed for s in self.sections) + self.extra_failures

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def counts(self) -> dict[str, int]:
        verdicts = [v for s in self.sections for v in s.verdicts]
        return {
            "properties": len(verdicts),
            "failed": self.failed,
            "checked": sum(v.checked for v in verdicts),
            "skipped": sum(v.skipped for v in verdicts),
        }

    # -- renderings -------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict[str, Any] = {"title": self.title, "counts": self.counts()}
        if self.status:
            out["status"] = self.status
        if self.info:
            out["info"] = self.info
        secs = []
        for s in self.sections:
            sec: dict[str, Any] = {"title": s.title}
            if s.verdicts:
                sec["verdicts"] = [
                    {
                        "property": v.property_id,
                        "holds": v.holds,
                        "checked": v.checked,
                        "skipped": v.skipped,
                        **({"witness": witness_json(v.witness, s.labels)} if v.witness is not None else {}),
                        **({"note": v.note} if v.note else {}),
                    }
                    for v in s.verdicts
                ]
            if s.rows:
                sec["columns"] = list(s.columns)
                sec["rows"] = [list(r) for r in s.rows]
            if s.notes:
                sec["notes"] = list(s.notes)
            secs.append(sec)
        out["sections"] = secs
        return out

    def to_markdown(self) -> str:
        lines = [f"# {self.title}", ""]
        if self.status:
            lines += [f"**Status:** {self.status}", ""]
        for k, v in self.info.items():
            lines.append(f"- {k}: {v}")
        if self.info:
            lines.append("")
        for s in self.sections:
            lines += [f"## {s.title}", ""]
            if s.verdicts:
                lines += ["| property | verdict | checked | witness |", "|---|---|---|---|"]
                for v in s.verdicts:
                    name = s.names.get(v.property_id, v.property_id)
                    w = witness_text(v.witness, s.labels) if v.witness is not None else ""
                    if v.note:
                        w = f"{w} ({v.note})" if w else v.note
                    verdict = "PASS" if v.holds else "FAIL"
                    lines.append(f"| {name} | {verdict} | {v.checked} | {_cell(w)} |")
                lines.append("")
            if s.rows:
                lines.append("| " + " | ".join(s.columns) + " |")
                lines.append("|" + "---|" * len(s.columns))
                for r in s.rows:
                    lines.append("| " + " | ".join(_cell(str(c)) for c in r) + " |")
                lines.append("")
            for n in s.notes:
                lines.append(f"- {n}")
            if s.notes:
                lines.append("")
        c = self.counts()
        lines.append(
            f"**Summary:** {c['properties']} properties, {c['failed']} failed, "
            f"{c['checked']} instances checked, {c['skipped']} skipped."
        )
        return "\n".join(lines) + "\n"


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")

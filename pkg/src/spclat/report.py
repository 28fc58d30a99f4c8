"""Check outcomes shared by all verifiers."""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Any, Sequence


@dataclass
class Check:
    name: str
    ok: bool
    witnesses: list = field(default_factory=list)
    detail: str = ""
    applicable: bool = True

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def __bool__(self):
        return self.ok

    @property
    def status(self) -> str:
        if not self.applicable:
            return "N/A"
        return "PASS" if self.ok else "FAIL"

    def line(self, labels: Sequence[str] | None = None) -> str:
        parts = [self.name, self.status]
        if self.detail:
            parts.append(self.detail)
        if not self.ok and self.witnesses:
            parts.append("witness=" + render(self.witnesses[0], labels))
        return "\t".join(parts)

    def as_dict(self, labels: Sequence[str] | None = None) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.detail:
            d["detail"] = self.detail
        if not self.ok and self.witnesses:
            d["witness"] = plain(self.witnesses[0], labels)
        return d


def plain(x, labels: Sequence[str] | None = None):
    """JSON-friendly copy of a witness; element indices become labels if given."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, numbers.Integral):
        return labels[int(x)] if labels is not None else int(x)
    if isinstance(x, (set, frozenset)):
        return [plain(v, labels) for v in sorted(x)]
    if isinstance(x, (tuple, list)):
        return [plain(v, labels) for v in x]
    return str(x)


def render(x, labels: Sequence[str] | None = None) -> str:
    """Compact text form: tuples as (a,b), sets as {a,b}."""
    if isinstance(x, (set, frozenset)):
        return "{" + ",".join(render(v, labels) for v in sorted(x)) + "}"
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(render(v, labels) for v in x) + ")"
    v = plain(x, labels)
    return str(v)


class Report:
    """Ordered collection of checks; truthy iff every applicable check passed."""

    def __init__(self, title: str = "", checks=None):
        self.title = title
        self.checks: list[Check] = list(checks or [])
        self.info: dict[str, Any] = {}

    def add(self, name, ok, witnesses=None, detail="", applicable=True) -> Check:
        if witnesses is not None and not isinstance(witnesses, list):
            witnesses = [witnesses]
        c = Check(name, bool(ok), witnesses or [], detail, applicable)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.witnesses, c.detail, c.applicable))
        self.info.update(other.info)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks if c.applicable)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.applicable and not c.ok]

    def lines(self, labels: Sequence[str] | None = None) -> list[str]:
        return [c.line(labels) for c in self.checks]

    def __repr__(self):
        return f"Report({self.title!r}, ok={self.ok}, checks={len(self.checks)})"


class RunReport:
    """Everything one CLI invocation prints, in order.

    ``records`` are listing rows (filters, congruences, properties);
    ``sections`` are verification reports.  Timings are kept apart and only
    rendered on request so that default output is byte-deterministic.
    """

    def __init__(self, command: str, source: str, labels: Sequence[str] = ()):
        self.command = command
        self.source = source
        self.labels = list(labels)
        self.summary: dict[str, Any] = {}
        self.records: list[tuple[str, ...]] = []
        self.sections: list[Report] = []
        self.figures: list[str] = []
        self.timings: list[tuple[str, float]] = []
        self.attachments: list[tuple[str, str]] = []

    def record(self, kind: str, *fields) -> None:
        self.records.append((kind,) + tuple(str(f) for f in fields))

    def section(self, rep: Report) -> Report:
        self.sections.append(rep)
        return rep

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.sections)

    def render_text(self, timings: bool = False) -> str:
        labels = self.labels or None
        out = [f"# {self.command} {self.source}"]
        if self.summary:
            out.append("\t".join(["structure"] + [f"{k}={_word(v)}" for k, v in self.summary.items()]))
        out += ["\t".join(r) for r in self.records]
        for rep in self.sections:
            out.append(f"[{rep.title}]")
            out += rep.lines(labels)
        out += [f"figure\t{p}" for p in self.figures]
        if timings:
            out += [f"timing\t{name}\t{ms:.1f}ms" for name, ms in self.timings]
        out.append(f"result\t{'PASS' if self.ok else 'FAIL'}")
        for name, body in self.attachments:
            out.append(f"## {name}")
            out += body.rstrip("\n").split("\n")
        return "\n".join(out) + "\n"

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        labels = self.labels or None
        d: dict[str, Any] = {
            "command": self.command,
            "input": self.source,
            "structure": {k: plain(v) for k, v in self.summary.items()},
            "records": [list(r) for r in self.records],
            "sections": [
                {"title": rep.title, "checks": [c.as_dict(labels) for c in rep.checks]}
                for rep in self.sections
            ],
            "figures": list(self.figures),
            "result": "PASS" if self.ok else "FAIL",
        }
        if self.attachments:
            d["attachments"] = {name: body for name, body in self.attachments}
        if timings:
            d["timings_ms"] = {name: round(ms, 3) for name, ms in self.timings}
        return d


def _word(v) -> str:
    if v is True:
        return "yes"
    if v is False:
        return "no"
    return str(v)

"""Poset text files, DOT and JSON export.

Text format::

    # comment
    [elements]
    0 a b c 1
    [covers]
    0 a          # 0 is covered by a
    a c
    [star]       # optional: n rows of n labels, checked not trusted
    1 1 1 1 1
    ...
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import CycleDetected, DuplicateLabel, PosetSyntaxError, UnknownLabel
from .poset import Poset

LABEL_RE = re.compile(r"[A-Za-z0-9_]+\Z")
SECTIONS = ("elements", "covers", "star")


@dataclass
class PosetDocument:
    poset: Poset
    covers: list[tuple[int, int]]
    star: tuple[tuple[int, ...], ...] | None = None


def parse_document(text: str) -> PosetDocument:
    section = None
    seen_sections = set()
    labels: list[str] = []
    index: dict[str, int] = {}
    covers: list[tuple[int, int]] = []
    star_rows: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            name = m.group(1)
            if name not in SECTIONS:
                raise PosetSyntaxError(f"unknown section [{name}]", lineno)
            if name in seen_sections:
                raise PosetSyntaxError(f"repeated section [{name}]", lineno)
            if name != "elements" and "elements" not in seen_sections:
                raise PosetSyntaxError("[elements] must come first", lineno)
            seen_sections.add(name)
            section = name
            continue
        if section is None:
            raise PosetSyntaxError("content outside of a section", lineno)
        tokens = line.split()
        for tok in tokens:
            if not LABEL_RE.match(tok):
                raise PosetSyntaxError(f"bad label {tok!r}", lineno)
        if section == "elements":
            for tok in tokens:
                if tok in index:
                    raise DuplicateLabel(f"duplicate label {tok!r}", lineno)
                index[tok] = len(labels)
                labels.append(tok)
        elif section == "covers":
            if len(tokens) != 2:
                raise PosetSyntaxError("a cover line needs exactly two labels", lineno)
            for tok in tokens:
                if tok not in index:
                    raise UnknownLabel(f"unknown label {tok!r} in cover", lineno)
            x, y = index[tokens[0]], index[tokens[1]]
            if x == y:
                raise CycleDetected(tokens[0], tokens[1])
            covers.append((x, y))
        else:
            star_rows.append((lineno, tokens))

    if "elements" not in seen_sections:
        raise PosetSyntaxError("missing [elements] section")
    poset = Poset.from_covers(labels, covers)

    star = None
    if "star" in seen_sections:
        n = len(labels)
        if len(star_rows) != n:
            raise PosetSyntaxError(f"[star] needs {n} rows, got {len(star_rows)}")
        rows = []
        for lineno, tokens in star_rows:
            if len(tokens) != n:
                raise PosetSyntaxError(f"[star] row needs {n} labels", lineno)
            for tok in tokens:
                if tok not in index:
                    raise UnknownLabel(f"unknown label {tok!r} in star table", lineno)
            rows.append(tuple(index[t] for t in tokens))
        star = tuple(rows)
    return PosetDocument(poset, covers, star)


def parse_poset(text: str) -> Poset:
    return parse_document(text).poset


def read_document(path) -> PosetDocument:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return document_from_json(text)
    return parse_document(text)


def write_poset(p: Poset, star: Sequence[Sequence[int]] | None = None) -> str:
    lines = ["[elements]", " ".join(p.labels), "[covers]"]
    lines += [f"{p.labels[x]} {p.labels[y]}" for x, y in p.hasse_covers()]
    if star is not None:
        lines.append("[star]")
        lines += [" ".join(p.labels[v] for v in row) for row in star]
    return "\n".join(lines) + "\n"


def to_dot(p: Poset, name: str = "P") -> str:
    """Hasse diagram as a DOT digraph, edges pointing upward."""
    out = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for lab in p.labels:
        out.append(f'  "{lab}";')
    for x, y in p.hasse_covers():
        out.append(f'  "{p.labels[x]}" -> "{p.labels[y]}";')
    out.append("}")
    return "\n".join(out) + "\n"


def export_dict(p: Poset, star=None, filters=None, congruences=None) -> dict:
    lab = p.labels
    d: dict = {
        "elements": list(lab),
        "covers": [[lab[x], lab[y]] for x, y in p.hasse_covers()],
    }
    if star is not None:
        d["star"] = [[lab[v] for v in row] for row in star]
    if filters is not None:
        d["filters"] = [[lab[i] for i in sorted(f)] for f in filters]
    if congruences is not None:
        d["congruences"] = [
            [[lab[i] for i in sorted(b)] for b in blocks] for blocks in congruences
        ]
    return d


def to_json(p: Poset, star=None, filters=None, congruences=None) -> str:
    return json.dumps(export_dict(p, star, filters, congruences), indent=2) + "\n"


def document_from_json(text: str) -> PosetDocument:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PosetSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(d, dict) or "elements" not in d:
        raise PosetSyntaxError("JSON document needs an 'elements' list")
    labels = list(d["elements"])
    index = {}
    for lab in labels:
        if not isinstance(lab, str) or not LABEL_RE.match(lab):
            raise PosetSyntaxError(f"bad label {lab!r}")
        if lab in index:
            raise DuplicateLabel(f"duplicate label {lab!r}")
        index[lab] = len(index)
    covers = []
    for pair in d.get("covers", []):
        try:
            x, y = pair
            covers.append((index[x], index[y]))
        except KeyError as exc:
            raise UnknownLabel(f"unknown label {exc.args[0]!r} in cover") from None
        except (TypeError, ValueError):
            raise PosetSyntaxError(f"bad cover entry {pair!r}") from None
    poset = Poset.from_covers(labels, covers)
    star = None
    if "star" in d:
        try:
            star = tuple(tuple(index[v] for v in row) for row in d["star"])
        except KeyError as exc:
            raise UnknownLabel(f"unknown label {exc.args[0]!r} in star table") from None
    return PosetDocument(poset, covers, star)

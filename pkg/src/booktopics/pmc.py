"""Publisher market codes: a three-level mono-hierarchy inferred from topics.

Scheme JSON::

    {"codes":   [{"code": "I15033", "label": "Data Encryption",
                  "level": 3, "parent": "I15009"}, ...],
     "mapping": [{"code": "I15033", "topic": "cryptography"}, ...]}

Level-1 codes have no parent; every other code has exactly one parent on the
level above it.  The mapping associates research topics with the codes that
subsume them; inference walks from classified topics to their codes and all
ancestors, counting for each code the distinct chapters covered anywhere in
its subtree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .classifier import BookClassification
from .errors import HierarchyError, ParseError
from .ontology import normalize_label


@dataclass(frozen=True)
class PmcCode:
    code: str
    label: str
    level: int
    parent: str | None


class PmcScheme:
    def __init__(self, codes: dict[str, PmcCode], topic_to_pmc: dict[str, frozenset[str]]):
        self.codes = codes
        self.topic_to_pmc = topic_to_pmc
        self.children: dict[str, frozenset[str]] = {c: frozenset() for c in codes}
        kids: dict[str, set[str]] = {}
        for code in codes.values():
            if code.parent is not None:
                kids.setdefault(code.parent, set()).add(code.code)
        self.children.update({p: frozenset(ks) for p, ks in kids.items()})

    def __contains__(self, code: str) -> bool:
        return code in self.codes

    def ancestors(self, code: str) -> list[str]:
        """Chain of parents from `code` (exclusive) up to its root."""
        chain = []
        parent = self.codes[code].parent
        while parent is not None:
            chain.append(parent)
            parent = self.codes[parent].parent
        return chain

    def subtree(self, code: str) -> set[str]:
        """`code` plus all its descendants."""
        out = {code}
        stack = [code]
        while stack:
            for child in self.children[stack.pop()]:
                if child not in out:
                    out.add(child)
                    stack.append(child)
        return out


def scheme_from_dict(data: dict) -> PmcScheme:
    if not isinstance(data, dict) or "codes" not in data or "mapping" not in data:
        raise ParseError("scheme file must contain 'codes' and 'mapping' arrays")

    codes: dict[str, PmcCode] = {}
    for entry in data["codes"]:
        if not isinstance(entry, dict) or not {"code", "label", "level"} <= entry.keys():
            raise ParseError(f"code entry missing code/label/level: {entry!r}")
        code, label, level = entry["code"], entry["label"], entry["level"]
        parent = entry.get("parent")
        if not isinstance(code, str) or not code:
            raise ParseError(f"code must be a non-empty string: {code!r}")
        if code in codes:
            raise HierarchyError(f"code {code!r} declared twice")
        if level not in (1, 2, 3):
            raise HierarchyError(f"code {code!r} has level {level!r}, expected 1, 2 or 3")
        if level == 1 and parent is not None:
            raise HierarchyError(f"root-level code {code!r} must not have a parent")
        if level > 1 and not parent:
            raise HierarchyError(f"level-{level} code {code!r} needs a parent")
        codes[code] = PmcCode(code, str(label), level, parent)

    for pmc in codes.values():
        if pmc.parent is None:
            continue
        parent = codes.get(pmc.parent)
        if parent is None:
            raise HierarchyError(f"code {pmc.code!r} references unknown parent {pmc.parent!r}")
        if parent.level != pmc.level - 1:
            raise HierarchyError(
                f"code {pmc.code!r} (level {pmc.level}) has parent {parent.code!r}"
                f" on level {parent.level}, expected {pmc.level - 1}"
            )

    mapping: dict[str, set[str]] = {}
    for entry in data["mapping"]:
        if not isinstance(entry, dict) or "code" not in entry or "topic" not in entry:
            raise ParseError(f"mapping entry missing code/topic: {entry!r}")
        code, topic = entry["code"], normalize_label(str(entry["topic"]))
        if code not in codes:
            raise ParseError(f"mapping references unknown code {code!r}")
        if not topic:
            raise ParseError("mapping entry has an empty topic")
        mapping.setdefault(topic, set()).add(code)

    return PmcScheme(codes, {t: frozenset(cs) for t, cs in mapping.items()})


def load_scheme(path) -> PmcScheme:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scheme file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in scheme file {path}: {exc}") from exc
    return scheme_from_dict(data)


def infer_pmcs(bc: BookClassification, scheme: PmcScheme) -> list[tuple[str, int]]:
    """Market codes for a classification: (code, chapterCount) pairs.

    A classified topic contributes its mapped codes and all their ancestors.
    The count of a code is the number of distinct chapters carrying any
    topic mapped to the code itself or to a code below it, so counts never
    shrink walking up the hierarchy.  Sorted by count descending, code
    ascending.
    """
    triggered: set[str] = set()
    for cc in bc.per_chapter:
        for topic in cc.topics:
            for code in scheme.topic_to_pmc.get(topic, ()):
                if code not in triggered:
                    triggered.add(code)
                    triggered.update(scheme.ancestors(code))

    counts: dict[str, int] = {}
    for code in triggered:
        subtree = scheme.subtree(code)
        chapters = {
            cc.chapter_id
            for cc in bc.per_chapter
            for topic in cc.topics
            if scheme.topic_to_pmc.get(topic, frozenset()) & subtree
        }
        counts[code] = len(chapters)
    return sorted(counts.items(), key=lambda pair: (-pair[1], pair[0]))

"""Research-topic ontology: hierarchy, equivalence classes, label lookup.

The ontology file is JSON with two arrays::

    {"topics":    [{"id": "...", "label": "..."}, ...],
     "relations": [{"type": "superTopicOf" | "relatedEquivalent" | "contributesTo",
                    "source": "...", "target": "..."}, ...]}

``superTopicOf`` points from the broader area to the narrower one and must
form a DAG.  ``relatedEquivalent`` marks topics as interchangeable labels of
one concept; each equivalence class is collapsed into a single canonical
topic (the lexicographically smallest member id) whose aliases are the
member ids and normalized member labels.  ``contributesTo`` is parsed and
retained but plays no role in classification.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import CycleError, DanglingRefError, ParseError, UnknownTopicError

RELATION_TYPES = ("superTopicOf", "relatedEquivalent", "contributesTo")


def normalize_label(s: str) -> str:
    """Canonical form of a topic string: NFC, lowercased, whitespace collapsed.

    Hyphens are significant and preserved ("e-learning" stays distinct from
    "elearning").
    """
    return " ".join(unicodedata.normalize("NFC", s.lower()).split())


@dataclass(frozen=True)
class Topic:
    id: str
    label: str
    aliases: frozenset[str]


class Ontology:
    """Immutable topic graph; safe to share across threads after loading."""

    def __init__(
        self,
        topics: dict[str, Topic],
        parents: dict[str, frozenset[str]],
        children: dict[str, frozenset[str]],
        label_index: dict[str, frozenset[str]],
        contributes_to: dict[str, frozenset[str]],
        members: dict[str, tuple[tuple[str, str], ...]],
    ):
        self.topics = topics
        self.parents = parents
        self.children = children
        self.label_index = label_index
        self.contributes_to = contributes_to
        self._members = members

    def __contains__(self, topic_id: str) -> bool:
        return topic_id in self.topics

    def __len__(self) -> int:
        return len(self.topics)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.topics == other.topics
            and self.parents == other.parents
            and self.children == other.children
            and self.label_index == other.label_index
            and self.contributes_to == other.contributes_to
        )

    def super_topics(self, topic_id: str) -> set[str]:
        """All ancestors of ``topic_id`` (transitive closure of direct parents).

        The topic itself is never included; the hierarchy is acyclic.
        """
        if topic_id not in self.topics:
            raise UnknownTopicError(topic_id)
        seen: set[str] = set()
        stack = list(self.parents[topic_id])
        while stack:
            p = stack.pop()
            if p not in seen:
                seen.add(p)
                stack.extend(self.parents[p])
        return seen

    def resolve_label(self, s: str) -> set[str]:
        """Canonical topic ids whose alias set contains the normalized string.

        Unknown strings resolve to the empty set; an alias shared by several
        equivalence classes resolves to all of their canonical ids.
        """
        return set(self.label_index.get(normalize_label(s), ()))

    def to_dict(self) -> dict:
        topics = []
        relations = []
        for canon in sorted(self.topics):
            for member_id, member_label in self._members[canon]:
                topics.append({"id": member_id, "label": member_label})
                if member_id != canon:
                    relations.append(
                        {"type": "relatedEquivalent", "source": canon, "target": member_id}
                    )
        for child in sorted(self.parents):
            for parent in sorted(self.parents[child]):
                relations.append({"type": "superTopicOf", "source": parent, "target": child})
        for source in sorted(self.contributes_to):
            for target in sorted(self.contributes_to[source]):
                relations.append({"type": "contributesTo", "source": source, "target": target})
        return {"topics": topics, "relations": relations}

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )


class _UnionFind:
    def __init__(self, items):
        self._parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Keep the lexicographically smallest id as the class root.
            if rb < ra:
                ra, rb = rb, ra
            self._parent[rb] = ra


def _find_cycle(parents: dict[str, frozenset[str]]) -> list[str] | None:
    """One cycle path in the child->parent graph, or None if acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {t: WHITE for t in parents}
    for start in sorted(parents):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, list[str]]] = [(start, sorted(parents[start]))]
        color[start] = GREY
        path = [start]
        while stack:
            node, todo = stack[-1]
            if todo:
                nxt = todo.pop(0)
                if color[nxt] == GREY:
                    return path[path.index(nxt):] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    path.append(nxt)
                    stack.append((nxt, sorted(parents[nxt])))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def ontology_from_dict(data: dict) -> Ontology:
    """Build and validate an Ontology from parsed JSON data."""
    if not isinstance(data, dict) or "topics" not in data or "relations" not in data:
        raise ParseError("ontology file must contain 'topics' and 'relations' arrays")

    entries: dict[str, str] = {}
    for entry in data["topics"]:
        if not isinstance(entry, dict) or "id" not in entry or "label" not in entry:
            raise ParseError(f"topic entry missing id/label: {entry!r}")
        tid, label = entry["id"], entry["label"]
        if not isinstance(tid, str) or not tid:
            raise ParseError(f"topic id must be a non-empty string: {tid!r}")
        if normalize_label(tid) != tid:
            raise ParseError(f"topic id is not in canonical form: {tid!r}")
        if not isinstance(label, str) or not label.strip():
            raise ParseError(f"topic {tid!r} has an empty label")
        if tid in entries:
            raise ParseError(f"duplicate topic id: {tid!r}")
        entries[tid] = label

    rel_edges: dict[str, list[tuple[str, str]]] = {t: [] for t in RELATION_TYPES}
    for rel in data["relations"]:
        if not isinstance(rel, dict):
            raise ParseError(f"relation entry must be an object: {rel!r}")
        rtype, source, target = rel.get("type"), rel.get("source"), rel.get("target")
        if rtype not in RELATION_TYPES:
            raise ParseError(f"unknown relation type: {rtype!r}")
        for endpoint in (source, target):
            if endpoint not in entries:
                raise DanglingRefError(
                    f"{rtype} relation references unknown topic {endpoint!r}"
                )
        rel_edges[rtype].append((source, target))

    uf = _UnionFind(entries)
    for source, target in rel_edges["relatedEquivalent"]:
        uf.union(source, target)

    class_members: dict[str, list[str]] = {}
    for tid in entries:
        class_members.setdefault(uf.find(tid), []).append(tid)

    topics: dict[str, Topic] = {}
    members: dict[str, tuple[tuple[str, str], ...]] = {}
    label_index: dict[str, set[str]] = {}
    for canon, ids in class_members.items():
        label = entries[canon]
        if normalize_label(label) != canon:
            raise ParseError(
                f"label {label!r} of canonical topic {canon!r} does not normalize to its id"
            )
        aliases = set(ids) | {normalize_label(entries[i]) for i in ids}
        topics[canon] = Topic(id=canon, label=label, aliases=frozenset(aliases))
        members[canon] = tuple(sorted((i, entries[i]) for i in ids))
        for alias in aliases:
            label_index.setdefault(alias, set()).add(canon)

    def remap(pairs: list[tuple[str, str]]) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {}
        for a, b in pairs:
            ca, cb = uf.find(a), uf.find(b)
            if ca != cb:  # edges inside an equivalence class are vacuous
                out.setdefault(ca, set()).add(cb)
        return out

    super_edges = remap(rel_edges["superTopicOf"])
    parents = {t: frozenset() for t in topics}
    children = {t: frozenset() for t in topics}
    for parent, kids in super_edges.items():
        children[parent] = frozenset(kids)
        for kid in kids:
            parents[kid] |= {parent}

    cycle = _find_cycle(parents)
    if cycle is not None:
        raise CycleError(cycle)

    contributes = {
        src: frozenset(dsts) for src, dsts in remap(rel_edges["contributesTo"]).items()
    }
    frozen_index = {alias: frozenset(ids) for alias, ids in label_index.items()}
    return Ontology(topics, parents, children, frozen_index, contributes, members)


def load_ontology(path) -> Ontology:
    """Load and validate an ontology JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read ontology file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in ontology file {path}: {exc}") from exc
    return ontology_from_dict(data)

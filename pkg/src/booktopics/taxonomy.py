"""Displayed topic taxonomy and the annotation history store.

The taxonomy renders the classified subset of the topic DAG as a forest:
a topic with several classified direct parents is duplicated under each of
them.  Filtering by minimum chapter count keeps ancestors of surviving
nodes as flagged "structural" placeholders so the tree stays connected.

Annotation history is an append-only JSON-lines file, one record per line,
with monotonically increasing integer receipts.  Appends are serialized and
fsynced; prior lines are never rewritten.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

from .classifier import BookClassification
from .errors import StoreError, ValidationError
from .ontology import Ontology


@dataclass(frozen=True)
class TaxonomyNode:
    topic: str
    chapter_count: int
    children: tuple["TaxonomyNode", ...] = ()
    structural: bool = False  # kept only to connect filtered descendants


def build_taxonomy(bc: BookClassification, ontology: Ontology) -> list[TaxonomyNode]:
    """Forest over the classified topics, duplicated per classified parent.

    Edges are direct superTopicOf pairs within the classified set; roots are
    classified topics with no classified direct parent.  Children are
    ordered by chapter count descending, then topic id.
    """
    classified = set(bc.topic_chapter_count)

    def order(topics) -> list[str]:
        return sorted(topics, key=lambda t: (-bc.topic_chapter_count[t], t))

    def node(topic: str) -> TaxonomyNode:
        kids = ontology.children.get(topic, frozenset()) & classified
        return TaxonomyNode(
            topic=topic,
            chapter_count=bc.topic_chapter_count[topic],
            children=tuple(node(k) for k in order(kids)),
        )

    roots = [
        t for t in classified if not (ontology.parents.get(t, frozenset()) & classified)
    ]
    return [node(t) for t in order(roots)]


def filter_taxonomy(forest: list[TaxonomyNode], min_chapters: int) -> list[TaxonomyNode]:
    """Nodes with chapter_count >= min_chapters, plus structural ancestors."""
    if min_chapters < 1:
        raise ValueError(f"min_chapters must be >= 1, got {min_chapters}")

    def prune(node: TaxonomyNode) -> TaxonomyNode | None:
        kids = tuple(k for k in map(prune, node.children) if k is not None)
        if node.chapter_count >= min_chapters:
            return replace(node, children=kids, structural=False)
        if kids:
            return replace(node, children=kids, structural=True)
        return None

    return [n for n in map(prune, forest) if n is not None]


def walk(forest: list[TaxonomyNode]):
    """All nodes of a forest, depth-first."""
    stack = list(reversed(forest))
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


@dataclass
class AnnotationRecord:
    """One submitted review: the editor's topic/PMC selection and edits."""

    conf_series_id: str
    year: int
    volumes: list[str] = field(default_factory=list)
    selected_topics: list[str] = field(default_factory=list)
    renames: dict[str, str] = field(default_factory=dict)
    added_topics: list[tuple[str, str | None]] = field(default_factory=list)
    removed_topics: list[str] = field(default_factory=list)
    selected_pmcs: list[str] = field(default_factory=list)
    submitted_at: str | None = None
    receipt: int | None = None

    def to_dict(self) -> dict:
        return {
            "confSeriesId": self.conf_series_id,
            "year": self.year,
            "volumes": list(self.volumes),
            "selectedTopics": list(self.selected_topics),
            "renames": dict(self.renames),
            "addedTopics": [
                {"topic": t, "parent": p} for t, p in self.added_topics
            ],
            "removedTopics": list(self.removed_topics),
            "selectedPmcs": list(self.selected_pmcs),
            "submittedAt": self.submitted_at,
            "receipt": self.receipt,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationRecord":
        if not isinstance(data, dict):
            raise ValidationError("annotation record must be a JSON object")
        added = []
        for entry in data.get("addedTopics", []):
            if isinstance(entry, dict):
                added.append((entry.get("topic"), entry.get("parent")))
            else:  # tolerate [topic, parent] pairs
                topic, parent = (list(entry) + [None])[:2]
                added.append((topic, parent))
        return cls(
            conf_series_id=data.get("confSeriesId", ""),
            year=data.get("year"),
            volumes=list(data.get("volumes", [])),
            selected_topics=list(data.get("selectedTopics", [])),
            renames=dict(data.get("renames", {})),
            added_topics=added,
            removed_topics=list(data.get("removedTopics", [])),
            selected_pmcs=list(data.get("selectedPmcs", [])),
            submitted_at=data.get("submittedAt"),
            receipt=data.get("receipt"),
        )


def validate_record(rec: AnnotationRecord) -> None:
    if not rec.conf_series_id or not isinstance(rec.conf_series_id, str):
        raise ValidationError("confSeriesId is required")
    if not isinstance(rec.year, int):
        raise ValidationError("year must be an integer")
    if not rec.selected_topics:
        raise ValidationError("selectedTopics must not be empty")
    if not all(isinstance(t, str) and t for t in rec.selected_topics):
        raise ValidationError("selectedTopics must be non-empty strings")
    added_ids = []
    for topic, _parent in rec.added_topics:
        if not isinstance(topic, str) or not topic:
            raise ValidationError("addedTopics entries need a topic string")
        added_ids.append(topic)
    allowed = set(rec.selected_topics) | set(added_ids)
    stray = set(rec.renames) - allowed
    if stray:
        raise ValidationError(
            f"renames reference topics that are neither selected nor added: {sorted(stray)}"
        )


class AnnotationStore:
    """Append-only JSON-lines store with monotonic receipts."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._next_receipt = self._scan_last_receipt() + 1

    def _scan_last_receipt(self) -> int:
        last = 0
        for rec in self.records():
            if rec.receipt is not None:
                last = max(last, rec.receipt)
        return last

    def records(self) -> list[AnnotationRecord]:
        if not self.path.exists():
            return []
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise StoreError(f"cannot read history {self.path}: {exc}") from exc
        out = []
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                out.append(AnnotationRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, ValidationError) as exc:
                raise StoreError(f"{self.path}:{lineno}: corrupt record: {exc}") from exc
        return out

    def records_for(self, conf_series_id: str) -> list[AnnotationRecord]:
        return [r for r in self.records() if r.conf_series_id == conf_series_id]

    def previous(
        self, conf_series_id: str, before_year: int | None = None
    ) -> AnnotationRecord | None:
        """Most recent record for the series, optionally strictly before a year.

        "Most recent" is by edition year, with the receipt breaking ties so a
        resubmission supersedes the original.
        """
        candidates = [
            r
            for r in self.records_for(conf_series_id)
            if before_year is None or (isinstance(r.year, int) and r.year < before_year)
        ]
        if not candidates:
            return None
        return max(candidates, key=lambda r: (r.year, r.receipt or 0))

    def record_annotation(self, rec: AnnotationRecord) -> int:
        """Validate, stamp a receipt, and durably append the record."""
        validate_record(rec)
        with self._lock:
            receipt = self._next_receipt
            self._next_receipt += 1
            stamped = replace(rec, receipt=receipt)
            line = json.dumps(stamped.to_dict(), ensure_ascii=False, sort_keys=True)
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StoreError(f"cannot append to history {self.path}: {exc}") from exc
        return receipt

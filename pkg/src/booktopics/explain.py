"""Explanations: which text excerpts led to each topic, and where.

An excerpt is the normalized n-gram string that triggered a detection, so
"language processing" found in six chapters is one excerpt with a chapter
count of 6, however it was capitalized.  Because enrichment copies a
descendant's trigger evidence onto every ancestor, a super-topic's
explanation automatically contains the excerpts of all its classified
descendants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classifier import ENHANCED, BookClassification, ChapterClassification
from .ingest import Chapter


@dataclass(frozen=True)
class Excerpt:
    text: str
    chapter_count: int
    occurrence_count: int


@dataclass(frozen=True)
class Explanation:
    topic: str
    excerpts: tuple[Excerpt, ...]


def build_explanations(bc: BookClassification) -> dict[str, Explanation]:
    """Per-topic excerpts, ordered by (chapters desc, occurrences desc, text)."""
    per_topic: dict[str, dict[str, tuple[set, int]]] = {}
    for cc in bc.per_chapter:
        for topic, ev in cc.topics.items():
            bucket = per_topic.setdefault(topic, {})
            for src in ev.sources:
                chapters, occurrences = bucket.get(src.ngram, (set(), 0))
                chapters.add(src.chapter_id)
                bucket[src.ngram] = (chapters, occurrences + 1)
    out = {}
    for topic, bucket in per_topic.items():
        excerpts = [
            Excerpt(text, len(chapters), occurrences)
            for text, (chapters, occurrences) in bucket.items()
        ]
        excerpts.sort(key=lambda e: (-e.chapter_count, -e.occurrence_count, e.text))
        out[topic] = Explanation(topic, tuple(excerpts))
    return out


@dataclass(frozen=True)
class HighlightSpan:
    chapter_id: str
    start: int
    end: int
    topics: tuple[str, ...]


def highlight_spans(chapter: Chapter, cc: ChapterClassification) -> list[HighlightSpan]:
    """Non-overlapping abstract spans that directly triggered a topic.

    Only syntactic/semantic evidence contributes — enhanced entries reuse
    their descendant's span and would merely duplicate it.  Overlapping
    trigger spans are merged and their topic lists combined.
    """
    events = []
    for topic, ev in cc.topics.items():
        for src in ev.sources:
            if src.field == "abstract" and src.origin != ENHANCED:
                events.append((src.span[0], src.span[1], topic))
    events.sort()
    merged: list[list] = []
    for start, end, topic in events:
        if merged and start < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
            merged[-1][2].add(topic)
        else:
            merged.append([start, end, {topic}])
    return [
        HighlightSpan(chapter.chapter_id, start, end, tuple(sorted(topics)))
        for start, end, topics in merged
    ]

"""Classification report: the JSON document produced for a set of volumes.

Field names are the stable interface consumed by the CLI, the HTTP layer,
and the evaluation loader; rendering sorts keys so identical inputs yield
byte-identical output.
"""

from __future__ import annotations

import json

from .classifier import BookClassification, ClassifierConfig
from .explain import build_explanations, highlight_spans
from .ontology import Ontology
from .pmc import PmcScheme, infer_pmcs
from .taxonomy import TaxonomyNode, build_taxonomy, filter_taxonomy


def taxonomy_to_dict(node: TaxonomyNode) -> dict:
    return {
        "topic": node.topic,
        "chapterCount": node.chapter_count,
        "structural": node.structural,
        "children": [taxonomy_to_dict(child) for child in node.children],
    }


def topic_counts(bc: BookClassification) -> list[dict]:
    ordered = sorted(bc.topic_chapter_count.items(), key=lambda kv: (-kv[1], kv[0]))
    return [{"topic": t, "chapterCount": n} for t, n in ordered]


def build_report(
    bc: BookClassification,
    ontology: Ontology,
    cfg: ClassifierConfig,
    scheme: PmcScheme | None = None,
    min_chapters: int = 1,
) -> dict:
    chapters = {ch.chapter_id: ch for ch in bc.chapters}
    per_chapter = []
    for cc in bc.per_chapter:
        topics = []
        for topic in sorted(cc.topics):
            ev = cc.topics[topic]
            topics.append(
                {
                    "topic": topic,
                    "evidence": [
                        {
                            "ngram": s.ngram,
                            "field": s.field,
                            "span": [s.span[0], s.span[1]],
                            "origin": s.origin,
                            "matchedLabel": s.matched_label,
                            "score": s.score,
                        }
                        for s in ev.sources
                    ],
                }
            )
        highlights = [
            {"start": h.start, "end": h.end, "topics": list(h.topics)}
            for h in highlight_spans(chapters[cc.chapter_id], cc)
        ]
        per_chapter.append(
            {"chapterId": cc.chapter_id, "topics": topics, "highlights": highlights}
        )

    pmcs = []
    if scheme is not None:
        pmcs = [
            {
                "code": code,
                "label": scheme.codes[code].label,
                "level": scheme.codes[code].level,
                "chapterCount": count,
            }
            for code, count in infer_pmcs(bc, scheme)
        ]

    explanations = {
        topic: [
            {
                "text": e.text,
                "chapterCount": e.chapter_count,
                "occurrenceCount": e.occurrence_count,
            }
            for e in expl.excerpts
        ]
        for topic, expl in build_explanations(bc).items()
    }

    forest = filter_taxonomy(build_taxonomy(bc, ontology), min_chapters)
    return {
        "config": {
            "levThreshold": cfg.lev_threshold,
            "knnK": cfg.knn_k,
            "knnMinSim": cfg.knn_min_sim,
            "useElbow": cfg.use_elbow,
        },
        "books": [
            {
                "volumeNumber": b.volume_number,
                "seriesName": b.series_name,
                "title": b.title,
                "confSeriesId": b.conf_series_id,
                "year": b.year,
                "chapterCount": len(b.chapters),
            }
            for b in bc.books
        ],
        "minChapters": min_chapters,
        "topics": topic_counts(bc),
        "taxonomy": [taxonomy_to_dict(root) for root in forest],
        "pmcs": pmcs,
        "perChapter": per_chapter,
        "explanations": explanations,
    }


def render_json(document: dict) -> str:
    return json.dumps(document, ensure_ascii=False, sort_keys=True, indent=2) + "\n"

"""Precision/recall/F1 of predicted topic sets against a gold standard.

Gold and prediction files are JSON lists of {"paperId": ..., "topics": [...]};
a full classification report (with a "perChapter" array) is also accepted as
predictions, using chapter ids as paper ids.  Topics are compared after label
normalization, so capitalization differences never count as errors.

Micro-averaging (the default) counts (paper, topic) pairs globally; macro
averages per-paper scores.  Papers present on only one side are skipped with
a warning and metrics are computed over the id intersection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .ontology import normalize_label


@dataclass
class Metrics:
    precision: float
    recall: float
    f1: float
    mode: str  # "micro" | "macro"
    paper_count: int
    warnings: list[str] = field(default_factory=list)
    per_paper: dict[str, tuple[float, float, float]] = field(default_factory=dict)


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def load_topic_sets(path) -> dict[str, set[str]]:
    """Read {"paperId", "topics"} entries, or a report's perChapter array."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc

    if isinstance(data, dict) and "perChapter" in data:
        data = [
            {
                "paperId": entry.get("chapterId"),
                "topics": [t.get("topic") for t in entry.get("topics", [])],
            }
            for entry in data["perChapter"]
        ]
    if not isinstance(data, list):
        raise ParseError(f"{path}: expected a list of paperId/topics objects")
    out: dict[str, set[str]] = {}
    for entry in data:
        if not isinstance(entry, dict) or "paperId" not in entry or "topics" not in entry:
            raise ParseError(f"{path}: entry missing paperId/topics: {entry!r}")
        pid = str(entry["paperId"])
        if pid in out:
            raise ParseError(f"{path}: duplicate paperId {pid!r}")
        out[pid] = {normalize_label(str(t)) for t in entry["topics"]}
    return out


def evaluate(
    gold: dict[str, set[str]],
    predicted: dict[str, set[str]],
    macro: bool = False,
) -> Metrics:
    common = sorted(gold.keys() & predicted.keys())
    warnings = []
    only_gold = sorted(gold.keys() - predicted.keys())
    only_pred = sorted(predicted.keys() - gold.keys())
    if only_gold:
        warnings.append(f"{len(only_gold)} paper(s) only in gold: {', '.join(only_gold[:5])}")
    if only_pred:
        warnings.append(
            f"{len(only_pred)} paper(s) only in predictions: {', '.join(only_pred[:5])}"
        )

    per_paper: dict[str, tuple[float, float, float]] = {}
    for pid in common:
        g, p = gold[pid], predicted[pid]
        tp = len(g & p)
        prec = tp / len(p) if p else (1.0 if not g else 0.0)
        rec = tp / len(g) if g else (1.0 if not p else 0.0)
        per_paper[pid] = (prec, rec, _f1(prec, rec))

    if macro:
        if common:
            precision = sum(v[0] for v in per_paper.values()) / len(common)
            recall = sum(v[1] for v in per_paper.values()) / len(common)
            f1 = sum(v[2] for v in per_paper.values()) / len(common)
        else:
            precision = recall = f1 = 0.0
        return Metrics(precision, recall, f1, "macro", len(common), warnings, per_paper)

    tp = sum(len(gold[pid] & predicted[pid]) for pid in common)
    fp = sum(len(predicted[pid] - gold[pid]) for pid in common)
    fn = sum(len(gold[pid] - predicted[pid]) for pid in common)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return Metrics(precision, recall, _f1(precision, recall), "micro", len(common), warnings, per_paper)

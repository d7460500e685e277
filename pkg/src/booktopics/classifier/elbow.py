"""Knee detection for relevance-ranked topic lists.

Scores are sorted descending and rescaled to the unit square; the knee is
the point with the greatest elevation above the chord that joins the first
and last points (x + y - 1 in normalized coordinates).  Everything up to
and including the knee is kept.  Using the signed elevation rather than the
absolute chord distance means a steep initial drop keeps only the plateau
before the drop, which is the selection behavior the rest of the pipeline
relies on.
"""

from __future__ import annotations


def elbow_select(scored) -> set:
    """Topics to keep from (topic, relevance) pairs.

    Fewer than three points, or all scores equal, keeps everything.  Ties in
    the ranking are broken by topic id; ties in elevation keep the earliest
    point.
    """
    items = sorted(scored, key=lambda pair: (-pair[1], pair[0]))
    if len(items) < 3:
        return {t for t, _ in items}
    scores = [s for _, s in items]
    lo, hi = scores[-1], scores[0]
    if hi == lo:
        return {t for t, _ in items}
    n = len(items)
    knee, best = 0, float("-inf")
    for i, s in enumerate(scores):
        elevation = i / (n - 1) + (s - lo) / (hi - lo) - 1.0
        if elevation > best:
            knee, best = i, elevation
    return {t for t, _ in items[: knee + 1]}

"""Topic classification of chapters: syntactic and semantic detection,
union, and super-topic enrichment.

The syntactic module fuzzy-matches text n-grams against topic aliases with
Levenshtein similarity.  The semantic module embeds candidate noun phrases,
walks their nearest neighbors in the vector model, and scores each topic by
frequency x diversity of the n-grams that led to it.  Their union is then
closed upward: every ancestor of a detected topic is added with
origin="enhanced", carrying the descendant's trigger n-grams as evidence.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from ..embeddings import EmbeddingModel
from ..errors import SchemaError, ZeroVectorError
from ..ingest import Book, Chapter
from ..ontology import Ontology, normalize_label
from .elbow import elbow_select
from .tagger import RuleTagger, chunk_ngrams, extract_candidate_terms
from .text import DEFAULT_STOPWORDS, extract_ngrams, levenshtein_sim

SYNTACTIC = "syntactic"
SEMANTIC = "semantic"
ENHANCED = "enhanced"


@dataclass(frozen=True)
class TopicSource:
    """One piece of trigger evidence: which n-gram, where, and how it matched."""

    ngram: str
    chapter_id: str
    origin: str  # syntactic | semantic | enhanced
    matched_label: str
    score: float
    field: str  # title | abstract | keyword
    span: tuple[int, int]


@dataclass
class Evidence:
    topic: str
    sources: list[TopicSource] = field(default_factory=list)


@dataclass
class ChapterClassification:
    chapter_id: str
    topics: dict[str, Evidence] = field(default_factory=dict)


@dataclass
class BookClassification:
    books: tuple[Book, ...]
    per_chapter: list[ChapterClassification]
    topic_chapter_count: dict[str, int]

    @property
    def chapters(self) -> list[Chapter]:
        return [ch for b in self.books for ch in b.chapters]


@dataclass
class ClassifierConfig:
    lev_threshold: float = 0.94
    knn_k: int = 10
    knn_min_sim: float = 0.7
    use_elbow: bool = True
    stopwords: frozenset = DEFAULT_STOPWORDS
    tagger: object = field(default_factory=RuleTagger)

    def __post_init__(self):
        if not 0.0 < self.lev_threshold <= 1.0:
            raise ValueError(f"lev_threshold must be in (0, 1], got {self.lev_threshold}")
        if self.knn_k < 1:
            raise ValueError(f"knn_k must be positive, got {self.knn_k}")
        if not -1.0 <= self.knn_min_sim <= 1.0:
            raise ValueError(f"knn_min_sim must be in [-1, 1], got {self.knn_min_sim}")


def _chapter_fields(chapter: Chapter):
    yield "title", chapter.title
    if chapter.abstract:
        yield "abstract", chapter.abstract
    for kw in chapter.keywords:
        yield "keyword", kw


def syntactic_classify(
    chapter: Chapter, ontology: Ontology, cfg: ClassifierConfig
) -> dict[str, Evidence]:
    """Topics whose aliases fuzzy-match an n-gram of title/abstract/keywords."""
    found: dict[str, Evidence] = {}
    slack = 1.0 - cfg.lev_threshold
    for fieldname, text in _chapter_fields(chapter):
        for tokens, span in extract_ngrams(text, cfg.stopwords):
            ngram = normalize_label(" ".join(tokens))
            if not ngram:
                continue
            for alias, topics in ontology.label_index.items():
                longest = max(len(ngram), len(alias))
                # Edit distance is at least the length difference, so most
                # aliases are skipped without running the DP.
                if abs(len(ngram) - len(alias)) > slack * longest + 1e-9:
                    continue
                sim = levenshtein_sim(ngram, alias)
                if sim < cfg.lev_threshold:
                    continue
                for topic in sorted(topics):
                    src = TopicSource(
                        ngram=ngram,
                        chapter_id=chapter.chapter_id,
                        origin=SYNTACTIC,
                        matched_label=alias,
                        score=sim,
                        field=fieldname,
                        span=span,
                    )
                    found.setdefault(topic, Evidence(topic)).sources.append(src)
    return found


def semantic_classify(
    chapter: Chapter,
    ontology: Ontology,
    model: EmbeddingModel,
    cfg: ClassifierConfig,
) -> dict[str, Evidence]:
    """Topics reached through embedding neighbors of candidate noun phrases.

    Each n-gram occurrence awards a topic at most one identification event;
    a topic's relevance is (total events) x (distinct n-gram strings), and
    the knee of the relevance curve decides which topics survive.
    """
    counts: dict[str, int] = {}
    distinct: dict[str, set[str]] = {}
    sources: dict[str, list[TopicSource]] = {}
    for fieldname, text in _chapter_fields(chapter):
        for chunk in extract_candidate_terms(text, cfg.tagger):
            for tokens, span in chunk_ngrams(chunk):
                vec = model.vector_of(list(tokens))
                if vec is None:
                    continue
                try:
                    neighbors = model.most_similar(vec, cfg.knn_k, cfg.knn_min_sim)
                except ZeroVectorError:
                    continue  # averaged vectors can cancel out
                ngram = " ".join(tokens)
                seen: set[str] = set()
                for neighbor, _cos in neighbors:
                    if neighbor in model.excluded:
                        continue
                    label = neighbor.replace("_", " ")
                    for topic in sorted(ontology.resolve_label(label)):
                        if topic in seen:
                            continue
                        seen.add(topic)
                        counts[topic] = counts.get(topic, 0) + 1
                        distinct.setdefault(topic, set()).add(ngram)
                        sources.setdefault(topic, []).append(
                            TopicSource(
                                ngram=ngram,
                                chapter_id=chapter.chapter_id,
                                origin=SEMANTIC,
                                matched_label=label,
                                score=0.0,  # backfilled with relevance below
                                field=fieldname,
                                span=span,
                            )
                        )
    relevance = {t: counts[t] * len(distinct[t]) for t in counts}
    kept = elbow_select(relevance.items()) if cfg.use_elbow else set(relevance)
    return {
        t: Evidence(t, [replace(s, score=float(relevance[t])) for s in sources[t]])
        for t in sources
        if t in kept
    }


def classify_chapter(
    chapter: Chapter,
    ontology: Ontology,
    model: EmbeddingModel | None,
    cfg: ClassifierConfig,
) -> ChapterClassification:
    """Union of both modules, closed under the super-topic relation."""
    merged: dict[str, Evidence] = {}
    parts = [syntactic_classify(chapter, ontology, cfg)]
    if model is not None:
        parts.append(semantic_classify(chapter, ontology, model, cfg))
    for part in parts:
        for topic, ev in part.items():
            merged.setdefault(topic, Evidence(topic)).sources.extend(ev.sources)
    # super_topics is already transitive, so enriching from the directly
    # detected topics alone yields the full upward closure.
    inherited: dict[str, list[TopicSource]] = {}
    for topic, ev in merged.items():
        for ancestor in ontology.super_topics(topic):
            inherited.setdefault(ancestor, []).extend(
                replace(src, origin=ENHANCED) for src in ev.sources
            )
    for ancestor in sorted(inherited):
        merged.setdefault(ancestor, Evidence(ancestor)).sources.extend(inherited[ancestor])
    return ChapterClassification(chapter.chapter_id, merged)


def classify_books(
    books,
    ontology: Ontology,
    model: EmbeddingModel | None,
    cfg: ClassifierConfig | None = None,
    max_workers: int | None = None,
) -> BookClassification:
    """Classify every chapter of several volumes into one result.

    Chapter ids must be unique across all volumes; chapters are independent,
    so max_workers > 1 classifies them in a thread pool (same result, same
    order).
    """
    cfg = cfg or ClassifierConfig()
    books = tuple(books)
    chapters: list[Chapter] = []
    seen: set[str] = set()
    for book in books:
        for ch in book.chapters:
            if ch.chapter_id in seen:
                raise SchemaError(
                    f"chapter id {ch.chapter_id!r} appears in more than one volume"
                )
            seen.add(ch.chapter_id)
            chapters.append(ch)

    def run(ch: Chapter) -> ChapterClassification:
        return classify_chapter(ch, ontology, model, cfg)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_chapter = list(pool.map(run, chapters))
    else:
        per_chapter = [run(ch) for ch in chapters]

    counts: dict[str, int] = {}
    for cc in per_chapter:
        for topic in cc.topics:
            counts[topic] = counts.get(topic, 0) + 1
    return BookClassification(books, per_chapter, counts)


def classify_book(
    book: Book,
    ontology: Ontology,
    model: EmbeddingModel | None,
    cfg: ClassifierConfig | None = None,
    max_workers: int | None = None,
) -> BookClassification:
    return classify_books([book], ontology, model, cfg, max_workers)

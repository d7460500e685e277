"""Two-module topic classifier with super-topic enrichment."""

from .core import (
    ENHANCED,
    SEMANTIC,
    SYNTACTIC,
    BookClassification,
    ChapterClassification,
    ClassifierConfig,
    Evidence,
    TopicSource,
    classify_book,
    classify_books,
    classify_chapter,
    semantic_classify,
    syntactic_classify,
)
from .elbow import elbow_select
from .tagger import Chunk, RuleTagger, WhitespaceChunker, chunk_ngrams, extract_candidate_terms
from .text import DEFAULT_STOPWORDS, extract_ngrams, levenshtein_sim, tokenize_sentences

__all__ = [
    "BookClassification",
    "ChapterClassification",
    "ClassifierConfig",
    "Chunk",
    "DEFAULT_STOPWORDS",
    "ENHANCED",
    "Evidence",
    "RuleTagger",
    "SEMANTIC",
    "SYNTACTIC",
    "TopicSource",
    "WhitespaceChunker",
    "chunk_ngrams",
    "classify_book",
    "classify_books",
    "classify_chapter",
    "elbow_select",
    "extract_candidate_terms",
    "extract_ngrams",
    "levenshtein_sim",
    "semantic_classify",
    "syntactic_classify",
    "tokenize_sentences",
]

"""Ontology-driven topic and market-code annotation for proceedings metadata.

The pipeline: parse book XML archives (:mod:`booktopics.ingest`), match
chapter text against an ontology of research topics syntactically and via
word embeddings (:mod:`booktopics.classifier`), enrich with broader topics,
aggregate explanations (:mod:`booktopics.explain`), infer publisher market
codes (:mod:`booktopics.pmc`), and present everything as a filterable
taxonomy with a durable annotation store (:mod:`booktopics.taxonomy`).
Batch access via :mod:`booktopics.cli`, interactive access via
:mod:`booktopics.service`.
"""

from .classifier import ClassifierConfig, classify_book, classify_books, classify_chapter
from .embeddings import EmbeddingModel, load_model, parse_model_text
from .evaluation import evaluate, load_topic_sets
from .explain import build_explanations, highlight_spans
from .ingest import load_archive, parse_archive, parse_book_xml
from .ontology import Ontology, load_ontology, normalize_label, ontology_from_dict
from .pmc import PmcScheme, infer_pmcs, load_scheme, scheme_from_dict
from .report import build_report, render_json
from .taxonomy import (
    AnnotationRecord,
    AnnotationStore,
    build_taxonomy,
    filter_taxonomy,
    walk,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationRecord",
    "AnnotationStore",
    "ClassifierConfig",
    "EmbeddingModel",
    "Ontology",
    "PmcScheme",
    "build_explanations",
    "build_report",
    "build_taxonomy",
    "classify_book",
    "classify_books",
    "classify_chapter",
    "evaluate",
    "filter_taxonomy",
    "highlight_spans",
    "infer_pmcs",
    "load_archive",
    "load_model",
    "load_ontology",
    "load_scheme",
    "load_topic_sets",
    "normalize_label",
    "ontology_from_dict",
    "parse_archive",
    "parse_book_xml",
    "parse_model_text",
    "render_json",
    "scheme_from_dict",
    "walk",
    "__version__",
]

"""HTTP API around the classification pipeline.

Sessions are created by uploading a proceedings archive (ZIP of book XML
files, or one bare XML document).  Classification happens exactly once per
session; taxonomy filtering, explanations, and chapter highlights are then
served from the cached result.  Only submitted annotation records are
durable — sessions themselves are in-memory and evicted after an idle
period.

Error responses always carry a JSON body ``{"code": ..., "message": ...}``.
"""

from __future__ import annotations

import datetime as _dt
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from email import policy
from email.parser import BytesParser

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .classifier import BookClassification, ClassifierConfig, classify_books
from .data import DEMO_MODEL, DEMO_ONTOLOGY, DEMO_SCHEME
from .embeddings import EmbeddingModel, load_model
from .errors import SchemaError, ValidationError, XmlError, ZipError
from .explain import build_explanations, highlight_spans
from .ingest import Book, parse_archive, parse_book_xml
from .ontology import Ontology, load_ontology, normalize_label
from .pmc import PmcScheme, infer_pmcs, load_scheme
from .report import taxonomy_to_dict
from .taxonomy import (
    AnnotationRecord,
    AnnotationStore,
    build_taxonomy,
    filter_taxonomy,
    validate_record,
)

_ZIP_MAGIC = (b"PK\x03\x04", b"PK\x05\x06", b"PK\x07\x08")


class ApiError(Exception):
    """Error that maps onto a JSON error body with an HTTP status."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServiceConfig:
    ontology_path: str = str(DEMO_ONTOLOGY)
    model_path: str = str(DEMO_MODEL)
    scheme_path: str = str(DEMO_SCHEME)
    history_path: str = "annotations.jsonl"
    lev_threshold: float = 0.94
    knn_k: int = 10
    knn_min_sim: float = 0.7
    session_ttl: float = 7200.0
    host: str = "127.0.0.1"
    port: int = 8000

    @classmethod
    def from_env(cls, environ=None) -> "ServiceConfig":
        env = os.environ if environ is None else environ
        cfg = cls()
        cfg.ontology_path = env.get("BOOKTOPICS_ONTOLOGY", cfg.ontology_path)
        cfg.model_path = env.get("BOOKTOPICS_MODEL", cfg.model_path)
        cfg.scheme_path = env.get("BOOKTOPICS_SCHEME", cfg.scheme_path)
        cfg.history_path = env.get("BOOKTOPICS_HISTORY", cfg.history_path)
        cfg.lev_threshold = float(env.get("BOOKTOPICS_LEV_THRESHOLD", cfg.lev_threshold))
        cfg.knn_k = int(env.get("BOOKTOPICS_KNN_K", cfg.knn_k))
        cfg.knn_min_sim = float(env.get("BOOKTOPICS_KNN_MIN_SIM", cfg.knn_min_sim))
        cfg.session_ttl = float(env.get("BOOKTOPICS_SESSION_TTL", cfg.session_ttl))
        cfg.host = env.get("BOOKTOPICS_HOST", cfg.host)
        cfg.port = int(env.get("BOOKTOPICS_PORT", cfg.port))
        return cfg


@dataclass
class Session:
    session_id: str
    books: tuple[Book, ...]
    classification: BookClassification
    taxonomy: tuple
    explanations: dict
    pmcs: list[tuple[str, int]]
    conf_series_id: str | None
    year: int | None
    created_at: float = field(default_factory=time.monotonic)
    last_access: float = field(default_factory=time.monotonic)


def _extract_upload(content_type: str | None, body: bytes) -> bytes:
    """Return the archive payload, unwrapping multipart/form-data bodies.

    The ``archive`` field is preferred; otherwise the first part carrying a
    payload is used.  Parsing uses the stdlib email machinery, which handles
    the same RFC 2046 framing that browsers emit.
    """
    if not content_type or not content_type.split(";")[0].strip().lower() == "multipart/form-data":
        return body
    header = b"Content-Type: " + content_type.encode("latin-1") + b"\r\n\r\n"
    msg = BytesParser(policy=policy.HTTP).parsebytes(header + body)
    if not msg.is_multipart():
        raise ApiError(400, "bad-multipart", "multipart body could not be parsed")
    fallback: bytes | None = None
    for part in msg.iter_parts():
        payload = part.get_payload(decode=True)
        if payload is None:
            continue
        if part.get_param("name", header="content-disposition") == "archive":
            return payload
        if fallback is None:
            fallback = payload
    if fallback is None:
        raise ApiError(400, "bad-multipart", "multipart body contains no file part")
    return fallback


def _parse_books(payload: bytes) -> list[Book]:
    if not payload:
        raise ApiError(400, "empty-upload", "request body is empty")
    if payload[:4] in _ZIP_MAGIC:
        try:
            result = parse_archive(payload)
        except ZipError as exc:
            raise ApiError(400, "bad-archive", str(exc)) from exc
        if result.errors:
            raise ApiError(422, "bad-book", "; ".join(result.errors))
        if not result.books:
            raise ApiError(422, "empty-archive", "no books")
        return result.books
    try:
        return [parse_book_xml(payload)]
    except XmlError as exc:
        raise ApiError(400, "bad-xml", str(exc)) from exc
    except SchemaError as exc:
        raise ApiError(422, "bad-book", str(exc)) from exc


def _first(values):
    for value in values:
        if value is not None:
            return value
    return None


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    cfg = config if config is not None else ServiceConfig.from_env()
    ontology: Ontology = load_ontology(cfg.ontology_path)
    model: EmbeddingModel | None = load_model(cfg.model_path) if cfg.model_path else None
    scheme: PmcScheme | None = load_scheme(cfg.scheme_path) if cfg.scheme_path else None
    store = AnnotationStore(cfg.history_path)
    classifier_cfg = ClassifierConfig(
        lev_threshold=cfg.lev_threshold, knn_k=cfg.knn_k, knn_min_sim=cfg.knn_min_sim
    )

    app = FastAPI(title="booktopics", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.config = cfg
    app.state.sessions = {}
    app.state.sessions_lock = threading.Lock()
    app.state.classification_runs = 0

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(_request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": "http-error", "message": str(exc.detail)},
        )

    @app.exception_handler(Exception)
    async def _internal_error(_request: Request, exc: Exception):
        return JSONResponse(
            status_code=500, content={"code": "internal", "message": str(exc)}
        )

    def _evict(now: float) -> None:
        stale = [
            sid
            for sid, sess in app.state.sessions.items()
            if now - sess.last_access > cfg.session_ttl
        ]
        for sid in stale:
            del app.state.sessions[sid]

    def _session(session_id: str) -> Session:
        with app.state.sessions_lock:
            now = time.monotonic()
            _evict(now)
            sess = app.state.sessions.get(session_id)
            if sess is None:
                raise ApiError(404, "unknown-session", f"no session {session_id!r}")
            sess.last_access = now
            return sess

    @app.get("/health")
    async def health():
        return {"status": "ok", "classificationRuns": app.state.classification_runs}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        payload = _extract_upload(request.headers.get("content-type"), await request.body())
        books = _parse_books(payload)
        classification = classify_books(books, ontology, model, classifier_cfg)
        sess = Session(
            session_id=uuid.uuid4().hex,
            books=tuple(books),
            classification=classification,
            taxonomy=tuple(build_taxonomy(classification, ontology)),
            explanations=build_explanations(classification),
            pmcs=infer_pmcs(classification, scheme) if scheme is not None else [],
            conf_series_id=_first(b.conf_series_id for b in books),
            year=_first(b.year for b in books),
        )
        with app.state.sessions_lock:
            _evict(time.monotonic())
            app.state.classification_runs += 1
            app.state.sessions[sess.session_id] = sess
        return {
            "sessionId": sess.session_id,
            "books": [
                {
                    "volumeNumber": b.volume_number,
                    "seriesName": b.series_name,
                    "title": b.title,
                    "confSeriesId": b.conf_series_id,
                    "year": b.year,
                    "chapterCount": len(b.chapters),
                }
                for b in books
            ],
            "chapterCount": len(classification.chapters),
            "topicCount": len(classification.topic_chapter_count),
        }

    def _previous_record(sess: Session) -> AnnotationRecord | None:
        if sess.conf_series_id is None:
            return None
        return store.previous(sess.conf_series_id, before_year=sess.year)

    @app.get("/sessions/{session_id}/taxonomy")
    async def get_taxonomy(session_id: str, minChapters: str = "1"):
        sess = _session(session_id)
        try:
            k = int(minChapters)
        except ValueError:
            raise ApiError(400, "bad-min-chapters", "minChapters must be a positive integer") from None
        if k < 1:
            raise ApiError(400, "bad-min-chapters", "minChapters must be a positive integer")
        previous = _previous_record(sess)
        marked_topics = set(previous.selected_topics) if previous else set()
        marked_pmcs = set(previous.selected_pmcs) if previous else set()
        counts = sess.classification.topic_chapter_count
        return {
            "minChapters": k,
            "taxonomy": [taxonomy_to_dict(n) for n in filter_taxonomy(list(sess.taxonomy), k)],
            "topics": [
                {"topic": t, "chapterCount": n, "marked": t in marked_topics}
                for t, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            ],
            "pmcs": [
                {
                    "code": code,
                    "label": scheme.codes[code].label,
                    "level": scheme.codes[code].level,
                    "chapterCount": n,
                    "marked": code in marked_pmcs,
                }
                for code, n in sess.pmcs
            ],
            "previous": None
            if previous is None
            else {
                "confSeriesId": previous.conf_series_id,
                "year": previous.year,
                "receipt": previous.receipt,
            },
        }

    @app.get("/sessions/{session_id}/topics/{topic}/explanation")
    async def get_explanation(session_id: str, topic: str):
        sess = _session(session_id)
        key = normalize_label(topic)
        explanation = sess.explanations.get(key)
        if explanation is None:
            raise ApiError(404, "unknown-topic", f"topic {topic!r} is not classified in this session")
        return {
            "topic": explanation.topic,
            "excerpts": [
                {
                    "text": e.text,
                    "chapterCount": e.chapter_count,
                    "occurrenceCount": e.occurrence_count,
                }
                for e in explanation.excerpts
            ],
        }

    @app.get("/sessions/{session_id}/topics/{topic}")
    async def get_topic_detail(session_id: str, topic: str):
        # Local stand-in for an external topic browser: ontology context plus
        # this session's chapter count.
        sess = _session(session_id)
        key = normalize_label(topic)
        entry = ontology.topics.get(key)
        if entry is None:
            # Merged aliases resolve to their canonical topic when unambiguous.
            canonicals = sorted(ontology.resolve_label(key))
            if len(canonicals) == 1:
                key = canonicals[0]
                entry = ontology.topics[key]
        if entry is None:
            raise ApiError(404, "unknown-topic", f"topic {topic!r} is not in the ontology")
        return {
            "topic": entry.id,
            "label": entry.label,
            "aliases": sorted(entry.aliases),
            "superTopics": sorted(ontology.parents.get(key, ())),
            "subTopics": sorted(ontology.children.get(key, ())),
            "chapterCount": sess.classification.topic_chapter_count.get(key, 0),
        }

    @app.get("/sessions/{session_id}/chapters")
    async def get_chapters(session_id: str):
        sess = _session(session_id)
        by_id = {cc.chapter_id: cc for cc in sess.classification.per_chapter}
        chapters = []
        for book in sess.books:
            for chap in book.chapters:
                cc = by_id[chap.chapter_id]
                chapters.append(
                    {
                        "chapterId": chap.chapter_id,
                        "volumeNumber": book.volume_number,
                        "title": chap.title,
                        "abstract": chap.abstract,
                        "keywords": list(chap.keywords),
                        "topics": sorted(cc.topics),
                        "highlights": [
                            {"start": span.start, "end": span.end, "topics": list(span.topics)}
                            for span in highlight_spans(chap, cc)
                        ],
                    }
                )
        return {"chapters": chapters}

    @app.get("/series/{conf_series_id}/history")
    async def get_history(conf_series_id: str):
        records = store.records_for(conf_series_id)
        records.sort(key=lambda r: (r.year if r.year is not None else 0, r.receipt or 0))
        return {
            "confSeriesId": conf_series_id,
            "records": [r.to_dict() for r in records],
        }

    @app.post("/sessions/{session_id}/submit")
    async def submit(session_id: str, request: Request):
        sess = _session(session_id)
        try:
            data = await request.json()
        except Exception:
            raise ApiError(400, "bad-json", "request body is not valid JSON") from None
        if not isinstance(data, dict):
            raise ApiError(422, "invalid-record", "record must be a JSON object")
        data = dict(data)
        if sess.conf_series_id is not None:
            data.setdefault("confSeriesId", sess.conf_series_id)
        if sess.year is not None:
            data.setdefault("year", sess.year)
        data.setdefault("volumes", [b.volume_number for b in sess.books])
        data.setdefault(
            "submittedAt",
            _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z"),
        )
        try:
            record = AnnotationRecord.from_dict(data)
            validate_record(record)
        except (ValidationError, KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "invalid-record", str(exc)) from exc

        classified = set(sess.classification.topic_chapter_count)
        added = {normalize_label(t) for t, _parent in record.added_topics}
        for topic in record.added_topics:
            parent = topic[1]
            if parent is not None and normalize_label(parent) not in classified | added:
                raise ApiError(409, "unknown-topic", f"added topic parent {parent!r} is not classified")
        referenced = list(record.selected_topics) + list(record.removed_topics) + list(record.renames)
        for topic in referenced:
            if normalize_label(topic) not in classified | added:
                raise ApiError(
                    409, "unknown-topic", f"topic {topic!r} is not classified in this session"
                )
        known_codes = set(scheme.codes) if scheme is not None else set()
        for code in record.selected_pmcs:
            if code not in known_codes:
                raise ApiError(409, "unknown-pmc", f"market code {code!r} is not in the scheme")
        try:
            receipt = store.record_annotation(record)
        except ValidationError as exc:
            raise ApiError(422, "invalid-record", str(exc)) from exc
        return {"receipt": receipt, "record": record.to_dict()}

    return app


def run(config: ServiceConfig | None = None) -> None:
    """Serve the API with uvicorn (blocking)."""
    import uvicorn

    cfg = config if config is not None else ServiceConfig.from_env()
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="warning")

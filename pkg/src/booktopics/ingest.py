"""Parsing of proceedings metadata: per-book XML documents and ZIP archives.

Book XML (UTF-8)::

    <book volume="V" series="S" conf-series-id="C" year="Y">
      <title>T</title>
      <chapter id="ID">
        <title>..</title>
        <abstract>..</abstract>      <!-- optional -->
        <keywords><kw>..</kw></keywords>  <!-- optional -->
      </chapter>
    </book>

``conf-series-id`` and ``year`` are optional, all other attributes and the
titles are required.  Titles and keywords have whitespace runs collapsed to
single spaces; abstracts only lose leading/trailing whitespace so that
character offsets into the stored text stay meaningful.
"""

from __future__ import annotations

import io
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree

from .errors import SchemaError, XmlError, ZipError


def _collapse(text: str | None) -> str:
    return " ".join((text or "").split())


def _element_text(elem) -> str:
    return "".join(elem.itertext())


@dataclass(frozen=True)
class Chapter:
    chapter_id: str
    title: str
    abstract: str = ""
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class Book:
    volume_number: str
    series_name: str
    title: str
    chapters: tuple[Chapter, ...]
    conf_series_id: str | None = None
    year: int | None = None


@dataclass
class ArchiveResult:
    """Outcome of parsing one ZIP archive: valid books plus per-entry errors."""

    books: list[Book] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def raise_on_error(self) -> "ArchiveResult":
        if self.errors:
            raise XmlError("; ".join(self.errors))
        return self


def parse_book_xml(data) -> Book:
    """Parse one book document (str or bytes) into a Book.

    Raises XmlError for malformed XML and SchemaError for well-formed
    documents that violate the book schema.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise XmlError(f"malformed XML: {exc}") from exc

    if root.tag != "book":
        raise SchemaError(f"root element must be <book>, got <{root.tag}>")
    volume = _collapse(root.get("volume"))
    series = _collapse(root.get("series"))
    if not volume:
        raise SchemaError("book is missing a volume attribute")
    if not series:
        raise SchemaError("book is missing a series attribute")
    conf_series_id = root.get("conf-series-id")
    if conf_series_id is not None:
        conf_series_id = _collapse(conf_series_id) or None
    year: int | None = None
    year_attr = root.get("year")
    if year_attr is not None:
        try:
            year = int(year_attr.strip())
        except ValueError:
            raise SchemaError(f"book year is not an integer: {year_attr!r}") from None

    title_elem = root.find("title")
    title = _collapse(_element_text(title_elem)) if title_elem is not None else ""
    if not title:
        raise SchemaError(f"book {volume!r} is missing a title")

    chapters: list[Chapter] = []
    seen_ids: set[str] = set()
    for chap in root.findall("chapter"):
        cid = (chap.get("id") or "").strip()
        if not cid:
            raise SchemaError(f"chapter in book {volume!r} is missing an id")
        if cid in seen_ids:
            raise SchemaError(f"duplicate chapter id {cid!r} in book {volume!r}")
        seen_ids.add(cid)
        ct_elem = chap.find("title")
        ctitle = _collapse(_element_text(ct_elem)) if ct_elem is not None else ""
        if not ctitle:
            raise SchemaError(f"chapter {cid!r} is missing a title")
        ab_elem = chap.find("abstract")
        abstract = _element_text(ab_elem).strip() if ab_elem is not None else ""
        kw_parent = chap.find("keywords")
        keywords: tuple[str, ...] = ()
        if kw_parent is not None:
            keywords = tuple(_collapse(_element_text(kw)) for kw in kw_parent.findall("kw"))
        chapters.append(Chapter(cid, ctitle, abstract, keywords))

    if not chapters:
        raise SchemaError(f"book {volume!r} has no chapters")
    return Book(
        volume_number=volume,
        series_name=series,
        title=title,
        chapters=tuple(chapters),
        conf_series_id=conf_series_id,
        year=year,
    )


def parse_archive(data: bytes) -> ArchiveResult:
    """Parse every ``*.xml`` entry of a ZIP payload, in archive-name order.

    Entries that fail to parse do not abort the rest: their errors are
    collected (prefixed with the entry name) next to the successfully
    parsed books.  Non-XML entries are ignored.
    """
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except (zipfile.BadZipFile, zipfile.LargeZipFile) as exc:
        raise ZipError(f"not a readable ZIP archive: {exc}") from exc

    result = ArchiveResult()
    with archive:
        names = sorted(
            info.filename
            for info in archive.infolist()
            if not info.is_dir() and info.filename.lower().endswith(".xml")
        )
        for name in names:
            try:
                result.books.append(parse_book_xml(archive.read(name)))
            except (XmlError, SchemaError) as exc:
                result.errors.append(f"{name}: {exc}")
    return result


def load_archive(path) -> ArchiveResult:
    """Read a ZIP file from disk and parse it (see parse_archive)."""
    try:
        payload = Path(path).read_bytes()
    except OSError as exc:
        raise ZipError(f"cannot read archive {path}: {exc}") from exc
    return parse_archive(payload)

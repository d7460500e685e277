"""Shared builders for test fixtures: book XML, ZIP payloads, model files."""

import io
import zipfile
from xml.sax.saxutils import escape, quoteattr


def chapter_xml(cid, title, abstract=None, keywords=()):
    parts = [f"<chapter id={quoteattr(cid)}>", f"<title>{escape(title)}</title>"]
    if abstract is not None:
        parts.append(f"<abstract>{escape(abstract)}</abstract>")
    if keywords:
        parts.append("<keywords>" + "".join(f"<kw>{escape(k)}</kw>" for k in keywords) + "</keywords>")
    parts.append("</chapter>")
    return "".join(parts)


def book_xml(volume, series, chapters, title="Proceedings", conf_series_id=None, year=None):
    attrs = f"volume={quoteattr(volume)} series={quoteattr(series)}"
    if conf_series_id is not None:
        attrs += f" conf-series-id={quoteattr(conf_series_id)}"
    if year is not None:
        attrs += f" year={quoteattr(str(year))}"
    body = "".join(
        chapter_xml(**c) if isinstance(c, dict) else chapter_xml(*c) for c in chapters
    )
    return f"<book {attrs}><title>{escape(title)}</title>{body}</book>"


def make_zip(entries):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        for name, payload in entries.items():
            zf.writestr(name, payload)
    return buf.getvalue()


def model_text(vectors):
    """Render (token, components) pairs, given in frequency-rank order."""
    dim = len(vectors[0][1])
    lines = [f"{len(vectors)} {dim}"]
    for token, vec in vectors:
        lines.append(token + " " + " ".join(str(float(x)) for x in vec))
    return "\n".join(lines) + "\n"


def padded_model_text(real_vectors, pad=3000):
    """Model file whose first `pad` tokens are zero-vector fillers.

    The fillers occupy the excluded high-frequency ranks, so the real
    vectors that follow are actually usable in neighbor queries.
    """
    dim = len(real_vectors[0][1])
    fillers = [(f"filler{i:04d}", [0.0] * dim) for i in range(pad)]
    return model_text(fillers + list(real_vectors))

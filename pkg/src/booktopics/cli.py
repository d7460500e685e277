"""Command-line interface: batch classification, evaluation, and serving.

Exit codes for ``classify``: 0 success, 2 usage error (click), 3 archive
parse failure, 4 resource-load failure (the message names the offending
flag).  Output JSON is byte-stable: keys sorted, two-space indentation.
"""

from __future__ import annotations

import sys

import click

from .classifier import ClassifierConfig
from .data import DEMO_MODEL, DEMO_ONTOLOGY, DEMO_SCHEME
from .embeddings import load_model
from .errors import FormatError, ParseError, SchemaError, XmlError, ZipError
from .evaluation import evaluate, load_topic_sets
from .ingest import load_archive
from .ontology import load_ontology
from .pmc import load_scheme
from .report import build_report, render_json

EXIT_PARSE = 3
EXIT_RESOURCE = 4


def _load_resource(loader, path, flag):
    """Load a resource file, exiting with code 4 and the flag name on failure."""
    try:
        return loader(path)
    except (OSError, ParseError, FormatError, ZipError) as exc:
        click.echo(f"error: {flag} ({path}): {exc}", err=True)
        sys.exit(EXIT_RESOURCE)


@click.group()
@click.version_option(package_name="booktopics")
def main():
    """Classify proceedings metadata into research topics and market codes."""


@main.command()
@click.argument("archive", type=click.Path(dir_okay=False))
@click.option(
    "--ontology",
    envvar="BOOKTOPICS_ONTOLOGY",
    default=str(DEMO_ONTOLOGY),
    show_default="bundled demo ontology",
    help="Topic ontology JSON file.",
)
@click.option(
    "--model",
    envvar="BOOKTOPICS_MODEL",
    default=str(DEMO_MODEL),
    show_default="bundled demo model",
    help="Word-embedding model file; pass an empty string to disable the semantic module.",
)
@click.option(
    "--scheme",
    envvar="BOOKTOPICS_SCHEME",
    default=str(DEMO_SCHEME),
    show_default="bundled demo scheme",
    help="Market-code scheme JSON file; empty string to skip market codes.",
)
@click.option("--min-chapters", default=1, show_default=True, help="Taxonomy filter threshold.")
@click.option("--lev-threshold", default=0.94, show_default=True, help="String-similarity threshold.")
@click.option("--knn-k", default=10, show_default=True, help="Embedding neighbours per term.")
@click.option("--knn-min-sim", default=0.7, show_default=True, help="Minimum neighbour cosine similarity.")
@click.option("--workers", default=None, type=int, help="Chapter-level worker threads.")
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the report here instead of stdout.")
def classify(archive, ontology, model, scheme, min_chapters, lev_threshold, knn_k, knn_min_sim,
             workers, fmt, output):
    """Classify ARCHIVE (a ZIP of book XML files) and emit a JSON report."""
    if min_chapters < 1:
        raise click.BadParameter("must be >= 1", param_hint="--min-chapters")
    onto = _load_resource(load_ontology, ontology, "--ontology")
    emb = _load_resource(load_model, model, "--model") if model else None
    pmc_scheme = _load_resource(load_scheme, scheme, "--scheme") if scheme else None

    try:
        result = load_archive(archive)
    except ZipError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    if result.errors:
        for err in result.errors:
            click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_PARSE)
    if not result.books:
        click.echo("error: archive contains no books", err=True)
        sys.exit(EXIT_PARSE)

    try:
        cfg = ClassifierConfig(
            lev_threshold=lev_threshold, knn_k=knn_k, knn_min_sim=knn_min_sim
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    from .classifier import classify_books

    try:
        bc = classify_books(result.books, onto, emb, cfg, max_workers=workers)
    except SchemaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    report = build_report(bc, onto, cfg, scheme=pmc_scheme, min_chapters=min_chapters)
    text = render_json(report)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command("eval")
@click.argument("gold", type=click.Path(exists=True, dir_okay=False))
@click.argument("predictions", type=click.Path(exists=True, dir_okay=False))
@click.option("--macro", is_flag=True, help="Average per paper instead of over (paper, topic) pairs.")
@click.option("--per-paper", is_flag=True, help="Include a per-paper breakdown (macro mode).")
def eval_command(gold, predictions, macro, per_paper):
    """Score PREDICTIONS against GOLD topic sets (JSON)."""
    try:
        gold_sets = load_topic_sets(gold)
        predicted_sets = load_topic_sets(predictions)
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    metrics = evaluate(gold_sets, predicted_sets, macro=macro)
    for warning in metrics.warnings:
        click.echo(f"warning: {warning}", err=True)
    payload = {
        "mode": metrics.mode,
        "paperCount": metrics.paper_count,
        "precision": metrics.precision,
        "recall": metrics.recall,
        "f1": metrics.f1,
    }
    if per_paper and metrics.per_paper:
        payload["perPaper"] = [
            {"paperId": pid, "precision": p, "recall": r, "f1": f}
            for pid, (p, r, f) in sorted(metrics.per_paper.items())
        ]
    click.echo(render_json(payload), nl=False)


@main.command()
@click.option("--host", envvar="BOOKTOPICS_HOST", default=None, help="Bind address.")
@click.option("--port", envvar="BOOKTOPICS_PORT", default=None, type=int, help="Bind port.")
@click.option("--history", envvar="BOOKTOPICS_HISTORY", default=None,
              help="Annotation store path (JSON lines).")
def serve(host, port, history):
    """Run the HTTP service (uses BOOKTOPICS_* environment variables)."""
    from .service import ServiceConfig, run

    cfg = ServiceConfig.from_env()
    if host is not None:
        cfg.host = host
    if port is not None:
        cfg.port = port
    if history is not None:
        cfg.history_path = history
    run(cfg)


if __name__ == "__main__":
    main()

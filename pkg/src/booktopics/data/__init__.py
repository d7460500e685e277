"""Bundled demonstration dataset: a two-volume proceedings fixture with a
small topic ontology, market-code scheme, and a padded embedding model whose
first 3000 ranks are zero-vector fillers (so the usable tokens sit past the
frequency cutoff)."""

from pathlib import Path

DEMO_DIR = Path(__file__).resolve().parent / "demo"

DEMO_ONTOLOGY = DEMO_DIR / "ontology.json"
DEMO_SCHEME = DEMO_DIR / "scheme.json"
DEMO_MODEL = DEMO_DIR / "model.txt"
DEMO_ARCHIVE = DEMO_DIR / "proceedings.zip"
DEMO_VOLUMES = (DEMO_DIR / "volume_11136.xml", DEMO_DIR / "volume_11137.xml")

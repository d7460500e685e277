"""Pretrained word-embedding models for the semantic classifier.

Model files are plain text: a header line ``<vocabSize> <dim>`` followed by
one line per token, ``token c1 c2 ... c<dim>``.  Line order is descending
corpus frequency, which is what the exclusion rule keys on: the first
min(3000, vocabSize) tokens count as too frequent to be discriminative and
are never proposed as topic matches.  Multi-word tokens are glued with
underscores ("semantic_web"), never spaces.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import (
    DimensionError,
    DuplicateTokenError,
    FormatError,
    ZeroVectorError,
)

EXCLUDED_RANKS = 3000


class EmbeddingModel:
    def __init__(self, tokens: list[str], matrix: np.ndarray):
        self.tokens = tokens
        self.matrix = matrix
        self.matrix.flags.writeable = False
        self.dim = int(matrix.shape[1])
        self.index = {t: i for i, t in enumerate(tokens)}
        self.norms = np.linalg.norm(matrix, axis=1)
        self.excluded = frozenset(tokens[: min(EXCLUDED_RANKS, len(tokens))])

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def vector_of(self, tokens: list[str]) -> np.ndarray | None:
        """Vector for an n-gram: the glued token's vector if the model has
        one, otherwise the mean of the member tokens' vectors, otherwise None.
        """
        glued = "_".join(tokens)
        row = self.index.get(glued)
        if row is not None:
            return self.matrix[row]
        rows = [self.index[t] for t in tokens if t in self.index]
        if not rows:
            return None
        return self.matrix[rows].mean(axis=0)

    def most_similar(self, v, k: int = 10, min_sim: float = 0.7) -> list[tuple[str, float]]:
        """Up to k vocabulary tokens most cosine-similar to v.

        Results are (token, cosine) pairs with cosine >= min_sim, sorted by
        descending cosine and then token order; zero-norm vocabulary rows
        never match.
        """
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DimensionError(f"query vector has shape {v.shape}, model dim is {self.dim}")
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            raise ZeroVectorError("query vector has zero norm")
        with np.errstate(divide="ignore", invalid="ignore"):
            cos = (self.matrix @ v) / (self.norms * vnorm)
        candidates = [
            (self.tokens[i], float(cos[i]))
            for i in np.flatnonzero(self.norms > 0.0)
            if cos[i] >= min_sim
        ]
        candidates.sort(key=lambda pair: (-pair[1], pair[0]))
        return candidates[:k]


def parse_model_text(text: str, source: str = "<string>") -> EmbeddingModel:
    lines = text.splitlines()
    if not lines:
        raise FormatError(f"{source}: empty model file")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"{source}:1: header must be '<vocabSize> <dim>'")
    try:
        size, dim = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError(f"{source}:1: header must be two integers") from None
    if size < 1 or dim < 1:
        raise FormatError(f"{source}:1: vocab size and dimension must be positive")

    tokens: list[str] = []
    seen: set[str] = set()
    matrix = np.empty((size, dim), dtype=float)
    row = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != dim + 1:
            raise FormatError(
                f"{source}:{lineno}: expected 1 token and {dim} components, got {len(fields)} fields"
            )
        token = fields[0]
        if token in seen:
            raise DuplicateTokenError(f"{source}:{lineno}: duplicate token {token!r}")
        if row >= size:
            raise FormatError(f"{source}:{lineno}: more than {size} vector lines")
        try:
            matrix[row] = [float(x) for x in fields[1:]]
        except ValueError:
            raise FormatError(f"{source}:{lineno}: non-numeric vector component") from None
        seen.add(token)
        tokens.append(token)
        row += 1
    if row != size:
        raise FormatError(f"{source}: header declares {size} vectors, file has {row}")
    return EmbeddingModel(tokens, matrix)


def load_model(path) -> EmbeddingModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read model file {path}: {exc}") from exc
    return parse_model_text(text, source=str(path))

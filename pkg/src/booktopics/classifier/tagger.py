"""Part-of-speech tagging and candidate-term chunking.

Candidate terms are maximal token runs matching (ADJECTIVE)* (NOUN)+ inside
one sentence.  Taggers are pluggable: anything with a
``tag(tokens) -> list[str]`` method works; tags other than ADJ/NOUN act as
chunk separators.  Two lightweight implementations are bundled so the
pipeline never depends on a trained model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import TaggerError
from .text import DEFAULT_STOPWORDS, tokenize_sentences

_ADJ_SUFFIXES = (
    "al", "ial", "ic", "ive", "ous", "ful", "less", "ish", "able", "ible", "ary",
)
# Common -al/-ic/... words that are nouns, not adjectives.
_NOUN_EXCEPTIONS = frozenset(
    """
    retrieval portal journal material potential interval signal capital
    hospital animal arrival proposal approval denial trial tutorial manual
    individual professional official festival logic music public topic
    """.split()
)

_DEFAULT_ADJ = frozenset(
    "deep new novel large small big high low fast slow main key real online".split()
)


class RuleTagger:
    """Suffix-and-lexicon tagger: function words are OTHER, words with
    adjective suffixes are ADJ, everything else defaults to NOUN.

    `lexicon` maps specific tokens to tags and wins over every rule.
    """

    def __init__(self, lexicon=None, function_words=DEFAULT_STOPWORDS):
        self.lexicon = dict(lexicon or {})
        self.function_words = function_words

    def tag(self, tokens: list[str]) -> list[str]:
        tags = []
        for tok in tokens:
            if tok in self.lexicon:
                tags.append(self.lexicon[tok])
            elif tok in self.function_words:
                tags.append("OTHER")
            elif tok in _DEFAULT_ADJ:
                tags.append("ADJ")
            elif tok not in _NOUN_EXCEPTIONS and tok.endswith(_ADJ_SUFFIXES):
                tags.append("ADJ")
            else:
                tags.append("NOUN")
        return tags


class WhitespaceChunker:
    """Fallback tagger: stop words separate chunks, all other tokens are
    nouns.  Crude, but never wrong about what is *not* a candidate."""

    def __init__(self, stopwords=DEFAULT_STOPWORDS):
        self.stopwords = stopwords

    def tag(self, tokens: list[str]) -> list[str]:
        return ["OTHER" if t in self.stopwords else "NOUN" for t in tokens]


@dataclass(frozen=True)
class Chunk:
    tokens: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]  # per-token char offsets


_CHUNK_RE = re.compile(r"A*N+")
_TAG_CHAR = {"ADJ": "A", "NOUN": "N"}


def extract_candidate_terms(text: str, tagger) -> list[Chunk]:
    """Maximal (ADJ)*(NOUN)+ runs per sentence, leftmost-first."""
    chunks: list[Chunk] = []
    for sentence in tokenize_sentences(text):
        tokens = [t[0] for t in sentence]
        tags = tagger.tag(tokens)
        if not isinstance(tags, list) or len(tags) != len(tokens):
            raise TaggerError(
                f"tagger returned {len(tags) if isinstance(tags, list) else type(tags)}"
                f" tags for {len(tokens)} tokens"
            )
        tag_string = "".join(_TAG_CHAR.get(t, "O") for t in tags)
        for m in _CHUNK_RE.finditer(tag_string):
            window = sentence[m.start() : m.end()]
            chunks.append(
                Chunk(
                    tokens=tuple(t[0] for t in window),
                    spans=tuple((t[1], t[2]) for t in window),
                )
            )
    return chunks


def chunk_ngrams(chunk: Chunk, max_n: int = 3):
    """Decompose a chunk into 1..max_n-grams with character spans."""
    out = []
    for i in range(len(chunk.tokens)):
        for n in range(1, max_n + 1):
            if i + n > len(chunk.tokens):
                break
            out.append(
                (
                    chunk.tokens[i : i + n],
                    (chunk.spans[i][0], chunk.spans[i + n - 1][1]),
                )
            )
    return out

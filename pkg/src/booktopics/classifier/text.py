"""Tokenization, n-gram extraction, and string similarity.

Tokens are maximal runs of letters/digits with interior hyphens kept
("e-learning" is one token).  Sentence punctuation (. ! ?) between tokens
breaks contiguity, so no n-gram ever crosses a sentence boundary.  Stop
words are removed before n-grams are taken: in "the semantic web" the
surviving tokens "semantic web" still form a bigram.
"""

from __future__ import annotations

import re

from ..ontology import normalize_label

# Function words plus a few tokenization artifacts (single letters from
# abbreviations and possessives).
DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again against all also am an and any are as at be
    because been before being below between both but by can cannot could did
    do does doing down during each either few for from further had has have
    having he her here hers herself him himself his how however i if in into
    is it its itself just may me might more most must my myself neither no
    nor not now of off on once only onto or other our ours ourselves out over
    own per same shall she should since so some such than that the their
    theirs them themselves then there therefore these they this those through
    thus to too toward towards under until up upon very via was we were what
    when where whether which while who whom why will with within without
    would you your yours yourself yourselves et al e g s t
    """.split()
)

_TOKEN_RE = re.compile(r"[^\W_]+(?:-+[^\W_]+)*", re.UNICODE)
_SENTENCE_BREAK = re.compile(r"[.!?]")


def tokenize_sentences(text: str) -> list[list[tuple[str, int, int]]]:
    """Split text into sentences of (token, start, end) triples.

    Offsets index the original string; token text is lowercased.
    """
    sentences: list[list[tuple[str, int, int]]] = []
    current: list[tuple[str, int, int]] = []
    prev_end = 0
    for match in _TOKEN_RE.finditer(text):
        if current and _SENTENCE_BREAK.search(text[prev_end : match.start()]):
            sentences.append(current)
            current = []
        current.append((match.group(0).lower(), match.start(), match.end()))
        prev_end = match.end()
    if current:
        sentences.append(current)
    return sentences


def extract_ngrams(
    text: str, stopwords: frozenset = DEFAULT_STOPWORDS, max_n: int = 3
) -> list[tuple[tuple[str, ...], tuple[int, int]]]:
    """All 1..max_n-grams of non-stopword tokens, with character spans.

    The span of an n-gram runs from the start of its first token to the end
    of its last one, so removed stop words may sit inside a span but never
    at its edges.
    """
    out: list[tuple[tuple[str, ...], tuple[int, int]]] = []
    for sentence in tokenize_sentences(text):
        kept = [tok for tok in sentence if tok[0] not in stopwords]
        for i in range(len(kept)):
            for n in range(1, max_n + 1):
                if i + n > len(kept):
                    break
                window = kept[i : i + n]
                tokens = tuple(t[0] for t in window)
                out.append((tokens, (window[0][1], window[-1][2])))
    return out


def levenshtein_sim(a: str, b: str) -> float:
    """1 - editDistance/maxLen over the normalized strings; 1.0 for two
    empty strings."""
    a, b = normalize_label(a), normalize_label(b)
    if a == b:
        return 1.0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return 1.0 - prev[len(b)] / len(a)

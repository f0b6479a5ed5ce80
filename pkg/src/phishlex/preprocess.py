"""Text normalization: tokenizing, case folding, stopword removal, lemmatizing.

Two recipes exist. ``Recipe.SEMANTIC`` lemmatizes tokens after stopword
removal; ``Recipe.TFIDF`` leaves surface forms intact. Both lowercase and
keep only alphanumeric runs.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from itertools import groupby

from .errors import IoError


class Recipe(Enum):
    SEMANTIC = "semantic"
    TFIDF = "tfidf"


# Versioned builtin stopword list: the classic 127-word English set. Pinned
# verbatim so extraction runs are reproducible; override with a stopword file
# when a different set is needed.
BUILTIN_STOPWORDS: tuple[str, ...] = (
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves",
    "he", "him", "his", "himself", "she", "her", "hers", "herself",
    "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
    "what", "which", "who", "whom", "this", "that", "these", "those",
    "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing",
    "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before",
    "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all",
    "any", "both", "each", "few", "more", "most", "other", "some",
    "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "should", "now",
)


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    source: str

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def builtin(cls) -> "StopwordList":
        return cls(words=frozenset(BUILTIN_STOPWORDS), source="builtin")

    @classmethod
    def empty(cls) -> "StopwordList":
        return cls(words=frozenset(), source="empty")

    @classmethod
    def of(cls, words: Iterable[str]) -> "StopwordList":
        return cls(words=frozenset(w.lower() for w in words), source="inline")

    @classmethod
    def from_file(cls, path: str) -> "StopwordList":
        """One word per line; ``#`` comments and blank lines are ignored."""
        try:
            with open(path, "r", encoding="utf-8") as handle:
                lines = handle.readlines()
        except OSError as exc:
            raise IoError(f"cannot read stopword file {path}: {exc}") from exc
        words = set()
        for line in lines:
            entry = line.split("#", 1)[0].strip()
            if entry:
                words.add(entry.lower())
        return cls(words=frozenset(words), source=path)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    recipe: Recipe

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def tokenize(text: str) -> list[str]:
    """Split ``text`` into maximal alphanumeric runs, case preserved."""
    return ["".join(run) for is_word, run in groupby(text, key=str.isalnum) if is_word]


_VOWELS = "aeiou"
_MIN_STEM = 3


def _undouble(stem: str) -> str:
    # 's' is kept doubled so s-stripping rules never re-fire on the result.
    last = stem[-1] if stem else ""
    if (
        len(stem) >= 2
        and stem[-2] == last
        and "a" <= last <= "z"
        and last not in _VOWELS
        and last != "s"
    ):
        return stem[:-1]
    return stem


def _guarded(original: str, candidate: str) -> str:
    return candidate if len(candidate) >= _MIN_STEM else original


def lemmatize(token: str) -> str:
    """Apply the fixed suffix-rule table once (longest matching rule first).

    Rules, in order: -sses to -ss, -ies to -y, -ing stripped, -ed stripped
    (both with a doubled-consonant drop), -es stripped, -s stripped unless
    preceded by s. A rule whose result would be shorter than three characters
    leaves the token unchanged. This is a deterministic approximation of
    dictionary lemmatization, not a replacement for one.
    """
    if token.endswith("sses"):
        return _guarded(token, token[:-4] + "ss")
    if token.endswith("ies"):
        return _guarded(token, token[:-3] + "y")
    if token.endswith("ing"):
        return _guarded(token, _undouble(token[:-3]))
    if token.endswith("ed"):
        return _guarded(token, _undouble(token[:-2]))
    if token.endswith("es"):
        return _guarded(token, token[:-2])
    if token.endswith("s") and not token.endswith("ss"):
        return _guarded(token, token[:-1])
    return token


def _lemmatize_stable(token: str) -> str:
    # Iterate to a fixed point so preprocessing is idempotent on its output.
    while True:
        reduced = lemmatize(token)
        if reduced == token:
            return token
        token = reduced


def preprocess(text: str, recipe: Recipe, stopwords: StopwordList) -> TokenSequence:
    """Normalize ``text`` into a token sequence under ``recipe``.

    Pipeline: tokenize, lowercase, drop stopwords, then (semantic recipe only)
    lemmatize with a post-filter so no lemma can reintroduce a stopword.
    Order and duplicates are preserved.
    """
    out: list[str] = []
    for raw in tokenize(text):
        lowered = raw.lower()
        # Rarely, lowercasing introduces non-alphanumerics (e.g. combining
        # marks); re-splitting keeps the alphanumeric closure intact.
        pieces = [lowered] if lowered.isalnum() else tokenize(lowered)
        for token in pieces:
            if token in stopwords:
                continue
            if recipe is Recipe.SEMANTIC:
                token = _lemmatize_stable(token)
                if token in stopwords:
                    continue
            out.append(token)
    return TokenSequence(tokens=tuple(out), recipe=recipe)


def unique_vocabulary(corpus, recipe: Recipe, stopwords: StopwordList) -> list[str]:
    """Sorted set of all tokens the corpus produces under ``recipe``."""
    seen: set[str] = set()
    for record in corpus.records:
        seen.update(preprocess(record.text, recipe, stopwords).tokens)
    return sorted(seen)

"""Keyword list construction from a phishing corpus.

Two methods: TF-IDF ranking of surface terms, and clustering of word
embeddings where each cluster contributes its most central token. Both are
deterministic given their inputs and seed, and both record provenance
(method, parameters, corpus fingerprint) alongside the keywords.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus_io import Corpus
from .embedding import EmbeddingProvider, cosine_similarity
from .errors import (
    DimensionMismatch,
    EmptyCorpus,
    NoEmbeddableVocabulary,
    SchemaViolation,
    TooFewVectors,
    UnsupportedVersion,
)
from .fileio import atomic_write_text, dumps_canonical, read_text
from .preprocess import Recipe, StopwordList, preprocess, unique_vocabulary

KEYWORD_FORMAT_VERSION = 1


class Method(Enum):
    SEMANTIC = "semantic"
    TFIDF = "tfidf"


@dataclass(frozen=True)
class ExtractionParams:
    """Knobs that influenced an extraction run."""

    seed: int | None = None
    dim: int | None = None
    recipe: Recipe = Recipe.TFIDF
    single_doc: bool = False


@dataclass(frozen=True)
class KeywordList:
    keywords: tuple[str, ...]
    method: Method
    n: int
    corpus_fingerprint: int
    params: ExtractionParams

    def __post_init__(self):
        if len(set(self.keywords)) != len(self.keywords):
            raise ValueError("keyword list contains duplicates")
        if self.n < 1:
            raise ValueError("requested keyword count must be positive")

    def __len__(self) -> int:
        return len(self.keywords)


@dataclass(frozen=True)
class TfidfScore:
    term: str
    score: float


@dataclass(frozen=True)
class ClusterAssignment:
    centroids: np.ndarray  # shape (k, dim)
    membership: dict[str, int]
    representatives: tuple[str, ...]


def tfidf_scores(corpus: Corpus, stopwords: StopwordList, single_doc: bool = False) -> list[TfidfScore]:
    """Corpus-wide TF-IDF score per term, each email one document.

    score(t) = sum over documents of tf(t, d) * idf(t), with raw-count tf and
    smoothed idf(t) = ln((1 + N) / (1 + df(t))) + 1. ``single_doc=True``
    instead fixes idf = 1, reproducing plain frequency ranking over the
    corpus treated as one document. Results are sorted by score descending,
    ties broken alphabetically.
    """
    if not corpus.records:
        raise EmptyCorpus("tfidf scoring")
    term_freq: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    n_docs = len(corpus.records)
    for record in corpus.records:
        tokens = preprocess(record.text, Recipe.TFIDF, stopwords).tokens
        term_freq.update(tokens)
        doc_freq.update(set(tokens))
    scores = []
    for term, tf_total in term_freq.items():
        if single_doc:
            idf = 1.0
        else:
            idf = math.log((1 + n_docs) / (1 + doc_freq[term])) + 1.0
        scores.append(TfidfScore(term=term, score=tf_total * idf))
    scores.sort(key=lambda s: (-s.score, s.term))
    return scores


def extract_keywords_tfidf(
    corpus: Corpus,
    n: int,
    stopwords: StopwordList,
    single_doc: bool = False,
) -> KeywordList:
    """Top ``n`` terms by TF-IDF score (fewer when the vocabulary is smaller)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    ranked = tfidf_scores(corpus, stopwords, single_doc=single_doc)
    return KeywordList(
        keywords=tuple(s.term for s in ranked[:n]),
        method=Method.TFIDF,
        n=n,
        corpus_fingerprint=corpus.source_fingerprint,
        params=ExtractionParams(recipe=Recipe.TFIDF, single_doc=single_doc),
    )


def _nearest(points: np.ndarray, centroids: np.ndarray, current: np.ndarray | None = None) -> np.ndarray:
    # Squared Euclidean distances; ties resolve to the lowest cluster index,
    # except that a point exactly tied with its current cluster stays put
    # (keeps reseeded clusters from collapsing when points coincide).
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    nearest = d2.argmin(axis=1)
    if current is not None:
        rows = np.arange(len(points))
        keep = d2[rows, current] == d2[rows, nearest]
        nearest[keep] = current[keep]
    return nearest


def _reseed_empty_clusters(points: np.ndarray, centroids: np.ndarray, assign: np.ndarray, k: int) -> None:
    """Give every empty cluster the farthest movable point (in place).

    Only points whose cluster keeps another member are movable, so each
    reseed strictly grows the number of occupied clusters and terminates.
    """
    while True:
        counts = np.bincount(assign, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return
        j = int(empty[0])
        dist = ((points - centroids[assign]) ** 2).sum(axis=1)
        movable = counts[assign] > 1
        dist[~movable] = -1.0
        p = int(dist.argmax())
        centroids[j] = points[p]
        assign[p] = j


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, ((points - points[idx]) ** 2).sum(axis=1))
    return points[chosen].copy()


_KMEANS_RESTARTS = 10


def _lloyd(points: np.ndarray, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One k-means++ initialization plus Lloyd iterations to a fixed point."""
    centroids = _kmeans_pp_init(points, k, rng)
    assign = _nearest(points, centroids)
    converged = False
    for _ in range(100):
        _reseed_empty_clusters(points, centroids, assign, k)
        new_centroids = np.empty_like(centroids)
        for j in range(k):
            new_centroids[j] = points[assign == j].mean(axis=0)
        centroids = new_centroids
        new_assign = _nearest(points, centroids, current=assign)
        if np.array_equal(new_assign, assign):
            converged = True
            break
        assign = new_assign
    if not converged:
        # Iteration cap hit; keep centroids consistent with the final assignment.
        for j in range(k):
            centroids[j] = points[assign == j].mean(axis=0)
    return centroids, assign


def kmeans(vectors: Sequence[tuple[str, np.ndarray]], k: int, seed: int) -> ClusterAssignment:
    """Seeded k-means over labeled vectors.

    Runs 10 k-means++ restarts with seeds derived deterministically from
    ``seed`` and keeps the clustering with the lowest within-cluster sum of
    squares. Each restart iterates Lloyd steps until the assignment stops
    changing (a true fixed point: every token sits with its nearest centroid
    and every centroid is the mean of its members) or 100 iterations,
    reseeding clusters that empty out with the farthest movable point. Each
    cluster's representative is the member closest to the centroid, ties
    broken by the lexicographically smallest token.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > len(vectors):
        raise TooFewVectors(len(vectors), k)
    tokens = [t for t, _ in vectors]
    dims = {int(np.asarray(v).shape[0]) for _, v in vectors}
    if len(dims) > 1:
        a, b = sorted(dims)[:2]
        raise DimensionMismatch(a, b)
    points = np.stack([np.asarray(v, dtype=np.float64) for _, v in vectors])

    master = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    centroids = assign = None
    best_wcss = math.inf
    for _ in range(_KMEANS_RESTARTS):
        rng = np.random.default_rng(int(master.integers(2**63)))
        cand_centroids, cand_assign = _lloyd(points, k, rng)
        wcss = float(((points - cand_centroids[cand_assign]) ** 2).sum())
        if wcss < best_wcss:
            best_wcss = wcss
            centroids, assign = cand_centroids, cand_assign

    representatives = []
    for j in range(k):
        members = [(float(((points[i] - centroids[j]) ** 2).sum()), tokens[i])
                   for i in range(len(tokens)) if assign[i] == j]
        best = min(d2 for d2, _ in members)
        # Distances within float-rounding noise count as ties, so the
        # lexicographic tie-break is stable across arithmetic orderings.
        cutoff = best + best * 1e-9 + 1e-18
        representatives.append(min(t for d2, t in members if d2 <= cutoff))
    membership = {tokens[i]: int(assign[i]) for i in range(len(tokens))}
    return ClusterAssignment(
        centroids=centroids,
        membership=membership,
        representatives=tuple(representatives),
    )


def extract_keywords_semantic(
    corpus: Corpus,
    n: int,
    provider: EmbeddingProvider,
    stopwords: StopwordList,
    seed: int,
) -> KeywordList:
    """Cluster the corpus vocabulary's embeddings and keep one token per cluster.

    The cluster count is ``min(n, embeddable vocabulary size)``; keywords come
    out ordered by cluster index. Vocabulary words the provider cannot embed
    are dropped; if none remain the extraction fails.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not corpus.records:
        raise EmptyCorpus("semantic keyword extraction")
    vocabulary = unique_vocabulary(corpus, Recipe.SEMANTIC, stopwords)
    embeddable = [(t, v) for t in vocabulary if (v := provider.embed_token(t)) is not None]
    if not embeddable:
        raise NoEmbeddableVocabulary()
    k = min(n, len(embeddable))
    assignment = kmeans(embeddable, k, seed)
    return KeywordList(
        keywords=assignment.representatives,
        method=Method.SEMANTIC,
        n=n,
        corpus_fingerprint=corpus.source_fingerprint,
        params=ExtractionParams(seed=seed, dim=provider.dim, recipe=Recipe.SEMANTIC),
    )


def keyword_similarity_matrix(kw: KeywordList, provider: EmbeddingProvider) -> np.ndarray:
    """Pairwise cosine similarity between keyword embeddings.

    Out-of-vocabulary keywords contribute zero rows/columns; the diagonal is
    1 for embeddable keywords and 0 for out-of-vocabulary ones. The matrix is
    exactly symmetric.
    """
    if not kw.keywords:
        raise ValueError("keyword list is empty")
    size = len(kw.keywords)
    vectors = [provider.embed_token(t) for t in kw.keywords]
    matrix = np.zeros((size, size))
    for i in range(size):
        matrix[i, i] = 1.0 if vectors[i] is not None else 0.0
        for j in range(i + 1, size):
            if vectors[i] is None or vectors[j] is None:
                value = 0.0
            else:
                value = cosine_similarity(vectors[i], vectors[j])
            matrix[i, j] = value
            matrix[j, i] = value
    return matrix


def save_keywords(kw: KeywordList, path: str) -> None:
    """Write a keyword list with provenance as canonical JSON."""
    document = {
        "format_version": KEYWORD_FORMAT_VERSION,
        "method": kw.method.value,
        "n": kw.n,
        "keywords": list(kw.keywords),
        "corpus_fingerprint": kw.corpus_fingerprint,
        "params": {
            "seed": kw.params.seed,
            "dim": kw.params.dim,
            "recipe": kw.params.recipe.value,
            "single_doc": kw.params.single_doc,
        },
    }
    atomic_write_text(path, dumps_canonical(document) + "\n")


def load_keywords(path: str) -> KeywordList:
    """Read a keyword file, validating schema and version."""
    text = read_text(path)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SchemaViolation("top-level value must be an object")
    version = document.get("format_version")
    if version != KEYWORD_FORMAT_VERSION:
        raise UnsupportedVersion(version)
    try:
        method = Method(document["method"])
        keywords = document["keywords"]
        n = document["n"]
        fingerprint = document["corpus_fingerprint"]
        params_doc = document["params"]
        params = ExtractionParams(
            seed=params_doc.get("seed"),
            dim=params_doc.get("dim"),
            recipe=Recipe(params_doc["recipe"]),
            single_doc=bool(params_doc.get("single_doc", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(str(exc)) from exc
    if not isinstance(keywords, list) or not all(isinstance(t, str) for t in keywords):
        raise SchemaViolation("keywords must be a list of strings")
    if not isinstance(n, int) or not isinstance(fingerprint, int):
        raise SchemaViolation("n and corpus_fingerprint must be integers")
    return KeywordList(
        keywords=tuple(keywords),
        method=method,
        n=n,
        corpus_fingerprint=fingerprint,
        params=params,
    )

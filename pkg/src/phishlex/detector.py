"""Email scoring against a keyword list, threshold calibration, classification.

A calibrated detector is a :class:`DetectorModel`: keywords, a decision
threshold, an aggregation mode, and the identity of the embedding provider
the threshold was calibrated under. Models persist as canonical JSON and
refuse to run against a different provider, because a threshold only means
something inside the embedding space that produced it.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .corpus_io import Corpus, Label, require_fully_labeled
from .embedding import (
    KIND_HASH,
    KIND_WORD_VECTORS,
    EmbedderConfig,
    EmbeddingProvider,
    cosine_similarity,
    embed_sentence,
)
from .errors import (
    EmptyCorpus,
    EmptyKeywordList,
    MissingClass,
    ProviderFingerprintMissing,
    ProviderMismatch,
    SchemaViolation,
    UnsupportedVersion,
)
from .fileio import atomic_write_text, dumps_canonical, quantize_float, read_text
from .keyword_extraction import KeywordList, Method
from .preprocess import Recipe, StopwordList, preprocess

MODEL_FORMAT_VERSION = 1


class Aggregation(Enum):
    JOINED = "joined"
    MAX_PER_KEYWORD = "max"
    MEAN_PER_KEYWORD = "mean"


@dataclass(frozen=True)
class DetectorModel:
    """The persisted, reloadable unit of the system.

    ``threshold`` is stored at 9 significant digits, the same precision the
    on-disk format carries, so save/load round-trips are exact.
    """

    keywords: tuple[str, ...]
    method: Method
    corpus_fingerprint: int
    threshold: float
    aggregation: Aggregation
    embedder: EmbedderConfig
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("model requires a non-empty keyword list")
        if not math.isfinite(self.threshold) or not -1.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be finite in [-1, 1], got {self.threshold}")
        if self.format_version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {self.format_version}")
        object.__setattr__(self, "threshold", quantize_float(self.threshold))
        object.__setattr__(self, "keywords", tuple(self.keywords))


@dataclass(frozen=True)
class ScoredEmail:
    id: int
    score: float
    verdict: Label


@dataclass(frozen=True)
class CalibrationResult:
    threshold: float
    accuracy_at_threshold: float
    score_table: tuple[tuple[int, float, Label], ...]


def score_email(
    keywords: Sequence[str],
    aggregation: Aggregation,
    provider: EmbeddingProvider,
    text: str,
    stopwords: StopwordList,
) -> float:
    """Similarity in [-1, 1] between an email and the keyword list.

    The email is preprocessed under the semantic recipe and mean-pooled into
    one vector. ``JOINED`` compares it against the keywords embedded as one
    pseudo-sentence; the per-keyword modes take the max or mean of the
    cosines against each keyword's own vector, with out-of-vocabulary
    keywords contributing 0.
    """
    if not keywords:
        raise EmptyKeywordList()
    tokens = preprocess(text, Recipe.SEMANTIC, stopwords).tokens
    email_vec = embed_sentence(provider, tokens)
    if aggregation is Aggregation.JOINED:
        keyword_vec = embed_sentence(provider, keywords)
        score = cosine_similarity(email_vec, keyword_vec)
    else:
        sims = []
        for keyword in keywords:
            vec = provider.embed_token(keyword)
            sims.append(0.0 if vec is None else cosine_similarity(email_vec, vec))
        score = max(sims) if aggregation is Aggregation.MAX_PER_KEYWORD else sum(sims) / len(sims)
    return min(1.0, max(-1.0, score))


def find_best_threshold(scored: Sequence[tuple[float, Label]]) -> tuple[float, float]:
    """Pick the threshold maximizing strict-greater-rule accuracy.

    Accuracy as a function of the threshold only changes at the observed
    scores, so candidates are the midpoints between consecutive distinct
    sorted scores plus one value below the minimum and one above the maximum
    (offset 1e-6). The search is exhaustive; ties go to the smallest
    candidate. Returns (threshold, accuracy).
    """
    if not scored:
        raise ValueError("cannot calibrate on an empty score set")
    values = sorted({score for score, _ in scored})
    candidates = [values[0] - 1e-6]
    candidates.extend((a + b) / 2.0 for a, b in zip(values, values[1:]))
    candidates.append(values[-1] + 1e-6)
    candidates.sort()

    total = len(scored)
    best_threshold = candidates[0]
    best_correct = -1
    for candidate in candidates:
        correct = sum(
            1
            for score, label in scored
            if (score > candidate) == (label is Label.PHISHING)
        )
        if correct > best_correct:
            best_correct = correct
            best_threshold = candidate
    return best_threshold, best_correct / total


def calibrate_threshold(
    kw: KeywordList,
    aggregation: Aggregation,
    provider: EmbeddingProvider,
    calib: Corpus,
    stopwords: StopwordList,
) -> CalibrationResult:
    """Score a fully labeled corpus and choose the best decision threshold."""
    if not kw.keywords:
        raise EmptyKeywordList()
    if not calib.records:
        raise EmptyCorpus("calibration")
    require_fully_labeled(calib)
    for label in (Label.PHISHING, Label.SAFE):
        if calib.label_counts.get(label, 0) == 0:
            raise MissingClass(label.value)

    table = []
    for record in calib.records:
        score = score_email(kw.keywords, aggregation, provider, record.text, stopwords)
        table.append((record.id, score, record.label))
    threshold, accuracy = find_best_threshold([(s, l) for _, s, l in table])
    return CalibrationResult(
        threshold=threshold,
        accuracy_at_threshold=accuracy,
        score_table=tuple(table),
    )


def _check_provider(model: DetectorModel, provider: EmbeddingProvider) -> None:
    expected = model.embedder
    actual = provider.config()
    if expected != actual:
        raise ProviderMismatch(f"model expects {expected}, provider is {actual}")


def classify(
    model: DetectorModel,
    provider: EmbeddingProvider,
    emails: Corpus,
    stopwords: StopwordList,
) -> list[ScoredEmail]:
    """Score every record; verdict is phishing iff score strictly exceeds the threshold."""
    _check_provider(model, provider)
    results = []
    for record in emails.records:
        score = score_email(model.keywords, model.aggregation, provider, record.text, stopwords)
        verdict = Label.PHISHING if score > model.threshold else Label.SAFE
        results.append(ScoredEmail(id=record.id, score=score, verdict=verdict))
    return results


def build_model(
    kw: KeywordList,
    calibration: CalibrationResult,
    aggregation: Aggregation,
    provider: EmbeddingProvider,
) -> DetectorModel:
    """Assemble the persistable model out of a calibration run."""
    # The extreme candidates sit 1e-6 outside the observed scores and can
    # leave [-1, 1] when a score touches the boundary; clamp for the model.
    threshold = min(1.0, max(-1.0, calibration.threshold))
    return DetectorModel(
        keywords=kw.keywords,
        method=kw.method,
        corpus_fingerprint=kw.corpus_fingerprint,
        threshold=threshold,
        aggregation=aggregation,
        embedder=provider.config(),
    )


def save_model(model: DetectorModel, path: str) -> None:
    """Write the model as canonical JSON (identical models, identical bytes)."""
    atomic_write_text(path, serialize_model(model) + "\n")


def serialize_model(model: DetectorModel) -> str:
    embedder: dict[str, object] = {"kind": model.embedder.kind, "dim": model.embedder.dim}
    if model.embedder.kind == KIND_HASH:
        embedder["seed"] = model.embedder.seed
    else:
        embedder["file_fingerprint"] = model.embedder.file_fingerprint
    document = {
        "format_version": model.format_version,
        "method": model.method.value,
        "keywords": list(model.keywords),
        "threshold": model.threshold,
        "aggregation": model.aggregation.value,
        "embedder": embedder,
        "corpus_fingerprint": model.corpus_fingerprint,
    }
    return dumps_canonical(document)


def load_model(path: str) -> DetectorModel:
    """Read and validate a model file; reject unknown versions and bad schemas."""
    text = read_text(path)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SchemaViolation("top-level value must be an object")

    version = document.get("format_version")
    if version is None:
        raise SchemaViolation("missing field 'format_version'")
    if version != MODEL_FORMAT_VERSION:
        raise UnsupportedVersion(version)

    for field_name in ("method", "keywords", "threshold", "aggregation", "embedder", "corpus_fingerprint"):
        if field_name not in document:
            raise SchemaViolation(f"missing field {field_name!r}")

    keywords = document["keywords"]
    if not isinstance(keywords, list) or not keywords or not all(isinstance(t, str) for t in keywords):
        raise SchemaViolation("keywords must be a non-empty list of strings")
    threshold = document["threshold"]
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
        raise SchemaViolation("threshold must be a number")
    threshold = float(threshold)
    if not math.isfinite(threshold) or not -1.0 <= threshold <= 1.0:
        raise SchemaViolation(f"threshold out of range: {threshold}")
    try:
        method = Method(document["method"])
        aggregation = Aggregation(document["aggregation"])
    except ValueError as exc:
        raise SchemaViolation(str(exc)) from exc
    fingerprint = document["corpus_fingerprint"]
    if isinstance(fingerprint, bool) or not isinstance(fingerprint, int):
        raise SchemaViolation("corpus_fingerprint must be an integer")

    embedder_doc = document["embedder"]
    if not isinstance(embedder_doc, dict):
        raise SchemaViolation("embedder must be an object")
    kind = embedder_doc.get("kind")
    if kind not in (KIND_HASH, KIND_WORD_VECTORS):
        raise SchemaViolation(f"unknown embedder kind: {kind!r}")
    dim = embedder_doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SchemaViolation("embedder dim must be a positive integer")
    if kind == KIND_HASH:
        seed = embedder_doc.get("seed")
        if seed is None:
            raise ProviderFingerprintMissing(kind)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise SchemaViolation("embedder seed must be an integer")
        embedder = EmbedderConfig(kind=kind, dim=dim, seed=seed)
    else:
        file_fingerprint = embedder_doc.get("file_fingerprint")
        if file_fingerprint is None:
            raise ProviderFingerprintMissing(kind)
        if isinstance(file_fingerprint, bool) or not isinstance(file_fingerprint, int):
            raise SchemaViolation("embedder file_fingerprint must be an integer")
        embedder = EmbedderConfig(kind=kind, dim=dim, file_fingerprint=file_fingerprint)

    return DetectorModel(
        keywords=tuple(keywords),
        method=method,
        corpus_fingerprint=fingerprint,
        threshold=threshold,
        aggregation=aggregation,
        embedder=embedder,
    )

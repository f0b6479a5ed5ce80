"""Token and sentence embeddings behind a pluggable provider interface.

Two providers ship with the package: a loader for pretrained word-vector
text files (``token f1 f2 ...`` per line) and a seeded hash embedder that
derives a deterministic unit vector from each token, useful for hermetic
tests and experiments with no external data. Sentence embeddings are the
L2-normalized mean of the available token vectors.
"""

from __future__ import annotations

import hashlib
import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyFile, InconsistentDim, IoError, UnparsableFloat
from .fileio import fnv1a_64

KIND_HASH = "hash"
KIND_WORD_VECTORS = "word_vectors"

_U64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class EmbedderConfig:
    """Identity of a provider: enough to rebuild or verify one."""

    kind: str
    dim: int
    seed: int | None = None
    file_fingerprint: int | None = None


class EmbeddingProvider(ABC):
    """Maps tokens to fixed-dimension vectors, deterministically."""

    dim: int

    @abstractmethod
    def embed_token(self, token: str) -> np.ndarray | None:
        """Vector for ``token``, or None when out of vocabulary."""

    @abstractmethod
    def config(self) -> EmbedderConfig:
        """Descriptor used to match a persisted model against a provider."""


class HashEmbedder(EmbeddingProvider):
    """Deterministic pseudo-random unit vectors keyed on (seed, token bytes).

    Every token is in vocabulary. The same (seed, dim, token) always yields
    the identical vector, across calls, runs, and machines.
    """

    def __init__(self, dim: int = 64, seed: int = 42):
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self.seed = seed & _U64
        self._key = self.seed.to_bytes(8, "big")
        self._cache: dict[str, np.ndarray] = {}

    def embed_token(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=self._key)
        rng = np.random.default_rng(int.from_bytes(digest.digest(), "big"))
        vec = rng.standard_normal(self.dim)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:  # unreachable in practice, keeps the unit-norm contract
            vec[0] = 1.0
            norm = 1.0
        vec /= norm
        vec.setflags(write=False)
        self._cache[token] = vec
        return vec

    def config(self) -> EmbedderConfig:
        return EmbedderConfig(kind=KIND_HASH, dim=self.dim, seed=self.seed)


class WordVectorEmbedder(EmbeddingProvider):
    """Provider backed by a pretrained word-vector text file."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int, fingerprint: int):
        self.dim = dim
        self.fingerprint = fingerprint
        self._vectors = vectors

    def embed_token(self, token: str) -> np.ndarray | None:
        return self._vectors.get(token)

    def config(self) -> EmbedderConfig:
        return EmbedderConfig(kind=KIND_WORD_VECTORS, dim=self.dim, file_fingerprint=self.fingerprint)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)


def load_word_vectors(path: str) -> WordVectorEmbedder:
    """Parse a ``token float float ...`` file into a provider.

    Every line must carry the same number of floats; later duplicates of a
    token win. Blank lines are ignored. The file fingerprint is a 64-bit hash
    of the raw bytes.
    """
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise IoError(f"cannot read word vectors {path}: {exc}") from exc

    fingerprint = fnv1a_64(raw)
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    for line_no, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) < 2:
            raise InconsistentDim(line_no)
        token = fields[0]
        if dim is None:
            dim = len(fields) - 1
        elif len(fields) - 1 != dim:
            raise InconsistentDim(line_no)
        try:
            values = [float(f) for f in fields[1:]]
        except ValueError:
            raise UnparsableFloat(line_no) from None
        if not all(math.isfinite(v) for v in values):
            raise UnparsableFloat(line_no)
        vec = np.asarray(values, dtype=np.float64)
        vec.setflags(write=False)
        vectors[token] = vec
    if dim is None:
        raise EmptyFile(path)
    return WordVectorEmbedder(vectors=vectors, dim=dim, fingerprint=fingerprint)


def embed_sentence(provider: EmbeddingProvider, tokens: Sequence[str]) -> np.ndarray:
    """Mean of the in-vocabulary token vectors, L2-normalized.

    Empty input, all-out-of-vocabulary input, and exact cancellation all
    return the zero vector, which scores 0 against everything.
    """
    found = [v for t in tokens if (v := provider.embed_token(t)) is not None]
    if not found:
        return np.zeros(provider.dim)
    mean = np.mean(found, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        return np.zeros(provider.dim)
    return mean / norm


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between ``a`` and ``b``, clamped to [-1, 1].

    Zero-norm inputs score 0 by definition so every score is comparable.
    """
    if a.shape != b.shape:
        raise DimensionMismatch(int(a.shape[0]), int(b.shape[0]))
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    value = float(np.dot(a, b)) / (norm_a * norm_b)
    return min(1.0, max(-1.0, value))

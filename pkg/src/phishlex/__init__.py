"""Keyword-based phishing email detection.

The pipeline has three phases: extract keywords from a phishing corpus
(TF-IDF ranking or embedding clustering), calibrate a cosine-similarity
decision threshold on a labeled corpus, and classify unseen emails against
the calibrated model. An evaluation harness reports confusion counts and
runs accuracy sweeps over keyword counts.
"""

__version__ = "0.1.0"

from .corpus_io import (
    Corpus,
    EmailRecord,
    Label,
    decode_label,
    load_corpus,
    make_corpus,
    split_corpus,
)
from .detector import (
    Aggregation,
    CalibrationResult,
    DetectorModel,
    ScoredEmail,
    build_model,
    calibrate_threshold,
    classify,
    find_best_threshold,
    load_model,
    save_model,
    score_email,
)
from .embedding import (
    EmbedderConfig,
    EmbeddingProvider,
    HashEmbedder,
    WordVectorEmbedder,
    cosine_similarity,
    embed_sentence,
    load_word_vectors,
)
from .errors import PhishlexError
from .evaluation import EvalReport, SweepResult, SweepRow, emit_report, evaluate, sweep
from .keyword_extraction import (
    ClusterAssignment,
    ExtractionParams,
    KeywordList,
    Method,
    TfidfScore,
    extract_keywords_semantic,
    extract_keywords_tfidf,
    keyword_similarity_matrix,
    kmeans,
    load_keywords,
    save_keywords,
    tfidf_scores,
)
from .preprocess import (
    BUILTIN_STOPWORDS,
    Recipe,
    StopwordList,
    TokenSequence,
    lemmatize,
    preprocess,
    tokenize,
    unique_vocabulary,
)

__all__ = [
    "Aggregation",
    "BUILTIN_STOPWORDS",
    "CalibrationResult",
    "ClusterAssignment",
    "Corpus",
    "DetectorModel",
    "EmailRecord",
    "EmbedderConfig",
    "EmbeddingProvider",
    "EvalReport",
    "ExtractionParams",
    "HashEmbedder",
    "KeywordList",
    "Label",
    "Method",
    "PhishlexError",
    "Recipe",
    "ScoredEmail",
    "StopwordList",
    "SweepResult",
    "SweepRow",
    "TfidfScore",
    "TokenSequence",
    "WordVectorEmbedder",
    "build_model",
    "calibrate_threshold",
    "classify",
    "cosine_similarity",
    "decode_label",
    "embed_sentence",
    "emit_report",
    "evaluate",
    "extract_keywords_semantic",
    "extract_keywords_tfidf",
    "find_best_threshold",
    "keyword_similarity_matrix",
    "kmeans",
    "lemmatize",
    "load_corpus",
    "load_keywords",
    "load_model",
    "load_word_vectors",
    "make_corpus",
    "preprocess",
    "save_keywords",
    "save_model",
    "score_email",
    "split_corpus",
    "sweep",
    "tfidf_scores",
    "tokenize",
    "unique_vocabulary",
]

"""Experiment harness: confusion counts, keyword-count sweeps, CSV reports.

Phishing is the positive class everywhere. A sweep runs the full
extract/calibrate/evaluate pipeline once per requested keyword count and is
byte-for-byte reproducible given the same inputs and seed.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .corpus_io import Corpus, Label, require_fully_labeled
from .detector import Aggregation, DetectorModel, build_model, calibrate_threshold, classify
from .embedding import EmbeddingProvider
from .errors import EmptyCorpus
from .fileio import atomic_write_text
from .keyword_extraction import (
    Method,
    extract_keywords_semantic,
    extract_keywords_tfidf,
)
from .preprocess import StopwordList

REPORT_HEADER = "keyword_count,threshold,accuracy,tp,fp,tn,fn"


@dataclass(frozen=True)
class EvalReport:
    true_positive: int
    false_positive: int
    true_negative: int
    false_negative: int
    accuracy: float
    threshold: float
    keyword_count: int
    method: Method

    @property
    def total(self) -> int:
        return self.true_positive + self.false_positive + self.true_negative + self.false_negative


@dataclass(frozen=True)
class SweepRow:
    keyword_count: int  # the requested count for this experiment
    threshold: float
    accuracy: float
    report: EvalReport


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    method: Method
    extraction_fingerprint: int
    eval_fingerprint: int


def evaluate(
    model: DetectorModel,
    provider: EmbeddingProvider,
    test: Corpus,
    stopwords: StopwordList,
) -> EvalReport:
    """Classify a fully labeled corpus and tally the confusion cells."""
    if not test.records:
        raise EmptyCorpus("evaluation")
    require_fully_labeled(test)
    verdicts = classify(model, provider, test, stopwords)
    tp = fp = tn = fn = 0
    for record, scored in zip(test.records, verdicts):
        if record.label is Label.PHISHING:
            if scored.verdict is Label.PHISHING:
                tp += 1
            else:
                fn += 1
        else:
            if scored.verdict is Label.PHISHING:
                fp += 1
            else:
                tn += 1
    total = tp + fp + tn + fn
    return EvalReport(
        true_positive=tp,
        false_positive=fp,
        true_negative=tn,
        false_negative=fn,
        accuracy=(tp + tn) / total,
        threshold=model.threshold,
        keyword_count=len(model.keywords),
        method=model.method,
    )


def sweep(
    extraction: Corpus,
    calib: Corpus,
    test: Corpus,
    method: Method,
    counts: Sequence[int],
    provider: EmbeddingProvider,
    stopwords: StopwordList,
    seed: int,
    aggregation: Aggregation = Aggregation.JOINED,
    single_doc: bool = False,
) -> SweepResult:
    """Run extract, calibrate, evaluate once per keyword count.

    ``counts`` is deduplicated and sorted ascending so the result rows are
    strictly increasing in keyword count. Passing the calibration corpus as
    ``test`` reproduces in-sample evaluation.
    """
    if not counts:
        raise ValueError("counts must be non-empty")
    if any(c < 1 for c in counts):
        raise ValueError("keyword counts must be positive")
    ordered = sorted(set(counts))

    rows = []
    for count in ordered:
        if method is Method.TFIDF:
            kw = extract_keywords_tfidf(extraction, count, stopwords, single_doc=single_doc)
        else:
            kw = extract_keywords_semantic(extraction, count, provider, stopwords, seed)
        calibration = calibrate_threshold(kw, aggregation, provider, calib, stopwords)
        model = build_model(kw, calibration, aggregation, provider)
        report = evaluate(model, provider, test, stopwords)
        rows.append(
            SweepRow(
                keyword_count=count,
                threshold=model.threshold,
                accuracy=report.accuracy,
                report=report,
            )
        )
    return SweepResult(
        rows=tuple(rows),
        method=method,
        extraction_fingerprint=extraction.source_fingerprint,
        eval_fingerprint=test.source_fingerprint,
    )


def _format_row(keyword_count: int, threshold: float, accuracy: float, report: EvalReport) -> str:
    return (
        f"{keyword_count},{threshold:.6f},{accuracy:.6f},"
        f"{report.true_positive},{report.false_positive},"
        f"{report.true_negative},{report.false_negative}"
    )


def render_report(result: EvalReport | SweepResult) -> str:
    lines = [REPORT_HEADER]
    if isinstance(result, EvalReport):
        lines.append(_format_row(result.keyword_count, result.threshold, result.accuracy, result))
    else:
        for row in result.rows:
            lines.append(_format_row(row.keyword_count, row.threshold, row.accuracy, row.report))
    return "\n".join(lines) + "\n"


def emit_report(result: EvalReport | SweepResult, path: str) -> None:
    """Write the report CSV atomically (no partial files on failure)."""
    atomic_write_text(path, render_report(result))

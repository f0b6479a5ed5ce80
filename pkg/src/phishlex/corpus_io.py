"""Loading, validation, and splitting of labeled email CSV datasets.

Expected input is a UTF-8 CSV with a header row, comma delimiter, and
double-quote quoting (quotes escaped by doubling). Each data row becomes one
:class:`EmailRecord`; rows with empty text fail loudly instead of being
skipped so downstream accuracy denominators stay honest.
"""

from __future__ import annotations

import csv
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    EmptyText,
    MalformedCsv,
    MissingColumn,
    TooFewRecords,
    UnlabeledRecord,
    UnparsableLabel,
)
from .fileio import fnv1a_64


class Label(Enum):
    PHISHING = "phishing"
    SAFE = "safe"


_PHISHING_ALIASES = {"1", "phishing", "spam"}
_SAFE_ALIASES = {"0", "safe", "ham", "benign"}

_FINGERPRINT_SEPARATOR = b"\x1f"


def decode_label(raw: str) -> Label:
    """Map a raw CSV label cell onto :class:`Label`.

    Matching is case-insensitive after trimming. Anything outside the fixed
    vocabulary raises so an unexpected encoding can never silently invert
    classes.
    """
    folded = raw.strip().lower()
    if folded in _PHISHING_ALIASES:
        return Label.PHISHING
    if folded in _SAFE_ALIASES:
        return Label.SAFE
    raise UnparsableLabel(-1, raw)


@dataclass(frozen=True)
class EmailRecord:
    """One email: 0-based data-row id, raw body text, optional label."""

    id: int
    text: str
    label: Label | None = None


@dataclass(frozen=True)
class Corpus:
    """An immutable ordered collection of records plus provenance."""

    records: tuple[EmailRecord, ...]
    source_fingerprint: int
    label_counts: dict[Label, int] = field(compare=False)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @classmethod
    def from_records(cls, records: Iterable[EmailRecord]) -> "Corpus":
        recs = tuple(records)
        previous = -1
        for rec in recs:
            if rec.id <= previous:
                raise ValueError("record ids must be unique and strictly increasing")
            previous = rec.id
        counts = {Label.PHISHING: 0, Label.SAFE: 0}
        for rec in recs:
            if rec.label is not None:
                counts[rec.label] += 1
        return cls(records=recs, source_fingerprint=text_fingerprint(r.text for r in recs), label_counts=counts)


def text_fingerprint(texts: Iterable[str]) -> int:
    """FNV-1a 64 over the text fields joined with a 0x1F separator."""
    joined = _FINGERPRINT_SEPARATOR.join(t.encode("utf-8") for t in texts)
    return fnv1a_64(joined)


def load_corpus(path: str, text_column: str = "text", label_column: str | None = "label") -> Corpus:
    """Load a corpus from ``path``.

    ``label_column=None`` loads classification-only input where no labels are
    attached; when given, empty label cells stay unlabeled while undecodable
    non-empty cells raise :class:`UnparsableLabel`.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader, None)
            except csv.Error as exc:
                raise MalformedCsv(0, str(exc)) from exc
            if header is None:
                raise MalformedCsv(0, "file has no header row")
            if text_column not in header:
                raise MissingColumn(text_column)
            text_idx = header.index(text_column)
            label_idx: int | None = None
            if label_column is not None:
                if label_column not in header:
                    raise MissingColumn(label_column)
                label_idx = header.index(label_column)

            records: list[EmailRecord] = []
            row_id = 0
            while True:
                try:
                    row = next(reader)
                except StopIteration:
                    break
                except csv.Error as exc:
                    raise MalformedCsv(row_id, str(exc)) from exc
                if not row:
                    continue  # blank line, not a data row
                if text_idx >= len(row) or (label_idx is not None and label_idx >= len(row)):
                    raise MalformedCsv(row_id, "row has fewer cells than the header")
                text = row[text_idx]
                if not text.strip():
                    raise EmptyText(row_id)
                label: Label | None = None
                if label_idx is not None:
                    raw_label = row[label_idx]
                    if raw_label.strip():
                        try:
                            label = decode_label(raw_label)
                        except UnparsableLabel:
                            raise UnparsableLabel(row_id, raw_label) from None
                records.append(EmailRecord(id=row_id, text=text, label=label))
                row_id += 1
    except UnicodeDecodeError as exc:
        raise MalformedCsv(-1, f"not valid UTF-8: {exc}") from exc

    return Corpus.from_records(records)


def split_corpus(corpus: Corpus, seed: int, fraction: float) -> tuple[Corpus, Corpus]:
    """Deterministic seeded partition of ``corpus`` into two corpora.

    The first half gets ``floor(fraction * n)`` records chosen by a seeded
    shuffle; both halves keep their original record ids (sorted ascending so
    corpus invariants hold). Union equals the input, intersection is empty.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    n = len(corpus.records)
    if n < 2:
        raise TooFewRecords(n, 2)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    cut = math.floor(fraction * n)
    first = sorted(order[:cut])
    second = sorted(order[cut:])
    records = corpus.records
    return (
        Corpus.from_records(records[i] for i in first),
        Corpus.from_records(records[i] for i in second),
    )


def require_fully_labeled(corpus: Corpus) -> None:
    """Raise :class:`UnlabeledRecord` for the first record lacking a label."""
    for rec in corpus.records:
        if rec.label is None:
            raise UnlabeledRecord(rec.id)


def records_by_label(corpus: Corpus) -> dict[Label, list[EmailRecord]]:
    grouped: dict[Label, list[EmailRecord]] = {Label.PHISHING: [], Label.SAFE: []}
    for rec in corpus.records:
        if rec.label is not None:
            grouped[rec.label].append(rec)
    return grouped


def make_corpus(texts: Sequence[str], labels: Sequence[Label | None] | None = None) -> Corpus:
    """Build an in-memory corpus from raw texts (ids assigned 0..n-1)."""
    if labels is None:
        labels = [None] * len(texts)
    if len(labels) != len(texts):
        raise ValueError("texts and labels must have equal length")
    return Corpus.from_records(
        EmailRecord(id=i, text=t, label=l) for i, (t, l) in enumerate(zip(texts, labels))
    )

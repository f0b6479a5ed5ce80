"""Exception hierarchy shared across the package.

Every error carries a stable machine-greppable ``code`` (e.g.
``E_PROVIDER_MISMATCH``) so the CLI can print single-line diagnostics and
scripts can match on them.
"""

from __future__ import annotations


class PhishlexError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "E_ERROR"

    def oneline(self) -> str:
        return f"{self.code}: {self}"


class MissingColumn(PhishlexError):
    code = "E_MISSING_COLUMN"

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"column {name!r} not present in CSV header")


class EmptyText(PhishlexError):
    code = "E_EMPTY_TEXT"

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row}: text is empty after trimming whitespace")


class UnparsableLabel(PhishlexError):
    code = "E_UNPARSABLE_LABEL"

    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        where = f"row {row}: " if row >= 0 else ""
        super().__init__(f"{where}label {value!r} is not a recognized label")


class MalformedCsv(PhishlexError):
    code = "E_MALFORMED_CSV"

    def __init__(self, row: int, detail: str = "malformed CSV row"):
        self.row = row
        super().__init__(f"row {row}: {detail}")


class TooFewRecords(PhishlexError):
    code = "E_TOO_FEW_RECORDS"

    def __init__(self, have: int, need: int):
        self.have = have
        self.need = need
        super().__init__(f"corpus has {have} records, need at least {need}")


class InconsistentDim(PhishlexError):
    code = "E_INCONSISTENT_DIM"

    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: vector width differs from earlier lines")


class UnparsableFloat(PhishlexError):
    code = "E_UNPARSABLE_FLOAT"

    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: vector component is not a finite float")


class EmptyFile(PhishlexError):
    code = "E_EMPTY_FILE"

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"{path}: no vector lines found")


class DimensionMismatch(PhishlexError):
    code = "E_DIMENSION_MISMATCH"

    def __init__(self, a: int, b: int):
        self.a = a
        self.b = b
        super().__init__(f"vector dimensions differ: {a} vs {b}")


class EmptyCorpus(PhishlexError):
    code = "E_EMPTY_CORPUS"

    def __init__(self, what: str = "operation"):
        super().__init__(f"{what} requires a non-empty corpus")


class TooFewVectors(PhishlexError):
    code = "E_TOO_FEW_VECTORS"

    def __init__(self, have: int, k: int):
        self.have = have
        self.k = k
        super().__init__(f"cannot form {k} clusters from {have} vectors")


class NoEmbeddableVocabulary(PhishlexError):
    code = "E_NO_EMBEDDABLE_VOCABULARY"

    def __init__(self):
        super().__init__("no vocabulary word has an embedding under this provider")


class EmptyKeywordList(PhishlexError):
    code = "E_EMPTY_KEYWORD_LIST"

    def __init__(self):
        super().__init__("keyword list is empty")


class MissingClass(PhishlexError):
    code = "E_MISSING_CLASS"

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"calibration corpus contains no {label!r} records")


class UnlabeledRecord(PhishlexError):
    code = "E_UNLABELED_RECORD"

    def __init__(self, record_id: int):
        self.record_id = record_id
        super().__init__(f"record {record_id} has no label")


class ProviderMismatch(PhishlexError):
    code = "E_PROVIDER_MISMATCH"

    def __init__(self, detail: str):
        super().__init__(f"embedding provider does not match the model: {detail}")


class UnsupportedVersion(PhishlexError):
    code = "E_UNSUPPORTED_VERSION"

    def __init__(self, version: object):
        self.version = version
        super().__init__(f"unsupported format_version: {version!r}")


class SchemaViolation(PhishlexError):
    code = "E_SCHEMA_VIOLATION"

    def __init__(self, detail: str):
        super().__init__(f"invalid file schema: {detail}")


class ProviderFingerprintMissing(PhishlexError):
    code = "E_PROVIDER_FINGERPRINT_MISSING"

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(
            f"embedder descriptor of kind {kind!r} lacks its identity field (seed or file_fingerprint)"
        )


class FlagConflict(PhishlexError):
    code = "E_FLAG_CONFLICT"

    def __init__(self, detail: str):
        super().__init__(f"conflicting flags: {detail}")


class IoError(PhishlexError):
    code = "E_IO"

    def __init__(self, detail: str):
        super().__init__(detail)

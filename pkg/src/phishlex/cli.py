"""Command-line frontend binding the pipeline phases together.

One binary, seven subcommands: extract, calibrate, classify, evaluate,
sweep, heatmap, stopwords. Exit codes: 0 success, 1 validation error,
2 I/O error. Every failure prints a single ``E_<CODE>: message`` line to
stderr, and output files are written atomically so a failed run never
leaves a partial result behind.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Sequence

from . import __version__
from .corpus_io import load_corpus
from .detector import (
    Aggregation,
    build_model,
    calibrate_threshold,
    classify,
    load_model,
    save_model,
)
from .embedding import KIND_HASH, EmbeddingProvider, HashEmbedder, load_word_vectors
from .errors import FlagConflict, IoError, PhishlexError, ProviderMismatch
from .evaluation import emit_report, evaluate, sweep
from .fileio import atomic_write_text
from .keyword_extraction import (
    Method,
    extract_keywords_semantic,
    extract_keywords_tfidf,
    keyword_similarity_matrix,
    load_keywords,
    save_keywords,
)
from .preprocess import BUILTIN_STOPWORDS, StopwordList

DEFAULT_DIM = 64
DEFAULT_SEED = 42
STOPWORDS_ENV = "PHISHLEX_STOPWORDS"

_AGGREGATIONS = {
    "joined": Aggregation.JOINED,
    "max": Aggregation.MAX_PER_KEYWORD,
    "mean": Aggregation.MEAN_PER_KEYWORD,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # unknown flags, missing required flags
        print(f"E_USAGE: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_corpus_flags(sub: argparse.ArgumentParser, labeled: bool) -> None:
    sub.add_argument("--input", required=True, help="input CSV file")
    sub.add_argument("--column", default="text", help="text column name (default: text)")
    if labeled:
        sub.add_argument("--label-column", default="label", help="label column name (default: label)")


def _add_embedder_flags(sub: argparse.ArgumentParser, seed_default: int | None = DEFAULT_SEED) -> None:
    sub.add_argument("--embeddings", metavar="FILE", default=None,
                     help="word-vector file ('token f1 f2 ...' per line)")
    sub.add_argument("--embedder", choices=["hash"], default=None,
                     help="use the seeded hash embedder (the default when --embeddings is absent)")
    sub.add_argument("--dim", type=int, default=None,
                     help=f"hash embedder dimension (default: {DEFAULT_DIM})")
    sub.add_argument("--seed", type=int, default=seed_default,
                     help="global seed for all stochastic steps"
                          + (f" (default: {seed_default})" if seed_default is not None else
                             " (default: taken from the model)"))


def _add_stopword_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--stopwords", default=None,
                     help=f"stopword file, one word per line (default: builtin list, or ${STOPWORDS_ENV})")


def build_parser() -> _Parser:
    parser = _Parser(prog="phishlex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subparsers.add_parser("extract", help="extract a keyword list from a phishing corpus")
    p.add_argument("--method", choices=["tfidf", "semantic"], required=True)
    _add_corpus_flags(p, labeled=False)
    p.add_argument("--top-n", type=int, required=True, help="number of keywords to extract")
    p.add_argument("--single-doc", action="store_true",
                   help="treat the whole corpus as one document (fixes idf = 1)")
    _add_stopword_flag(p)
    _add_embedder_flags(p)
    p.add_argument("--out", required=True, help="keyword file to write")
    p.set_defaults(handler=_cmd_extract)

    p = subparsers.add_parser("calibrate", help="calibrate a decision threshold on a labeled corpus")
    p.add_argument("--keywords", required=True, help="keyword file from 'extract'")
    _add_corpus_flags(p, labeled=True)
    p.add_argument("--agg", choices=sorted(_AGGREGATIONS), default="joined",
                   help="aggregation mode (default: joined)")
    _add_stopword_flag(p)
    _add_embedder_flags(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(handler=_cmd_calibrate)

    p = subparsers.add_parser("classify", help="classify emails with a calibrated model")
    p.add_argument("--model", required=True, help="model file from 'calibrate'")
    _add_corpus_flags(p, labeled=False)
    _add_stopword_flag(p)
    _add_embedder_flags(p, seed_default=None)
    p.add_argument("--out", required=True, help="verdict CSV to write (id,score,verdict)")
    p.set_defaults(handler=_cmd_classify)

    p = subparsers.add_parser("evaluate", help="evaluate a model on a labeled corpus")
    p.add_argument("--model", required=True)
    _add_corpus_flags(p, labeled=True)
    _add_stopword_flag(p)
    _add_embedder_flags(p, seed_default=None)
    p.add_argument("--report", required=True, help="report CSV to write")
    p.set_defaults(handler=_cmd_evaluate)

    p = subparsers.add_parser("sweep", help="accuracy sweep over keyword counts")
    p.add_argument("--method", choices=["tfidf", "semantic"], required=True)
    p.add_argument("--counts", required=True, help="comma-separated keyword counts, e.g. 6,8,10")
    p.add_argument("--extract-input", required=True, help="extraction corpus CSV (phishing emails)")
    p.add_argument("--calib-input", required=True, help="calibration corpus CSV (labeled)")
    p.add_argument("--test-input", default=None, help="held-out test corpus CSV (labeled)")
    p.add_argument("--in-sample", action="store_true",
                   help="evaluate on the calibration corpus itself (optimistically biased)")
    p.add_argument("--column", default="text")
    p.add_argument("--label-column", default="label")
    p.add_argument("--agg", choices=sorted(_AGGREGATIONS), default="joined")
    p.add_argument("--single-doc", action="store_true")
    _add_stopword_flag(p)
    _add_embedder_flags(p)
    p.add_argument("--report", required=True, help="sweep CSV to write")
    p.set_defaults(handler=_cmd_sweep)

    p = subparsers.add_parser("heatmap", help="export the keyword similarity matrix as CSV")
    p.add_argument("--keywords", required=True, help="keyword file from 'extract'")
    _add_stopword_flag(p)
    _add_embedder_flags(p)
    p.add_argument("--out", required=True, help="matrix CSV to write")
    p.set_defaults(handler=_cmd_heatmap)

    p = subparsers.add_parser("stopwords", help="inspect the builtin stopword list")
    p.add_argument("action", choices=["dump"], help="'dump' prints the builtin list")
    p.set_defaults(handler=_cmd_stopwords)

    return parser


def _load_stopwords(args: argparse.Namespace) -> StopwordList:
    path = getattr(args, "stopwords", None) or os.environ.get(STOPWORDS_ENV)
    if path:
        return StopwordList.from_file(path)
    return StopwordList.builtin()


def _build_provider(args: argparse.Namespace) -> EmbeddingProvider:
    if args.embeddings is not None and args.embedder is not None:
        raise FlagConflict("--embeddings cannot be combined with --embedder hash")
    if args.embeddings is not None:
        if args.dim is not None:
            raise FlagConflict("--dim applies to the hash embedder, not to --embeddings")
        return load_word_vectors(args.embeddings)
    dim = args.dim if args.dim is not None else DEFAULT_DIM
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    return HashEmbedder(dim=dim, seed=seed)


def _provider_for_model(model, args: argparse.Namespace) -> EmbeddingProvider:
    explicit_hash = args.embedder is not None or args.dim is not None or args.seed is not None
    if args.embeddings is not None:
        if explicit_hash:
            raise FlagConflict("--embeddings cannot be combined with hash embedder flags")
        return load_word_vectors(args.embeddings)
    config = model.embedder
    if config.kind == KIND_HASH:
        dim = args.dim if args.dim is not None else config.dim
        seed = args.seed if args.seed is not None else config.seed
        return HashEmbedder(dim=dim, seed=seed)
    raise ProviderMismatch("model was calibrated against a word-vector file; pass --embeddings")


def _cmd_extract(args: argparse.Namespace) -> int:
    stopwords = _load_stopwords(args)
    corpus = load_corpus(args.input, text_column=args.column, label_column=None)
    if args.method == "tfidf":
        kw = extract_keywords_tfidf(corpus, args.top_n, stopwords, single_doc=args.single_doc)
    else:
        provider = _build_provider(args)
        kw = extract_keywords_semantic(corpus, args.top_n, provider, stopwords, args.seed)
    save_keywords(kw, args.out)
    print(f"wrote {len(kw)} keywords to {args.out}")
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    stopwords = _load_stopwords(args)
    kw = load_keywords(args.keywords)
    provider = _build_provider(args)
    corpus = load_corpus(args.input, text_column=args.column, label_column=args.label_column)
    aggregation = _AGGREGATIONS[args.agg]
    calibration = calibrate_threshold(kw, aggregation, provider, corpus, stopwords)
    model = build_model(kw, calibration, aggregation, provider)
    save_model(model, args.out)
    print(
        f"calibrated threshold {model.threshold:.6f} "
        f"(accuracy {calibration.accuracy_at_threshold:.6f} on {len(corpus)} emails); wrote {args.out}"
    )
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    stopwords = _load_stopwords(args)
    model = load_model(args.model)
    provider = _provider_for_model(model, args)
    corpus = load_corpus(args.input, text_column=args.column, label_column=None)
    verdicts = classify(model, provider, corpus, stopwords)
    lines = ["id,score,verdict"]
    lines.extend(f"{v.id},{v.score:.6f},{v.verdict.value}" for v in verdicts)
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    flagged = sum(1 for v in verdicts if v.verdict.value == "phishing")
    print(f"classified {len(verdicts)} emails ({flagged} phishing); wrote {args.out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    stopwords = _load_stopwords(args)
    model = load_model(args.model)
    provider = _provider_for_model(model, args)
    corpus = load_corpus(args.input, text_column=args.column, label_column=args.label_column)
    report = evaluate(model, provider, corpus, stopwords)
    emit_report(report, args.report)
    print(f"accuracy {report.accuracy:.6f} on {report.total} emails; wrote {args.report}")
    return 0


def _parse_counts(raw: str) -> list[int]:
    try:
        counts = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise _UsageError(f"--counts must be comma-separated integers, got {raw!r}") from None
    if not counts:
        raise _UsageError("--counts must list at least one keyword count")
    return counts


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.in_sample and args.test_input is not None:
        raise FlagConflict("--in-sample cannot be combined with --test-input")
    if not args.in_sample and args.test_input is None:
        raise _UsageError("one of --test-input or --in-sample is required")
    counts = _parse_counts(args.counts)
    stopwords = _load_stopwords(args)
    provider = _build_provider(args)
    extraction = load_corpus(args.extract_input, text_column=args.column, label_column=None)
    calib = load_corpus(args.calib_input, text_column=args.column, label_column=args.label_column)
    if args.in_sample:
        test = calib
    else:
        test = load_corpus(args.test_input, text_column=args.column, label_column=args.label_column)
    result = sweep(
        extraction,
        calib,
        test,
        Method(args.method),
        counts,
        provider,
        stopwords,
        args.seed,
        aggregation=_AGGREGATIONS[args.agg],
        single_doc=args.single_doc,
    )
    emit_report(result, args.report)
    print(f"swept {len(result.rows)} keyword counts; wrote {args.report}")
    return 0


def _cmd_heatmap(args: argparse.Namespace) -> int:
    kw = load_keywords(args.keywords)
    provider = _build_provider(args)
    matrix = keyword_similarity_matrix(kw, provider)
    lines = ["keyword," + ",".join(kw.keywords)]
    for token, row in zip(kw.keywords, matrix):
        lines.append(token + "," + ",".join(f"{value:.6f}" for value in row))
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    print(f"wrote {len(kw)}x{len(kw)} similarity matrix to {args.out}")
    return 0


def _cmd_stopwords(args: argparse.Namespace) -> int:
    for word in BUILTIN_STOPWORDS:
        print(word)
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"E_USAGE: {exc}", file=sys.stderr)
        return 1
    except IoError as exc:
        print(exc.oneline(), file=sys.stderr)
        return 2
    except PhishlexError as exc:
        print(exc.oneline(), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

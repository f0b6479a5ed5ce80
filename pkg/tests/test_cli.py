"""End-to-end CLI behavior: pipelines, exit codes, error lines, atomicity."""

from __future__ import annotations

import csv
import json
import os

import pytest

from phishlex.cli import run
from tests.conftest import build_planted_corpora


@pytest.fixture
def corpora_csv(tmp_path):
    """Extraction and labeled evaluation CSVs for the synthetic corpus."""
    extraction, evalc = build_planted_corpora()
    extract_path = tmp_path / "extract.csv"
    with open(extract_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["text"])
        for record in extraction.records:
            writer.writerow([record.text])
    eval_path = tmp_path / "eval.csv"
    with open(eval_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["text", "label"])
        for record in evalc.records:
            writer.writerow([record.text, record.label.value])
    return str(extract_path), str(eval_path)


def test_full_pipeline_extract_calibrate_classify_evaluate(tmp_path, corpora_csv, capsys):
    extract_csv, eval_csv = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    model_path = str(tmp_path / "model.json")
    verdicts_path = str(tmp_path / "verdicts.csv")
    report_path = str(tmp_path / "report.csv")

    assert run([
        "extract", "--method", "tfidf", "--input", extract_csv,
        "--top-n", "10", "--out", kw_path,
    ]) == 0
    document = json.loads(open(kw_path).read())
    assert document["format_version"] == 1
    assert len(document["keywords"]) == 10

    assert run([
        "calibrate", "--keywords", kw_path, "--input", eval_csv,
        "--agg", "joined", "--out", model_path,
    ]) == 0
    model_doc = json.loads(open(model_path).read())
    assert model_doc["embedder"] == {"dim": 64, "kind": "hash", "seed": 42}

    assert run([
        "classify", "--model", model_path, "--input", eval_csv, "--out", verdicts_path,
    ]) == 0
    with open(verdicts_path) as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 500
    assert set(rows[0]) == {"id", "score", "verdict"}
    assert all(r["verdict"] in ("phishing", "safe") for r in rows)

    assert run([
        "evaluate", "--model", model_path, "--input", eval_csv, "--report", report_path,
    ]) == 0
    lines = open(report_path).read().splitlines()
    assert lines[0] == "keyword_count,threshold,accuracy,tp,fp,tn,fn"
    accuracy = float(lines[1].split(",")[2])
    assert accuracy >= 0.95
    out = capsys.readouterr().out
    assert "wrote" in out


def test_extract_semantic_via_cli(tmp_path, corpora_csv):
    extract_csv, _ = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    assert run([
        "extract", "--method", "semantic", "--input", extract_csv,
        "--top-n", "5", "--dim", "32", "--seed", "7", "--out", kw_path,
    ]) == 0
    document = json.loads(open(kw_path).read())
    assert document["method"] == "semantic"
    assert document["params"]["dim"] == 32
    assert document["params"]["seed"] == 7
    assert len(document["keywords"]) == 5


def test_sweep_byte_identical_reruns(tmp_path, corpora_csv):
    extract_csv, eval_csv = corpora_csv
    first = str(tmp_path / "sweep1.csv")
    second = str(tmp_path / "sweep2.csv")
    argv_tail = [
        "--method", "tfidf", "--counts", "4,6,8",
        "--extract-input", extract_csv, "--calib-input", eval_csv,
        "--in-sample", "--seed", "42",
    ]
    assert run(["sweep", *argv_tail, "--report", first]) == 0
    assert run(["sweep", *argv_tail, "--report", second]) == 0
    assert open(first, "rb").read() == open(second, "rb").read()
    assert len(open(first).read().splitlines()) == 4


def test_sweep_requires_test_corpus_or_in_sample(tmp_path, corpora_csv, capsys):
    extract_csv, eval_csv = corpora_csv
    code = run([
        "sweep", "--method", "tfidf", "--counts", "4",
        "--extract-input", extract_csv, "--calib-input", eval_csv,
        "--report", str(tmp_path / "x.csv"),
    ])
    assert code == 1
    assert "E_USAGE" in capsys.readouterr().err


def test_heatmap_csv(tmp_path, corpora_csv):
    extract_csv, _ = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    heatmap_path = str(tmp_path / "heat.csv")
    run(["extract", "--method", "tfidf", "--input", extract_csv, "--top-n", "4", "--out", kw_path])
    assert run(["heatmap", "--keywords", kw_path, "--out", heatmap_path]) == 0
    lines = open(heatmap_path).read().splitlines()
    assert len(lines) == 5
    header = lines[0].split(",")
    assert header[0] == "keyword" and len(header) == 5
    first_row = lines[1].split(",")
    assert first_row[0] == header[1]
    assert float(first_row[1]) == 1.0


def test_extract_single_doc_mode(tmp_path, corpora_csv):
    extract_csv, _ = corpora_csv
    default_path = str(tmp_path / "kw1.json")
    single_path = str(tmp_path / "kw2.json")
    common = ["extract", "--method", "tfidf", "--input", extract_csv, "--top-n", "10"]
    assert run([*common, "--out", default_path]) == 0
    assert run([*common, "--single-doc", "--out", single_path]) == 0
    assert json.loads(open(single_path).read())["params"]["single_doc"] is True
    # both modes see planted keywords on this corpus; provenance differs
    assert json.loads(open(default_path).read())["params"]["single_doc"] is False


def test_stopwords_dump(capsys):
    assert run(["stopwords", "dump"]) == 0
    words = capsys.readouterr().out.splitlines()
    assert len(words) == 127
    assert "the" in words


def test_custom_stopword_file_flag(tmp_path, corpora_csv):
    extract_csv, _ = corpora_csv
    stop_path = tmp_path / "stop.txt"
    stop_path.write_text("account\nalert\n")
    kw_path = str(tmp_path / "kw.json")
    assert run([
        "extract", "--method", "tfidf", "--input", extract_csv,
        "--top-n", "12", "--stopwords", str(stop_path), "--out", kw_path,
    ]) == 0
    keywords = json.loads(open(kw_path).read())["keywords"]
    assert "account" not in keywords and "alert" not in keywords


def test_stopword_env_var(tmp_path, corpora_csv, monkeypatch):
    extract_csv, _ = corpora_csv
    stop_path = tmp_path / "stop.txt"
    stop_path.write_text("bank\n")
    monkeypatch.setenv("PHISHLEX_STOPWORDS", str(stop_path))
    kw_path = str(tmp_path / "kw.json")
    assert run([
        "extract", "--method", "tfidf", "--input", extract_csv,
        "--top-n", "12", "--out", kw_path,
    ]) == 0
    assert "bank" not in json.loads(open(kw_path).read())["keywords"]


def test_flag_conflict_embeddings_with_hash(tmp_path, corpora_csv, capsys):
    extract_csv, _ = corpora_csv
    vec_path = tmp_path / "vectors.txt"
    vec_path.write_text("cash 1.0 0.0\n")
    code = run([
        "extract", "--method", "semantic", "--input", extract_csv,
        "--embeddings", str(vec_path), "--embedder", "hash",
        "--top-n", "3", "--out", str(tmp_path / "kw.json"),
    ])
    assert code == 1
    assert "E_FLAG_CONFLICT" in capsys.readouterr().err


def test_classify_provider_mismatch_exit_code(tmp_path, corpora_csv, capsys):
    extract_csv, eval_csv = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    model_path = str(tmp_path / "model.json")
    run(["extract", "--method", "tfidf", "--input", extract_csv, "--top-n", "5", "--out", kw_path])
    run(["calibrate", "--keywords", kw_path, "--input", eval_csv, "--out", model_path])
    code = run([
        "classify", "--model", model_path, "--input", eval_csv,
        "--seed", "7", "--out", str(tmp_path / "v.csv"),
    ])
    assert code == 1
    assert "E_PROVIDER_MISMATCH" in capsys.readouterr().err
    assert not os.path.exists(tmp_path / "v.csv")  # no partial output


def test_word_vector_pipeline_and_fingerprint_mismatch(tmp_path, capsys):
    vec_path = tmp_path / "vectors.txt"
    vec_path.write_text(
        "prize 1.0 0.0 0.0\nwinner 0.9 0.1 0.0\nmeeting 0.0 1.0 0.0\nnotes 0.0 0.9 0.1\n"
    )
    corpus_path = tmp_path / "mail.csv"
    corpus_path.write_text(
        "text,label\n"
        "prize winner,phishing\n"
        "winner prize prize,phishing\n"
        "meeting notes,safe\n"
        "notes meeting meeting,safe\n"
    )
    extract_path = tmp_path / "phish.csv"
    extract_path.write_text("text\nprize winner\nwinner prize\n")
    kw_path = str(tmp_path / "kw.json")
    model_path = str(tmp_path / "model.json")

    assert run([
        "extract", "--method", "semantic", "--input", str(extract_path),
        "--embeddings", str(vec_path), "--top-n", "2", "--out", kw_path,
    ]) == 0
    assert run([
        "calibrate", "--keywords", kw_path, "--input", str(corpus_path),
        "--embeddings", str(vec_path), "--out", model_path,
    ]) == 0
    model_doc = json.loads(open(model_path).read())
    assert model_doc["embedder"]["kind"] == "word_vectors"

    verdicts_path = str(tmp_path / "v.csv")
    assert run([
        "classify", "--model", model_path, "--input", str(corpus_path),
        "--embeddings", str(vec_path), "--out", verdicts_path,
    ]) == 0
    with open(verdicts_path) as handle:
        verdicts = [row["verdict"] for row in csv.DictReader(handle)]
    assert verdicts == ["phishing", "phishing", "safe", "safe"]

    # classifying without the vector file fails: the threshold is meaningless
    # outside the embedding space it was calibrated in
    assert run([
        "classify", "--model", model_path, "--input", str(corpus_path),
        "--out", str(tmp_path / "x.csv"),
    ]) == 1
    # a modified vector file changes the fingerprint and is refused
    vec_path.write_text(vec_path.read_text().replace("0.9", "0.8"))
    code = run([
        "classify", "--model", model_path, "--input", str(corpus_path),
        "--embeddings", str(vec_path), "--out", str(tmp_path / "y.csv"),
    ])
    assert code == 1
    assert "E_PROVIDER_MISMATCH" in capsys.readouterr().err


def test_validation_error_exit_code_and_line(tmp_path, capsys):
    missing = str(tmp_path / "missing.csv")
    code = run(["extract", "--method", "tfidf", "--input", missing, "--top-n", "3",
                "--out", str(tmp_path / "kw.json")])
    assert code == 2  # unreadable input is an I/O failure
    err = capsys.readouterr().err
    assert err.startswith("E_")


def test_unwritable_report_is_io_exit_code(tmp_path, corpora_csv, capsys):
    extract_csv, eval_csv = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    model_path = str(tmp_path / "model.json")
    run(["extract", "--method", "tfidf", "--input", extract_csv, "--top-n", "5", "--out", kw_path])
    run(["calibrate", "--keywords", kw_path, "--input", eval_csv, "--out", model_path])
    code = run([
        "evaluate", "--model", model_path, "--input", eval_csv,
        "--report", "/nonexistent-dir/report.csv",
    ])
    assert code == 2
    assert "E_IO" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert run(["extract", "--help"]) == 0
    capsys.readouterr()


def test_unknown_flag_prints_usage_error(capsys):
    code = run(["extract", "--nope"])
    assert code == 1
    assert "E_USAGE" in capsys.readouterr().err


def test_bad_label_in_csv_is_validation_error(tmp_path, corpora_csv, capsys):
    extract_csv, _ = corpora_csv
    kw_path = str(tmp_path / "kw.json")
    run(["extract", "--method", "tfidf", "--input", extract_csv, "--top-n", "5", "--out", kw_path])
    bad_csv = tmp_path / "bad.csv"
    bad_csv.write_text("text,label\nhello,maybe\n")
    code = run([
        "calibrate", "--keywords", kw_path, "--input", str(bad_csv),
        "--out", str(tmp_path / "model.json"),
    ])
    assert code == 1
    assert "E_UNPARSABLE_LABEL" in capsys.readouterr().err

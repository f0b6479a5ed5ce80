"""Shared fixtures and synthetic corpus builders."""

from __future__ import annotations

import random

import pytest

from phishlex import Corpus, Label, StopwordList, make_corpus

PLANTED_KEYWORDS = (
    "account", "alert", "bank", "click", "confirm",
    "password", "prize", "urgent", "verify", "winner",
)


def build_planted_corpora(
    generator_seed: int = 42,
    filler_pool: int = 22,
    extra_vocab: int = 0,
) -> tuple[Corpus, Corpus]:
    """Synthetic extraction and evaluation corpora with planted keywords.

    The extraction corpus is 200 phishing-style emails built from the planted
    keyword set (plus ``extra_vocab`` background tokens when a larger
    vocabulary is needed). The evaluation corpus has 250 phishing emails
    carrying 3 of the 10 planted keywords among 20 filler tokens and 250 safe
    emails of filler only; fillers are drawn without replacement from a pool
    of ``filler_pool`` tokens.
    """
    rng = random.Random(generator_seed)
    planted = list(PLANTED_KEYWORDS)
    fillers = [f"filler{i:03d}" for i in range(filler_pool)]
    extras = [f"topic{i:03d}" for i in range(extra_vocab)]

    extract_texts = []
    for _ in range(200):
        words = rng.sample(planted, rng.randint(4, 8))
        if extras:
            words += rng.sample(extras, 2)
        rng.shuffle(words)
        extract_texts.append(" ".join(words))
    extraction = make_corpus(extract_texts)

    texts: list[str] = []
    labels: list[Label] = []
    for _ in range(250):
        words = rng.sample(planted, 3) + rng.sample(fillers, 20)
        rng.shuffle(words)
        texts.append(" ".join(words))
        labels.append(Label.PHISHING)
    for _ in range(250):
        words = rng.sample(fillers, 20)
        rng.shuffle(words)
        texts.append(" ".join(words))
        labels.append(Label.SAFE)
    return extraction, make_corpus(texts, labels)


@pytest.fixture
def stopwords() -> StopwordList:
    return StopwordList.builtin()


@pytest.fixture
def no_stopwords() -> StopwordList:
    return StopwordList.empty()


@pytest.fixture
def vector_file(tmp_path):
    """Word-vector file with four named 2-d vectors used across tests."""
    path = tmp_path / "vectors.txt"
    path.write_text(
        "alpha 1.0 0.0\n"
        "beta 0.0 1.0\n"
        "gamma 1.0 1.0\n"
        "delta -1.0 0.0\n",
        encoding="utf-8",
    )
    return str(path)

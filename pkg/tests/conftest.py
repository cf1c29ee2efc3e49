import pytest

import scisumm._core as core
from scisumm.corpus import ArticleRecord, PairExample, Task, filter_pair
from scisumm.embeddings import save_embeddings
from scisumm.sampledata import (
    corpus_word_surfaces,
    synthetic_embeddings,
    synthetic_records,
    write_records,
)

BACKEND_NAMES = sorted(core.available_backends())


@pytest.fixture(params=BACKEND_NAMES)
def kernel_backend(request, monkeypatch):
    """Run the decorated test once per available kernel implementation."""
    monkeypatch.setattr(core, "active", core.available_backends()[request.param])
    return request.param


@pytest.fixture(scope="session")
def sample_records():
    return synthetic_records(n_docs=100, seed=0)


@pytest.fixture(scope="session")
def sample_articles(sample_records):
    return [
        ArticleRecord(r["id"], r["title"], r["abstract"], r.get("body", ""))
        for r in sample_records
    ]


@pytest.fixture(scope="session")
def sample_pairs(sample_articles):
    pairs = [filter_pair(r, Task.ABSTRACT_GEN) for r in sample_articles]
    assert all(isinstance(p, PairExample) for p in pairs)
    return pairs


@pytest.fixture(scope="session")
def sample_title_pairs(sample_articles):
    pairs = [filter_pair(r, Task.TITLE_GEN) for r in sample_articles]
    assert all(isinstance(p, PairExample) for p in pairs)
    return pairs


@pytest.fixture(scope="session")
def sample_emb(sample_records):
    surfaces = corpus_word_surfaces(sample_records)
    return synthetic_embeddings(surfaces, dim=64, seed=1)


@pytest.fixture(scope="session")
def sample_dir(tmp_path_factory, sample_records, sample_emb):
    """Directory with the bundled sample corpus written to disk."""
    path = tmp_path_factory.mktemp("sample")
    write_records(path / "records.jsonl", sample_records)
    save_embeddings(sample_emb, path / "embeddings.bin", "binary")
    return path

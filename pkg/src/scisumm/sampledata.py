"""Deterministic synthetic corpora and embedding tables.

Used by the demo walkthrough, the benchmark, and the test suite. Documents
are nonsense prose shaped to pass the corpus length filters; they are not a
substitute for real articles.
"""

from __future__ import annotations

import argparse
import json
import os
from typing import Iterable, Sequence

import numpy as np

from .embeddings import EmbeddingTable, save_embeddings
from .textproc import TokenKind, prepare

_CONSONANTS = "bcdfglmnprstvz"
_VOWELS = "aeiou"

FUNCTION_WORDS = (
    "the", "of", "and", "in", "to", "a", "is", "with", "for", "that",
    "are", "on", "as", "by", "we", "this", "be", "or", "at", "from",
)


def _lexicon(size: int, rng: np.random.Generator) -> list[str]:
    words: list[str] = []
    seen = set(FUNCTION_WORDS)
    while len(words) < size:
        syllables = rng.integers(2, 5)
        word = "".join(
            _CONSONANTS[rng.integers(len(_CONSONANTS))]
            + _VOWELS[rng.integers(len(_VOWELS))]
            for _ in range(syllables)
        )
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _sentence_words(
    rng: np.random.Generator,
    topic: Sequence[str],
    weights: np.ndarray,
    lo: int = 12,
    hi: int = 28,
) -> list[str]:
    length = int(rng.integers(lo, hi + 1))
    words = []
    for _ in range(length):
        if rng.random() < 0.3:
            words.append(FUNCTION_WORDS[rng.integers(len(FUNCTION_WORDS))])
        elif rng.random() < 0.04:
            words.append(str(rng.integers(1, 5000)))
        else:
            words.append(topic[rng.choice(len(topic), p=weights)])
    return words


def _passage(
    rng: np.random.Generator,
    topic: Sequence[str],
    weights: np.ndarray,
    min_tokens: int | None = None,
    sentence_count: int | None = None,
) -> str:
    sentences = []
    tokens = 0
    while True:
        words = _sentence_words(rng, topic, weights)
        sentences.append(" ".join(words) + ".")
        tokens += len(words) + 1
        if sentence_count is not None and len(sentences) >= sentence_count:
            break
        if min_tokens is not None and tokens >= min_tokens:
            break
    return " ".join(sentences)


def synthetic_records(
    n_docs: int = 100,
    seed: int = 0,
    body_sentence_range: tuple[int, int] = (100, 180),
) -> list[dict]:
    """Generate raw article records that satisfy both tasks' length bounds."""
    rng = np.random.default_rng(seed)
    lexicon = _lexicon(1000, rng)
    records = []
    for i in range(n_docs):
        topic = [lexicon[j] for j in rng.choice(len(lexicon), 220, replace=False)]
        ranks = np.arange(1, len(topic) + 1, dtype=np.float64)
        weights = 1.0 / ranks**0.9
        weights /= weights.sum()
        title_len = int(rng.integers(8, 19))
        title = " ".join(
            topic[rng.choice(len(topic), p=weights)] for _ in range(title_len)
        )
        abstract = _passage(rng, topic, weights, min_tokens=170)
        body_sentences = int(rng.integers(body_sentence_range[0],
                                          body_sentence_range[1] + 1))
        body = _passage(rng, topic, weights, sentence_count=body_sentences)
        records.append(
            {
                "id": f"synth-{i:04d}",
                "title": title,
                "abstract": abstract,
                "body": body,
            }
        )
    return records


def corpus_word_surfaces(records: Iterable[dict]) -> list[str]:
    """All word-kind token surfaces appearing in the records, sorted."""
    surfaces = set()
    for record in records:
        for field in ("title", "abstract", "body"):
            for token in prepare(record.get(field, "")).tokens:
                if token.kind is TokenKind.WORD:
                    surfaces.add(token.surface)
    return sorted(surfaces)


def synthetic_embeddings(
    tokens: Iterable[str], dim: int = 200, seed: int = 0
) -> EmbeddingTable:
    """Random unit-scale vectors for the given tokens."""
    rng = np.random.default_rng(seed)
    vectors = {
        token: rng.standard_normal(dim).astype(np.float32) / np.sqrt(dim)
        for token in tokens
    }
    return EmbeddingTable(dim, vectors)


def write_records(path: str, records: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count


def write_sample(
    out_dir: str,
    n_docs: int = 100,
    dim: int = 200,
    seed: int = 0,
    body_sentence_range: tuple[int, int] = (100, 180),
) -> dict[str, str]:
    """Write records.jsonl and embeddings.bin into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    records = synthetic_records(n_docs, seed, body_sentence_range)
    records_path = os.path.join(out_dir, "records.jsonl")
    write_records(records_path, records)
    table = synthetic_embeddings(corpus_word_surfaces(records), dim, seed)
    embeddings_path = os.path.join(out_dir, "embeddings.bin")
    save_embeddings(table, embeddings_path, fmt="binary")
    return {"records": records_path, "embeddings": embeddings_path}


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Write a synthetic records file and embedding table."
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--docs", type=int, default=100)
    parser.add_argument("--dim", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    paths = write_sample(args.out, args.docs, args.dim, args.seed)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

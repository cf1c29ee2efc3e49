"""Word vector tables, document-frequency weights, and weighted sentence
vectors.

A sentence vector is the weighted mean of its in-vocabulary content token
vectors, each token weighted by document-level term frequency times inverse
document frequency. Stopwords, punctuation, number masks, and out-of-table
tokens contribute nothing; a sentence with no qualifying token gets the zero
vector.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Iterator, Mapping

import numpy as np

from .errors import DataError, EmbeddingFormatError
from .stopwords import DEFAULT_STOPWORDS
from .textproc import Sentence, Token, TokenizedText, is_content

logger = logging.getLogger(__name__)

_FLOAT_WIDTH = 4  # little-endian float32 storage


class EmbeddingTable:
    """Immutable token-to-vector map with lowercase matching."""

    __slots__ = ("dimension", "_vectors")

    def __init__(self, dimension: int, vectors: Mapping[str, np.ndarray]):
        if dimension <= 0:
            raise ValueError(f"dimension must be positive, got {dimension}")
        store: dict[str, np.ndarray] = {}
        for token, vector in vectors.items():
            arr = np.asarray(vector, dtype=np.float32)
            if arr.shape != (dimension,):
                raise ValueError(
                    f"vector for {token!r} has shape {arr.shape}, expected ({dimension},)"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"vector for {token!r} contains non-finite values")
            arr.setflags(write=False)
            store[token.lower()] = arr
        self.dimension = dimension
        self._vectors = store

    def get(self, token: str) -> np.ndarray | None:
        return self._vectors.get(token.lower())

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def tokens(self) -> Iterator[str]:
        return iter(self._vectors)


@dataclass(frozen=True)
class IdfTable:
    """Document frequencies over a corpus of ``doc_count`` documents."""

    doc_count: int
    doc_freq: Mapping[str, int]

    def __post_init__(self):
        if self.doc_count <= 0:
            raise ValueError("doc_count must be positive")
        for token, df in self.doc_freq.items():
            if not 0 <= df <= self.doc_count:
                raise ValueError(f"df {df} for {token!r} outside [0, {self.doc_count}]")

    def idf(self, token: str) -> float:
        """Smoothed inverse document frequency; strictly positive."""
        df = self.doc_freq.get(token, 0)
        return math.log((1 + self.doc_count) / (1 + df)) + 1.0


@dataclass(frozen=True)
class SentenceEmbedding:
    vector: np.ndarray
    norm: float
    content_token_count: int


def build_idf(documents: Iterable[TokenizedText]) -> IdfTable:
    """Count, per token surface, the number of documents containing it."""
    doc_freq: dict[str, int] = {}
    count = 0
    for document in documents:
        count += 1
        for surface in set(document.surfaces()):
            doc_freq[surface] = doc_freq.get(surface, 0) + 1
    if count == 0:
        raise DataError("cannot build document frequencies from an empty corpus")
    return IdfTable(count, doc_freq)


def document_term_frequencies(document: TokenizedText) -> Counter[str]:
    """Occurrence counts of every token surface in the document."""
    return Counter(document.surfaces())


def _weighted_mean(
    tokens: Iterable[Token],
    emb: EmbeddingTable,
    idf: IdfTable,
    tf: Mapping[str, int],
    stopwords: AbstractSet[str],
) -> SentenceEmbedding:
    vector = np.zeros(emb.dimension)
    total_weight = 0.0
    count = 0
    for token in tokens:
        if not is_content(token, stopwords):
            continue
        stored = emb.get(token.surface)
        if stored is None:
            continue
        weight = tf[token.surface] * idf.idf(token.surface)
        vector += weight * stored.astype(np.float64)
        total_weight += weight
        count += 1
    if count:
        vector /= total_weight
    return SentenceEmbedding(vector, float(np.linalg.norm(vector)), count)


def sentence_embedding(
    sentence: Sentence,
    emb: EmbeddingTable,
    idf: IdfTable,
    tf: Mapping[str, int],
    stopwords: AbstractSet[str] | None = None,
) -> SentenceEmbedding:
    """Weighted mean vector of a sentence.

    ``tf`` holds document-level term counts, so the weighting of a token is
    shared by every sentence of the same document.
    """
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    return _weighted_mean(sentence.tokens, emb, idf, tf, sw)


def document_embedding(
    document: TokenizedText,
    emb: EmbeddingTable,
    idf: IdfTable,
    stopwords: AbstractSet[str] | None = None,
) -> SentenceEmbedding:
    """Weighted mean vector of all sentences, as one concatenated sentence."""
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    tf = document_term_frequencies(document)
    return _weighted_mean(document.tokens, emb, idf, tf, sw)


def cosine(a: SentenceEmbedding, b: SentenceEmbedding) -> float:
    """Cosine similarity; zero-norm vectors compare as 0.0."""
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    return float(np.dot(a.vector, b.vector) / (a.norm * b.norm))


def _store_entry(
    vectors: dict[str, np.ndarray], token: str, vector: np.ndarray, path: str
) -> None:
    if not np.all(np.isfinite(vector)):
        raise EmbeddingFormatError(f"{path}: non-finite values for token {token!r}")
    key = token.lower()
    if key in vectors:
        logger.warning("%s: duplicate token %r, keeping the last entry", path, key)
    vectors[key] = vector


def _parse_header(line: bytes | str, path: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(f"{path}: expected 'count dim' header")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise EmbeddingFormatError(f"{path}: malformed header {line!r}") from exc
    if count < 0 or dim <= 0:
        raise EmbeddingFormatError(f"{path}: invalid header values {count} {dim}")
    return count, dim


def _load_binary(path: str) -> EmbeddingTable:
    vectors: dict[str, np.ndarray] = {}
    with open(path, "rb") as handle:
        count, dim = _parse_header(handle.readline().decode("utf-8", "replace"), path)
        row_bytes = dim * _FLOAT_WIDTH
        for _ in range(count):
            token_bytes = bytearray()
            while True:
                ch = handle.read(1)
                if not ch:
                    raise EmbeddingFormatError(
                        f"{path}: truncated token at offset {handle.tell()}"
                    )
                if ch == b" ":
                    break
                if ch in (b"\n", b"\r") and not token_bytes:
                    continue  # leading newlines between entries are tolerated
                token_bytes.extend(ch)
            data = handle.read(row_bytes)
            if len(data) != row_bytes:
                raise EmbeddingFormatError(
                    f"{path}: truncated vector at offset {handle.tell()}, "
                    f"expected {row_bytes} bytes"
                )
            token = token_bytes.decode("utf-8", "replace")
            vector = np.frombuffer(data, dtype="<f4").copy()
            _store_entry(vectors, token, vector, path)
        trailing = handle.read()
        if trailing.strip():
            raise EmbeddingFormatError(
                f"{path}: {len(trailing)} unexpected bytes after {count} entries"
            )
    return EmbeddingTable(dim, vectors)


def _load_text(path: str) -> EmbeddingTable:
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as handle:
        count, dim = _parse_header(handle.readline(), path)
        seen = 0
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.split()
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: token {token!r} has {len(values)} values, "
                    f"expected {dim}"
                )
            try:
                vector = np.array([float(v) for v in values], dtype=np.float32)
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: unparsable value for token {token!r}"
                ) from exc
            _store_entry(vectors, token, vector, path)
            seen += 1
        if seen != count:
            raise EmbeddingFormatError(
                f"{path}: header declares {count} entries, found {seen}"
            )
    return EmbeddingTable(dim, vectors)


def _detect_format(path: str) -> str:
    with open(path, "rb") as handle:
        handle.readline()
        second = handle.readline()
    try:
        parts = second.decode("utf-8").split()
        if len(parts) >= 2:
            for value in parts[1:]:
                float(value)
            return "text"
    except (UnicodeDecodeError, ValueError):
        pass
    return "binary"


def load_embeddings(path: str, fmt: str = "auto") -> EmbeddingTable:
    """Load a vector table.

    ``fmt`` is ``binary`` (header line, then token bytes, a space, and
    little-endian float32 values per entry), ``text`` (header line, then one
    token and its decimal values per line), or ``auto`` to sniff.
    """
    if fmt == "auto":
        fmt = _detect_format(path)
    if fmt == "binary":
        return _load_binary(path)
    if fmt == "text":
        return _load_text(path)
    raise ValueError(f"unknown embedding format {fmt!r}")


def save_embeddings(table: EmbeddingTable, path: str, fmt: str = "binary") -> None:
    """Write a vector table in the ``binary`` or ``text`` layout."""
    if fmt == "binary":
        with open(path, "wb") as handle:
            handle.write(f"{len(table)} {table.dimension}\n".encode("utf-8"))
            for token in table.tokens():
                vector = table.get(token)
                assert vector is not None
                handle.write(token.encode("utf-8") + b" ")
                handle.write(vector.astype("<f4").tobytes())
    elif fmt == "text":
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(f"{len(table)} {table.dimension}\n")
            for token in table.tokens():
                vector = table.get(token)
                assert vector is not None
                handle.write(token + " " + " ".join(str(v) for v in vector) + "\n")
    else:
        raise ValueError(f"unknown embedding format {fmt!r}")


def save_idf(table: IdfTable, path: str) -> None:
    """Write document frequencies: a document-count header, then tab-separated
    token/frequency lines sorted by token."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{table.doc_count}\n")
        for token in sorted(table.doc_freq):
            handle.write(f"{token}\t{table.doc_freq[token]}\n")


def load_idf(path: str) -> IdfTable:
    doc_freq: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
        try:
            doc_count = int(header)
        except ValueError as exc:
            raise EmbeddingFormatError(
                f"{path}: expected a document-count header, got {header!r}"
            ) from exc
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise EmbeddingFormatError(f"{path}:{lineno}: expected 'token<TAB>df'")
            try:
                doc_freq[parts[0]] = int(parts[1])
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: unparsable frequency {parts[1]!r}"
                ) from exc
    try:
        return IdfTable(doc_count, doc_freq)
    except ValueError as exc:
        raise EmbeddingFormatError(f"{path}: {exc}") from exc

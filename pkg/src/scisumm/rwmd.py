"""Relaxed word mover's distance between sentences, and the similarity
graphs built from it.

The directional distance from sentence A to sentence B sums, over A's
in-vocabulary content tokens (with multiplicity), the Euclidean distance to
the nearest such token of B. The symmetric distance takes the larger of the
two directions, which keeps it a lower bound of the full transport cost.
Sentences with no in-vocabulary content token are incomparable: scalar
functions return ``None`` for them and matrix builders mark them ``NaN``,
which the similarity transform maps to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from . import _core
from .embeddings import EmbeddingTable
from .stopwords import DEFAULT_STOPWORDS
from .textproc import Sentence, TokenizedText, is_content


def eligible_surfaces(
    sentence: Sentence,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> list[str]:
    """Content token surfaces with a vector, multiplicity preserved."""
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    return [
        token.surface
        for token in sentence.tokens
        if is_content(token, sw) and token.surface in emb
    ]


@dataclass
class _SentenceIndex:
    """CSR view of sentences over a first-occurrence token vocabulary."""

    matrix: np.ndarray  # (vocab, dim) float64
    ids: np.ndarray  # int32, concatenated per-sentence unique token ids
    counts: np.ndarray  # float64, occurrence counts aligned with ids
    offsets: np.ndarray  # int32, len(sentences) + 1
    empty: np.ndarray  # bool per sentence


def _index_sentences(
    sentences: Sequence[Sentence],
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None,
) -> _SentenceIndex:
    vocab: dict[str, int] = {}
    vectors: list[np.ndarray] = []
    ids: list[int] = []
    counts: list[float] = []
    offsets = [0]
    for sentence in sentences:
        grouped: dict[int, float] = {}
        for surface in eligible_surfaces(sentence, emb, stopwords):
            token_id = vocab.get(surface)
            if token_id is None:
                token_id = len(vocab)
                vocab[surface] = token_id
                vectors.append(np.asarray(emb.get(surface), dtype=np.float64))
            grouped[token_id] = grouped.get(token_id, 0.0) + 1.0
        ids.extend(grouped)
        counts.extend(grouped.values())
        offsets.append(len(ids))
    matrix = (
        np.vstack(vectors) if vectors else np.zeros((0, emb.dimension))
    )
    offsets_arr = np.asarray(offsets, dtype=np.int32)
    return _SentenceIndex(
        matrix=matrix,
        ids=np.asarray(ids, dtype=np.int32),
        counts=np.asarray(counts, dtype=np.float64),
        offsets=offsets_arr,
        empty=offsets_arr[1:] == offsets_arr[:-1],
    )


def _directional_sums(dist, a: _SentenceIndex, b: _SentenceIndex) -> np.ndarray:
    return _core.rwmd_directional_sums(
        np.ascontiguousarray(dist), a.ids, a.counts, a.offsets, b.ids, b.offsets
    )


def pairwise_distance_matrix(
    text: TokenizedText,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> np.ndarray:
    """Symmetric distances between all sentence pairs; NaN marks pairs where
    either side has no in-vocabulary content token. The diagonal of
    comparable sentences is exactly 0."""
    index = _index_sentences(text.sentences, emb, stopwords)
    if index.matrix.shape[0]:
        dist = cdist(index.matrix, index.matrix)
    else:
        dist = np.zeros((0, 0))
    directed = _directional_sums(dist, index, index)
    distances = np.maximum(directed, directed.T)
    distances[index.empty, :] = np.nan
    distances[:, index.empty] = np.nan
    return distances


def cross_distance_matrix(
    a_text: TokenizedText,
    b_text: TokenizedText,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> np.ndarray:
    """Symmetric distances between sentences of two texts, shaped
    ``(len(a_text), len(b_text))``; NaN marks incomparable pairs."""
    a = _index_sentences(a_text.sentences, emb, stopwords)
    b = _index_sentences(b_text.sentences, emb, stopwords)
    if a.matrix.shape[0] and b.matrix.shape[0]:
        dist = cdist(a.matrix, b.matrix)
    else:
        dist = np.zeros((a.matrix.shape[0], b.matrix.shape[0]))
    forward = _directional_sums(dist, a, b)
    backward = _directional_sums(dist.T, b, a)
    distances = np.maximum(forward, backward.T)
    distances[a.empty, :] = np.nan
    distances[:, b.empty] = np.nan
    return distances


def rwmd_directional(
    s_i: Sentence,
    s_j: Sentence,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> float | None:
    """Nearest-neighbor transport cost from ``s_i`` onto ``s_j``.

    ``None`` when either sentence has no in-vocabulary content token.
    """
    a = eligible_surfaces(s_i, emb, stopwords)
    b = eligible_surfaces(s_j, emb, stopwords)
    if not a or not b:
        return None
    a_vecs = np.asarray([emb.get(s) for s in a], dtype=np.float64)
    b_vecs = np.asarray([emb.get(s) for s in b], dtype=np.float64)
    return float(cdist(a_vecs, b_vecs).min(axis=1).sum())


def rwmd(
    s_i: Sentence,
    s_j: Sentence,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> float | None:
    """Symmetric relaxed distance: the larger of the two directions."""
    forward = rwmd_directional(s_i, s_j, emb, stopwords)
    if forward is None:
        return None
    backward = rwmd_directional(s_j, s_i, emb, stopwords)
    if backward is None:
        return None
    return max(forward, backward)


TRANSFORMS = ("inverse", "exp")


def distances_to_similarities(
    distances: np.ndarray, transform: str = "inverse", sigma: float = 1.0
) -> np.ndarray:
    """Map distances to (0, 1] similarities; NaN (incomparable) becomes 0."""
    if transform == "inverse":
        values = 1.0 / (1.0 + distances)
    elif transform == "exp":
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        values = np.exp(-distances / sigma)
    else:
        raise ValueError(f"unknown similarity transform {transform!r}")
    values[np.isnan(distances)] = 0.0
    return values


@dataclass
class SimilarityMatrix:
    """Dense sentence similarity graph with the distances kept alongside."""

    values: np.ndarray
    distances: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("similarity values must be finite")
        if values.size:
            if not np.allclose(values, values.T, atol=1e-9):
                raise ValueError("similarity matrix must be symmetric")
            if np.any(values.max(axis=1) > np.diagonal(values) + 1e-9):
                raise ValueError("diagonal must dominate each row")
        self.values = values

    @property
    def n(self) -> int:
        return self.values.shape[0]


def build_similarity_matrix(
    text: TokenizedText,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
    transform: str = "inverse",
    sigma: float = 1.0,
) -> SimilarityMatrix:
    """Similarity graph over a document's sentences.

    Comparable pairs get ``transform`` applied to their distance,
    incomparable pairs get 0, and the diagonal is forced to 1.
    """
    distances = pairwise_distance_matrix(text, emb, stopwords)
    values = distances_to_similarities(distances, transform, sigma)
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(values, distances=distances)

"""Sentence ranking systems: lead, embedding centroid, graph centrality over
relaxed word mover's distances, classic TF-IDF LexRank, and an extractive
oracle guided by reference sentences.

Every system scores all sentences, then selects the top ``k`` (ties go to
the lower index) and reports them in document order. Sentences with no
usable content tokens score 0 and are only selected when nothing else is
left to fill the budget.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import AbstractSet, Sequence

import numpy as np

from .embeddings import (
    EmbeddingTable,
    IdfTable,
    cosine,
    document_embedding,
    document_term_frequencies,
    sentence_embedding,
)
from .errors import DataError
from .rwmd import SimilarityMatrix, build_similarity_matrix, cross_distance_matrix
from .stopwords import DEFAULT_STOPWORDS
from .textproc import TokenizedText, is_content

logger = logging.getLogger(__name__)

DEFAULT_DAMPING = 0.85
DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 200
DEFAULT_LEXRANK_THRESHOLD = 0.1

SENTENCE_BUDGET = "sentences"
TOKEN_BUDGET = "tokens"
NO_BUDGET = "none"


@dataclass(frozen=True)
class RankedSelection:
    """Salience scores for every sentence plus the selected subset.

    ``scores`` lists (sentence_index, salience) for all sentences, sorted by
    salience descending with ties broken by the lower index; ``selected``
    lists the chosen indices in document order.
    """

    scores: tuple[tuple[int, float], ...]
    selected: tuple[int, ...]
    budget_kind: str
    budget_value: int | None

    def __post_init__(self):
        indices = [i for i, _ in self.scores]
        if sorted(indices) != list(range(len(indices))):
            raise ValueError("scores must cover each sentence index exactly once")
        ordering = [(-s, i) for i, s in self.scores]
        if ordering != sorted(ordering):
            raise ValueError("scores must be sorted by descending salience")
        if list(self.selected) != sorted(set(self.selected)):
            raise ValueError("selected indices must be ascending and unique")
        if any(i < 0 or i >= len(indices) for i in self.selected):
            raise ValueError("selected index out of range")
        if self.budget_kind == SENTENCE_BUDGET:
            expected = min(self.budget_value or 0, len(indices))
            if len(self.selected) != expected:
                raise ValueError(
                    f"expected {expected} selected sentences, got {len(self.selected)}"
                )


def _require_sentences(text: TokenizedText, what: str = "document") -> int:
    if not text.sentences:
        raise DataError(f"empty {what}")
    return len(text.sentences)


def _ranked(saliences: Sequence[float]) -> list[int]:
    return sorted(range(len(saliences)), key=lambda i: (-saliences[i], i))


def _select(
    saliences: Sequence[float],
    text: TokenizedText,
    k: int | None,
    token_budget: int | None,
) -> RankedSelection:
    order = _ranked(saliences)
    scores = tuple((i, float(saliences[i])) for i in order)
    if token_budget is not None:
        if token_budget < 1:
            raise ValueError("token budget must be positive")
        chosen: list[int] = []
        total = 0
        for i in order:
            chosen.append(i)
            total += len(text.sentences[i])
            if total >= token_budget:
                break
        return RankedSelection(
            scores, tuple(sorted(chosen)), TOKEN_BUDGET, token_budget
        )
    if k is None or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    chosen = order[: min(k, len(order))]
    return RankedSelection(scores, tuple(sorted(chosen)), SENTENCE_BUDGET, k)


def extract(text: TokenizedText, selection: RankedSelection) -> TokenizedText:
    """The selected sentences, in document order."""
    return TokenizedText(tuple(text.sentences[i] for i in selection.selected))


def lead(
    text: TokenizedText, k: int, token_budget: int | None = None
) -> RankedSelection:
    """Positional baseline: the first sentences of the document."""
    n = _require_sentences(text)
    saliences = [1.0 / (1 + i) for i in range(n)]
    return _select(saliences, text, k, token_budget)


def centroid_rank(
    text: TokenizedText,
    emb: EmbeddingTable,
    idf: IdfTable,
    k: int,
    stopwords: AbstractSet[str] | None = None,
    token_budget: int | None = None,
) -> RankedSelection:
    """Rank sentences by cosine similarity to the document's mean vector."""
    _require_sentences(text)
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    tf = document_term_frequencies(text)
    doc_vector = document_embedding(text, emb, idf, sw)
    saliences = [
        cosine(sentence_embedding(sentence, emb, idf, tf, sw), doc_vector)
        for sentence in text.sentences
    ]
    return _select(saliences, text, k, token_budget)


def pagerank(
    graph: SimilarityMatrix | np.ndarray,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Stationary scores of the column-normalized similarity graph.

    Power iteration with uniform teleport; columns with zero weight spread
    their mass uniformly. Scores are non-negative and sum to 1. Hitting
    ``max_iter`` before the L1 change drops below ``tol`` logs a warning.
    """
    weights = graph.values if isinstance(graph, SimilarityMatrix) else np.asarray(
        graph, dtype=np.float64
    )
    n = weights.shape[0]
    if n == 0:
        raise DataError("pagerank needs a non-empty graph")
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must lie in (0, 1), got {damping}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    column_sums = weights.sum(axis=0)
    dangling = column_sums <= 0.0
    transition = np.zeros_like(weights, dtype=np.float64)
    live = ~dangling
    transition[:, live] = weights[:, live] / column_sums[live]
    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        spread = damping * scores[dangling].sum() / n
        updated = damping * (transition @ scores) + spread + teleport
        updated /= updated.sum()
        change = np.abs(updated - scores).sum()
        scores = updated
        if change < tol:
            break
    else:
        logger.warning(
            "pagerank stopped at max_iter=%d with residual %.3e", max_iter, change
        )
    return scores


def _zero_out(saliences: np.ndarray, dead: np.ndarray) -> list[float]:
    # contentless sentences never outrank real ones
    result = saliences.copy()
    result[dead] = 0.0
    return [float(v) for v in result]


def rwmd_rank(
    text: TokenizedText,
    emb: EmbeddingTable,
    k: int,
    damping: float = DEFAULT_DAMPING,
    stopwords: AbstractSet[str] | None = None,
    transform: str = "inverse",
    sigma: float = 1.0,
    token_budget: int | None = None,
) -> RankedSelection:
    """Graph centrality over pairwise relaxed word mover's distances."""
    _require_sentences(text)
    similarity = build_similarity_matrix(text, emb, stopwords, transform, sigma)
    scores = pagerank(similarity, damping)
    assert similarity.distances is not None
    dead = np.isnan(np.diagonal(similarity.distances))
    return _select(_zero_out(scores, dead), text, k, token_budget)


def lexrank_classic(
    text: TokenizedText,
    idf: IdfTable,
    k: int,
    threshold: float = DEFAULT_LEXRANK_THRESHOLD,
    damping: float = DEFAULT_DAMPING,
    stopwords: AbstractSet[str] | None = None,
    token_budget: int | None = None,
) -> RankedSelection:
    """Classic LexRank: TF-IDF cosine graph, thresholded, then PageRank.

    Edges below ``threshold`` are zeroed but surviving edges keep their
    continuous weight.
    """
    n = _require_sentences(text)
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    vocab: dict[str, int] = {}
    rows = []
    for sentence in text.sentences:
        counts: dict[int, float] = {}
        for token in sentence.tokens:
            if not is_content(token, sw):
                continue
            term = vocab.setdefault(token.surface, len(vocab))
            counts[term] = counts.get(term, 0.0) + 1.0
        rows.append(counts)
    vectors = np.zeros((n, max(len(vocab), 1)))
    idf_values = {term: idf.idf(surface) for surface, term in vocab.items()}
    for i, counts in enumerate(rows):
        for term, count in counts.items():
            vectors[i, term] = count * idf_values[term]
    norms = np.linalg.norm(vectors, axis=1)
    similarities = vectors @ vectors.T
    denom = np.outer(norms, norms)
    with np.errstate(invalid="ignore", divide="ignore"):
        similarities = np.where(denom > 0.0, similarities / denom, 0.0)
    similarities = np.clip((similarities + similarities.T) / 2.0, 0.0, 1.0)
    similarities[similarities < threshold] = 0.0
    scores = pagerank(SimilarityMatrix(similarities), damping)
    dead = norms == 0.0
    return _select(_zero_out(scores, dead), text, k, token_budget)


def oracle(
    text: TokenizedText,
    reference: TokenizedText,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> RankedSelection:
    """For each reference sentence, pick the closest document sentence.

    Ties go to the lower index, duplicates collapse, and incomparable
    reference sentences are skipped with a logged count. A selected
    sentence's salience is the similarity of its best pairing.
    """
    n = _require_sentences(text)
    _require_sentences(reference, "reference")
    distances = cross_distance_matrix(reference, text, emb, stopwords)
    chosen: dict[int, float] = {}
    skipped = 0
    for row in distances:
        if np.all(np.isnan(row)):
            skipped += 1
            continue
        j = int(np.nanargmin(row))
        similarity = 1.0 / (1.0 + float(row[j]))
        chosen[j] = max(chosen.get(j, 0.0), similarity)
    if skipped:
        logger.warning(
            "oracle: skipped %d incomparable reference sentence(s)", skipped
        )
    saliences = [0.0] * n
    for j, similarity in chosen.items():
        saliences[j] = similarity
    order = _ranked(saliences)
    scores = tuple((i, saliences[i]) for i in order)
    return RankedSelection(scores, tuple(sorted(chosen)), NO_BUDGET, None)

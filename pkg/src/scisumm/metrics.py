"""Summary quality metrics: ROUGE-1/2/L, source overlap, and self-repetition.

ROUGE operates on full lowercased token sequences, punctuation included by
default and no stemming applied. Overlap and Repeat operate on sets of
unique content tokens (word-kind tokens outside the stopword list, so
punctuation and number masks never count).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Sequence

import numpy as np

from . import _core
from .errors import DataError
from .running_stats import RunningStats
from .stopwords import DEFAULT_STOPWORDS
from .textproc import Sentence, Token, TokenizedText, TokenKind, is_content

logger = logging.getLogger(__name__)

TokenSource = TokenizedText | Sentence | Sequence[Token]


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float


@dataclass(frozen=True)
class PairScore:
    r1: RougeScore
    r2: RougeScore
    rl: RougeScore
    overlap: float
    repeat: float
    token_count: int


def _tokens_of(source: TokenSource) -> Sequence[Token]:
    if isinstance(source, (TokenizedText, Sentence)):
        return source.tokens
    return source


def _surfaces(source: TokenSource, strip_punctuation: bool) -> list[str]:
    tokens = _tokens_of(source)
    if strip_punctuation:
        return [t.surface for t in tokens if t.kind is not TokenKind.PUNCTUATION]
    return [t.surface for t in tokens]


def _f1(recall: float, precision: float) -> float:
    if recall + precision == 0.0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


def _ngram_counts(surfaces: Sequence[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(
        tuple(surfaces[i : i + n]) for i in range(len(surfaces) - n + 1)
    )


def rouge_n(
    candidate: TokenSource,
    reference: TokenSource,
    n: int,
    strip_punctuation: bool = False,
) -> RougeScore:
    """Clipped n-gram co-occurrence: each reference n-gram matches at most
    as often as it occurs in the candidate."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ref = _surfaces(reference, strip_punctuation)
    if not ref:
        raise DataError("reference must contain at least one token")
    cand = _surfaces(candidate, strip_punctuation)
    ref_counts = _ngram_counts(ref, n)
    cand_counts = _ngram_counts(cand, n)
    matched = sum((ref_counts & cand_counts).values())
    ref_total = sum(ref_counts.values())
    cand_total = sum(cand_counts.values())
    recall = matched / ref_total if ref_total else 0.0
    precision = matched / cand_total if cand_total else 0.0
    return RougeScore(recall, precision, _f1(recall, precision))


def rouge_l(
    candidate: TokenSource,
    reference: TokenSource,
    strip_punctuation: bool = False,
) -> RougeScore:
    """Longest-common-subsequence recall/precision over token sequences."""
    ref = _surfaces(reference, strip_punctuation)
    if not ref:
        raise DataError("reference must contain at least one token")
    cand = _surfaces(candidate, strip_punctuation)
    if not cand:
        return RougeScore(0.0, 0.0, 0.0)
    ids: dict[str, int] = {}
    a = [ids.setdefault(s, len(ids)) for s in cand]
    b = [ids.setdefault(s, len(ids)) for s in ref]
    lcs = _lcs_ids(a, b)
    recall = lcs / len(ref)
    precision = lcs / len(cand)
    return RougeScore(recall, precision, _f1(recall, precision))


def _lcs_ids(a: list[int], b: list[int]) -> int:
    return int(
        _core.lcs_length(
            np.asarray(a, dtype=np.int32), np.asarray(b, dtype=np.int32)
        )
    )


def _content_set(source: TokenSource, stopwords: AbstractSet[str]) -> set[str]:
    return {t.surface for t in _tokens_of(source) if is_content(t, stopwords)}


def overlap(
    candidate: TokenSource,
    source: TokenSource,
    stopwords: AbstractSet[str] | None = None,
) -> float:
    """Fraction of the candidate's unique content tokens found in the source."""
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    cand = _content_set(candidate, sw)
    if not cand:
        logger.warning("overlap: candidate has no content tokens, scoring 0.0")
        return 0.0
    return len(cand & _content_set(source, sw)) / len(cand)


def repeat(
    text: TokenizedText,
    stopwords: AbstractSet[str] | None = None,
) -> float:
    """Mean, over sentences, of the overlap between a sentence and the rest
    of the text. Single-sentence texts score 0; so do empty sentences."""
    if not text.sentences:
        raise DataError("repeat needs at least one sentence")
    if len(text.sentences) == 1:
        return 0.0
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    sentence_sets = [_content_set(s, sw) for s in text.sentences]
    containing: Counter[str] = Counter()
    for tokens in sentence_sets:
        containing.update(tokens)
    total = 0.0
    for tokens in sentence_sets:
        if not tokens:
            continue
        # a token is in the complement when some other sentence contains it
        shared = sum(1 for t in tokens if containing[t] > 1)
        total += shared / len(tokens)
    return total / len(text.sentences)


def score_pair(
    candidate: TokenizedText,
    reference: TokenizedText,
    source: TokenizedText,
    stopwords: AbstractSet[str] | None = None,
    strip_punctuation: bool = False,
) -> PairScore:
    """All metrics for one candidate against its reference and source."""
    if not candidate.sentences:
        raise DataError("candidate summary is empty")
    return PairScore(
        r1=rouge_n(candidate, reference, 1, strip_punctuation),
        r2=rouge_n(candidate, reference, 2, strip_punctuation),
        rl=rouge_l(candidate, reference, strip_punctuation),
        overlap=overlap(candidate, source, stopwords),
        repeat=repeat(candidate, stopwords),
        token_count=candidate.token_count,
    )


_REPORT_FIELDS = (
    "r1_recall", "r1_precision", "r1_f1",
    "r2_recall", "r2_precision", "r2_f1",
    "rl_recall", "rl_precision", "rl_f1",
    "overlap", "repeat", "token_count",
)


@dataclass
class ScoreReport:
    """Mean and population std of every pair-score field, plus the count."""

    pair_count: int
    fields: dict[str, tuple[float, float]]

    def to_dict(self) -> dict:
        payload: dict = {"pair_count": self.pair_count, "meteor": None}
        for name, (mean, std) in self.fields.items():
            payload[name] = {"mean": mean, "std": std}
        return payload

    def format_table(self, label: str = "") -> str:
        rows = [
            ("R-1 f1", "r1_f1"), ("R-2 f1", "r2_f1"), ("R-L f1", "rl_f1"),
            ("R-1 recall", "r1_recall"), ("R-2 recall", "r2_recall"),
            ("R-L recall", "rl_recall"), ("Overlap", "overlap"),
            ("Repeat", "repeat"), ("Token count", "token_count"),
        ]
        lines = []
        if label:
            lines.append(f"system: {label}")
        lines.append(f"pairs: {self.pair_count}")
        lines.append(f"{'metric':<12} {'mean':>10} {'std':>10}")
        for title, key in rows:
            mean, std = self.fields[key]
            lines.append(f"{title:<12} {mean:>10.4f} {std:>10.4f}")
        lines.append("METEOR       not computed (needs external resources)")
        return "\n".join(lines)


def _flatten(score: PairScore) -> dict[str, float]:
    return {
        "r1_recall": score.r1.recall, "r1_precision": score.r1.precision,
        "r1_f1": score.r1.f1,
        "r2_recall": score.r2.recall, "r2_precision": score.r2.precision,
        "r2_f1": score.r2.f1,
        "rl_recall": score.rl.recall, "rl_precision": score.rl.precision,
        "rl_f1": score.rl.f1,
        "overlap": score.overlap, "repeat": score.repeat,
        "token_count": float(score.token_count),
    }


def aggregate_scores(scores: Iterable[PairScore]) -> ScoreReport:
    accumulators = {name: RunningStats() for name in _REPORT_FIELDS}
    count = 0
    for score in scores:
        count += 1
        for name, value in _flatten(score).items():
            accumulators[name].update(value)
    if count == 0:
        raise DataError("no pairs to aggregate")
    return ScoreReport(count, {n: acc.as_tuple() for n, acc in accumulators.items()})


def check_aligned_ids(
    output_ids: Sequence[str],
    reference_ids: AbstractSet[str],
    source_ids: AbstractSet[str],
) -> None:
    """Outputs and references must carry identical id sets; sources must
    cover them. Raises with the first ten offenders."""
    duplicates = [i for i, c in Counter(output_ids).items() if c > 1]
    if duplicates:
        raise DataError(f"duplicate output ids: {sorted(duplicates)[:10]}")
    out_set = set(output_ids)
    problems = []
    for missing in sorted(out_set - reference_ids):
        problems.append(f"{missing} (no reference)")
    for missing in sorted(reference_ids - out_set):
        problems.append(f"{missing} (no output)")
    for missing in sorted(out_set - source_ids):
        problems.append(f"{missing} (no source)")
    if problems:
        shown = ", ".join(problems[:10])
        raise DataError(
            f"{len(problems)} id mismatches between outputs, references, "
            f"and sources: {shown}"
        )


def score_pairs(
    outputs: Mapping[str, TokenizedText],
    references: Mapping[str, TokenizedText],
    sources: Mapping[str, TokenizedText],
    stopwords: AbstractSet[str] | None = None,
    strip_punctuation: bool = False,
) -> tuple[list[tuple[str, PairScore]], ScoreReport]:
    """Score every output against its reference and source, then aggregate."""
    check_aligned_ids(list(outputs), set(references), set(sources))
    per_pair = [
        (
            pair_id,
            score_pair(
                candidate, references[pair_id], sources[pair_id],
                stopwords, strip_punctuation,
            ),
        )
        for pair_id, candidate in outputs.items()
    ]
    return per_pair, aggregate_scores(score for _, score in per_pair)


def pair_score_row(pair_id: str, score: PairScore) -> dict:
    """Per-pair file layout: f1 values under the rouge keys."""
    return {
        "id": pair_id,
        "r1": score.r1.f1,
        "r2": score.r2.f1,
        "rl": score.rl.f1,
        "overlap": score.overlap,
        "repeat": score.repeat,
        "tokens": score.token_count,
    }

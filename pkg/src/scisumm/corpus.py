"""Corpus construction: record reading, length filtering, statistics, and
deterministic dataset splits.

Records arrive as line-delimited JSON objects with ``id``, ``title``,
``abstract``, and optionally ``body`` fields. Filtering tokenizes each field
and applies inclusive token-count bounds; counts include punctuation tokens.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Iterable, Iterator

from .errors import DataError
from .metrics import overlap, repeat
from .running_stats import RunningStats
from .stopwords import DEFAULT_STOPWORDS
from .textproc import (
    TokenizedText,
    as_single_sentence,
    from_plain_text,
    normalize,
    prepare,
    to_plain_text,
)

logger = logging.getLogger(__name__)

ABSTRACT_TOKEN_RANGE = (150, 370)
TITLE_TOKEN_RANGE = (6, 25)
BODY_TOKEN_RANGE = (700, 10000)


class Task(str, Enum):
    TITLE_GEN = "title-gen"
    ABSTRACT_GEN = "abstract-gen"


@dataclass(frozen=True)
class ArticleRecord:
    id: str
    title: str
    abstract: str
    body: str = ""


@dataclass(frozen=True)
class Rejection:
    id: str
    reason: str


@dataclass(frozen=True)
class PairExample:
    id: str
    source: TokenizedText
    target: TokenizedText
    task: Task

    def __post_init__(self):
        if not self.id:
            raise ValueError("pair id must be non-empty")
        if not self.source.sentences or not self.target.sentences:
            raise ValueError(f"pair {self.id}: empty source or target")
        if self.task is Task.TITLE_GEN:
            if len(self.target.sentences) != 1:
                raise ValueError(f"pair {self.id}: title target must be one sentence")
            source_range, target_range = ABSTRACT_TOKEN_RANGE, TITLE_TOKEN_RANGE
        else:
            source_range, target_range = BODY_TOKEN_RANGE, ABSTRACT_TOKEN_RANGE
        for name, text, (lo, hi) in (
            ("source", self.source, source_range),
            ("target", self.target, target_range),
        ):
            count = text.token_count
            if not lo <= count <= hi:
                raise ValueError(
                    f"pair {self.id}: {name} has {count} tokens, outside [{lo}, {hi}]"
                )


def read_records(path: str) -> Iterator[ArticleRecord]:
    """Stream records from a line-delimited JSON file.

    Malformed lines and duplicate ids are skipped with a warning naming the
    line; an unreadable file raises. Ids of yielded records are unique.
    """
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError:
                logger.warning("%s:%d: skipping unparsable line", path, lineno)
                continue
            if not isinstance(payload, dict):
                logger.warning("%s:%d: skipping non-object line", path, lineno)
                continue
            missing = [k for k in ("id", "title", "abstract") if k not in payload]
            if missing:
                logger.warning(
                    "%s:%d: skipping record missing %s", path, lineno,
                    ", ".join(repr(k) for k in missing),
                )
                continue
            record_id = payload["id"]
            fields = (record_id, payload["title"], payload["abstract"],
                      payload.get("body", ""))
            if not all(isinstance(f, str) for f in fields) or not record_id:
                logger.warning("%s:%d: skipping record with bad field types",
                               path, lineno)
                continue
            if record_id in seen:
                logger.warning("%s:%d: skipping duplicate id %r", path, lineno,
                               record_id)
                continue
            seen.add(record_id)
            yield ArticleRecord(*fields)


def _check_range(count: int, bounds: tuple[int, int], field: str) -> str | None:
    lo, hi = bounds
    if count < lo:
        return f"{field}_too_short"
    if count > hi:
        return f"{field}_too_long"
    return None


def filter_pair(record: ArticleRecord, task: Task) -> PairExample | Rejection:
    """Tokenize a record and apply the task's inclusive length bounds.

    The abstract and title bounds apply to both tasks; the body bound only
    matters when the body is the source. The first failing field (abstract,
    then title, then body) names the rejection reason.
    """
    abstract = prepare(record.abstract)
    title = as_single_sentence(normalize(record.title))
    reason = _check_range(abstract.token_count, ABSTRACT_TOKEN_RANGE, "abstract")
    if reason is None:
        reason = _check_range(title.token_count, TITLE_TOKEN_RANGE, "title")
    if reason is None and task is Task.ABSTRACT_GEN:
        body = prepare(record.body)
        reason = _check_range(body.token_count, BODY_TOKEN_RANGE, "body")
    if reason is not None:
        return Rejection(record.id, reason)
    if task is Task.TITLE_GEN:
        return PairExample(record.id, abstract, title, task)
    return PairExample(record.id, body, abstract, task)


@dataclass
class CorpusStats:
    """Welford-aggregated statistics over a pair stream."""

    pair_count: int
    source_tokens: tuple[float, float]
    target_tokens: tuple[float, float]
    source_sentences: tuple[float, float]
    target_sentences: tuple[float, float]
    source_sentence_tokens: tuple[float, float]
    target_sentence_tokens: tuple[float, float]
    overlap: tuple[float, float]
    source_repeat: tuple[float, float]
    target_repeat: tuple[float, float]

    def rows(self) -> list[tuple[str, float, float]]:
        out = [("pair_count", float(self.pair_count), 0.0)]
        for name in (
            "source_tokens", "target_tokens", "source_sentences",
            "target_sentences", "source_sentence_tokens",
            "target_sentence_tokens", "overlap", "source_repeat",
            "target_repeat",
        ):
            mean, std = getattr(self, name)
            out.append((name, mean, std))
        return out

    def to_dict(self) -> dict:
        payload: dict = {"pair_count": self.pair_count}
        for name, mean, std in self.rows()[1:]:
            payload[name] = {"mean": mean, "std": std}
        return payload


def corpus_stats(
    pairs: Iterable[PairExample],
    stopwords: AbstractSet[str] | None = None,
) -> CorpusStats:
    """Token, sentence, overlap, and repetition statistics for a pair stream.

    Per-sentence token counts pool every sentence across the corpus. Raises
    on an empty stream.
    """
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    names = (
        "source_tokens", "target_tokens", "source_sentences",
        "target_sentences", "source_sentence_tokens",
        "target_sentence_tokens", "overlap", "source_repeat", "target_repeat",
    )
    acc = {name: RunningStats() for name in names}
    count = 0
    for pair in pairs:
        count += 1
        acc["source_tokens"].update(pair.source.token_count)
        acc["target_tokens"].update(pair.target.token_count)
        acc["source_sentences"].update(len(pair.source.sentences))
        acc["target_sentences"].update(len(pair.target.sentences))
        for sentence in pair.source.sentences:
            acc["source_sentence_tokens"].update(len(sentence))
        for sentence in pair.target.sentences:
            acc["target_sentence_tokens"].update(len(sentence))
        acc["overlap"].update(overlap(pair.target, pair.source, sw))
        acc["source_repeat"].update(repeat(pair.source, sw))
        acc["target_repeat"].update(repeat(pair.target, sw))
    if count == 0:
        raise DataError("cannot compute statistics for an empty pair stream")
    return CorpusStats(count, **{name: acc[name].as_tuple() for name in names})


def _unit_hash(seed: int, key: str) -> float:
    digest = hashlib.sha256(f"{seed}\x1f{key}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2.0**64


def split_dataset(
    items: Iterable,
    seed: int,
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1),
) -> tuple[list, list, list]:
    """Partition items into train/validation/test by a seeded hash of ``id``.

    The assignment of an item depends only on the seed and its id, so splits
    are reproducible and stable under corpus growth. Fractions must sum to 1.
    """
    if len(fractions) != 3 or any(f < 0 for f in fractions):
        raise ValueError("fractions must be three non-negative numbers")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {sum(fractions)}")
    cut_train = fractions[0]
    cut_valid = fractions[0] + fractions[1]
    buckets: tuple[list, list, list] = ([], [], [])
    for item in items:
        u = _unit_hash(seed, item.id)
        if u < cut_train:
            buckets[0].append(item)
        elif u < cut_valid:
            buckets[1].append(item)
        else:
            buckets[2].append(item)
    return buckets


def pair_to_dict(pair: PairExample) -> dict:
    return {
        "id": pair.id,
        "task": pair.task.value,
        "source": to_plain_text(pair.source),
        "target": to_plain_text(pair.target),
    }


def pair_from_dict(payload: dict) -> PairExample:
    return PairExample(
        id=payload["id"],
        source=from_plain_text(payload["source"]),
        target=from_plain_text(payload["target"]),
        task=Task(payload["task"]),
    )


def write_pairs(path: str, pairs: Iterable[PairExample]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair_to_dict(pair), ensure_ascii=False) + "\n")
            count += 1
    return count


def read_pairs(path: str) -> Iterator[PairExample]:
    """Stream pair examples back; malformed lines are skipped with a warning."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                yield pair_from_dict(payload)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                logger.warning("%s:%d: skipping bad pair line (%s)", path, lineno, exc)

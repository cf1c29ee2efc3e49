"""Where do selected sentences come from? Alignment of generated summaries
back to source sentences, and location histograms over selections."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Sequence, TextIO

import numpy as np

from .embeddings import EmbeddingTable
from .errors import DataError
from .rwmd import cross_distance_matrix
from .textproc import TokenizedText

logger = logging.getLogger(__name__)

NORMALIZED = "normalized"
ABSOLUTE = "absolute"
DEFAULT_NORMALIZED_BINS = 20


@dataclass(frozen=True)
class AlignmentResult:
    """Source sentence index per summary sentence, best matches first kept."""

    indices: tuple[int, ...]
    skipped: int


def align_generated(
    summary: TokenizedText,
    source: TokenizedText,
    emb: EmbeddingTable,
    stopwords: AbstractSet[str] | None = None,
) -> AlignmentResult:
    """Map each summary sentence to its nearest source sentence by relaxed
    word mover's distance; ties go to the lower index. Summary sentences
    with no comparable source sentence are skipped and counted."""
    if not source.sentences:
        raise DataError("cannot align against an empty source")
    if not summary.sentences:
        return AlignmentResult((), 0)
    distances = cross_distance_matrix(summary, source, emb, stopwords)
    indices = []
    skipped = 0
    for row in distances:
        if np.all(np.isnan(row)):
            skipped += 1
            continue
        indices.append(int(np.nanargmin(row)))
    if skipped:
        logger.warning("alignment skipped %d incomparable summary sentence(s)", skipped)
    return AlignmentResult(tuple(indices), skipped)


@dataclass(frozen=True)
class LocationHistogram:
    """Mass per location bin. Normalized mode maps index ``i`` of an
    ``n``-sentence document to ``i / n`` and masses sum to 1; absolute mode
    bins raw indices and masses are plain counts."""

    mode: str
    bin_count: int
    bins: tuple[tuple[float, float], ...]  # (bin_start, mass)

    @property
    def bin_width(self) -> float:
        return 1.0 / self.bin_count if self.mode == NORMALIZED else 1.0

    def masses(self) -> tuple[float, ...]:
        return tuple(mass for _, mass in self.bins)


def selection_histogram(
    selections: Iterable[tuple[Sequence[int], int]],
    mode: str = NORMALIZED,
    bin_count: int | None = None,
) -> LocationHistogram:
    """Histogram selected sentence locations.

    ``selections`` yields (selected indices, source sentence count) entries.
    In absolute mode the default bin count covers the largest index seen and
    larger indices clamp into the last bin.
    """
    if mode not in (NORMALIZED, ABSOLUTE):
        raise ValueError(f"unknown histogram mode {mode!r}")
    if bin_count is not None and bin_count < 1:
        raise ValueError(f"bin count must be positive, got {bin_count}")
    entries: list[tuple[int, int]] = []
    max_index = -1
    for indices, length in selections:
        if length < 1:
            raise DataError(f"source sentence count must be positive, got {length}")
        for index in indices:
            if not 0 <= index < length:
                raise DataError(
                    f"selected index {index} outside document of {length} sentences"
                )
            entries.append((index, length))
            max_index = max(max_index, index)
    if mode == NORMALIZED:
        count = bin_count if bin_count is not None else DEFAULT_NORMALIZED_BINS
        counts = np.zeros(count)
        for index, length in entries:
            counts[min(int(index / length * count), count - 1)] += 1
        total = counts.sum()
        masses = counts / total if total > 0 else counts
        starts = [b / count for b in range(count)]
    else:
        count = bin_count if bin_count is not None else max(max_index + 1, 1)
        counts = np.zeros(count)
        for index, _ in entries:
            counts[min(index, count - 1)] += 1
        masses = counts
        starts = [float(b) for b in range(count)]
    bins = tuple((start, float(mass)) for start, mass in zip(starts, masses))
    return LocationHistogram(mode, count, bins)


def write_histogram_csv(histogram: LocationHistogram, handle: TextIO) -> None:
    """Write ``bin_start,bin_end,mass`` rows."""
    writer = csv.writer(handle)
    writer.writerow(["bin_start", "bin_end", "mass"])
    width = histogram.bin_width
    for start, mass in histogram.bins:
        writer.writerow([f"{start:.6g}", f"{start + width:.6g}", f"{mass:.10g}"])

import io

import numpy as np
import pytest

from scisumm.analysis import (
    ABSOLUTE,
    NORMALIZED,
    align_generated,
    selection_histogram,
    write_histogram_csv,
)
from scisumm.embeddings import EmbeddingTable
from scisumm.errors import DataError
from scisumm.rwmd import rwmd
from scisumm.textproc import from_plain_text

rng = np.random.default_rng(42)

VOCAB = [f"t{i}" for i in range(15)]
EMB = EmbeddingTable(
    6, {t: rng.standard_normal(6).astype(np.float32) for t in VOCAB}
)


def text(*sentences):
    return from_plain_text("\n".join(" ".join(s) for s in sentences))


def test_align_verbatim_sentences_map_exactly(kernel_backend):
    source = text(("t1", "t2"), ("t3", "t4"), ("t5", "t6"), ("t7", "t8"))
    summary = text(("t5", "t6"), ("t1", "t2"))
    result = align_generated(summary, source, EMB, set())
    assert result.indices == (2, 0)
    assert result.skipped == 0


def test_align_matches_brute_force_argmin(kernel_backend):
    gen = np.random.default_rng(3)
    source = text(*[tuple(gen.choice(VOCAB, size=3)) for _ in range(6)])
    summary = text(*[tuple(gen.choice(VOCAB, size=2)) for _ in range(3)])
    result = align_generated(summary, source, EMB, set())
    for row, chosen in enumerate(result.indices):
        distances = [
            rwmd(summary.sentences[row], src, EMB, set())
            for src in source.sentences
        ]
        assert distances[chosen] == min(d for d in distances if d is not None)


def test_align_ties_go_to_lower_index(kernel_backend):
    source = text(("t1", "t2"), ("t1", "t2"))
    summary = text(("t1", "t2"),)
    assert align_generated(summary, source, EMB, set()).indices == (0,)


def test_align_skips_incomparable_sentences(kernel_backend, caplog):
    source = text(("t1", "t2"),)
    summary = text(("zzzoov",), ("t1",))
    with caplog.at_level("WARNING"):
        result = align_generated(summary, source, EMB, set())
    assert result.indices == (0,)
    assert result.skipped == 1
    assert any("skipped 1" in m for m in caplog.messages)


def test_align_empty_inputs(kernel_backend):
    source = text(("t1",))
    assert align_generated(from_plain_text(""), source, EMB, set()).indices == ()
    with pytest.raises(DataError):
        align_generated(source, from_plain_text(""), EMB, set())


def test_normalized_histogram_masses():
    selections = [
        ([0, 5], 10),   # positions 0.0 and 0.5
        ([9], 10),      # position 0.9
        ([2], 4),       # position 0.5
    ]
    hist = selection_histogram(selections, NORMALIZED, bin_count=10)
    assert hist.bin_count == 10
    masses = hist.masses()
    assert masses[0] == pytest.approx(0.25)
    assert masses[5] == pytest.approx(0.5)
    assert masses[9] == pytest.approx(0.25)
    assert sum(masses) == pytest.approx(1.0)
    assert hist.bin_width == pytest.approx(0.1)


def test_normalized_histogram_last_index_clamps_into_final_bin():
    hist = selection_histogram([([6], 7)], NORMALIZED, bin_count=20)
    # 6/7 = 0.857 -> bin 17, never past the end
    assert hist.masses()[17] == 1.0
    full = selection_histogram([([9], 10)], NORMALIZED, bin_count=10)
    assert full.masses()[9] == 1.0


def test_lead_selections_pile_into_first_bin():
    selections = [([0], n) for n in (5, 17, 40, 160)]
    hist = selection_histogram(selections, NORMALIZED)
    assert hist.bin_count == 20
    assert hist.masses()[0] == 1.0


def test_normalized_histogram_defaults_and_empty():
    hist = selection_histogram([], NORMALIZED)
    assert hist.bin_count == 20
    assert sum(hist.masses()) == 0.0


def test_uniform_selections_are_roughly_flat():
    gen = np.random.default_rng(11)
    length = 50
    selections = [([int(gen.integers(0, length))], length) for _ in range(4000)]
    hist = selection_histogram(selections, NORMALIZED, bin_count=10)
    masses = np.array(hist.masses())
    # chi-square against uniform with a generous ceiling
    chi2 = ((masses - 0.1) ** 2 / 0.1).sum() * 4000
    assert chi2 < 30.0


def test_absolute_histogram_counts():
    selections = [([0, 2], 5), ([2], 3)]
    hist = selection_histogram(selections, ABSOLUTE)
    assert hist.mode == ABSOLUTE
    assert hist.bin_count == 3
    assert hist.masses() == (1.0, 0.0, 2.0)
    assert hist.bin_width == 1.0


def test_absolute_histogram_clamps_overflow_into_last_bin():
    hist = selection_histogram([([0], 10), ([7], 10)], ABSOLUTE, bin_count=4)
    assert hist.masses() == (1.0, 0.0, 0.0, 1.0)


def test_histogram_validation():
    with pytest.raises(ValueError):
        selection_histogram([], "sideways")
    with pytest.raises(ValueError):
        selection_histogram([], NORMALIZED, bin_count=0)
    with pytest.raises(DataError):
        selection_histogram([([0], 0)], NORMALIZED)
    with pytest.raises(DataError):
        selection_histogram([([5], 5)], NORMALIZED)
    with pytest.raises(DataError):
        selection_histogram([([-1], 5)], NORMALIZED)


def test_write_histogram_csv():
    hist = selection_histogram([([0, 1], 2)], NORMALIZED, bin_count=2)
    buffer = io.StringIO()
    write_histogram_csv(hist, buffer)
    lines = buffer.getvalue().strip().splitlines()
    assert lines[0] == "bin_start,bin_end,mass"
    assert lines[1] == "0,0.5,0.5"
    assert lines[2] == "0.5,1,0.5"

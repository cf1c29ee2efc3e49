import itertools

import numpy as np
import pytest

from scisumm.embeddings import EmbeddingTable
from scisumm.rwmd import (
    SimilarityMatrix,
    build_similarity_matrix,
    cross_distance_matrix,
    distances_to_similarities,
    eligible_surfaces,
    pairwise_distance_matrix,
    rwmd,
    rwmd_directional,
)
from scisumm.textproc import from_plain_text

rng = np.random.default_rng(42)

VOCAB = [f"t{i}" for i in range(20)]
EMB = EmbeddingTable(
    10, {t: rng.standard_normal(10).astype(np.float32) for t in VOCAB}
)


def sent(*surfaces):
    return from_plain_text(" ".join(surfaces)).sentences[0]


def text(*sentences):
    return from_plain_text("\n".join(" ".join(s) for s in sentences))


def random_sentence(gen, max_tokens=8):
    n = int(gen.integers(1, max_tokens + 1))
    return sent(*gen.choice(VOCAB, size=n, replace=True))


def brute_directional(a, b, emb):
    """Independent double-loop nearest-neighbor sum."""
    a_surfs = eligible_surfaces(a, emb, set())
    b_surfs = eligible_surfaces(b, emb, set())
    if not a_surfs or not b_surfs:
        return None
    total = 0.0
    for x in a_surfs:
        vx = emb.get(x).astype(np.float64)
        total += min(
            float(np.linalg.norm(vx - emb.get(y).astype(np.float64)))
            for y in b_surfs
        )
    return total


def test_directional_matches_brute_force():
    gen = np.random.default_rng(7)
    for _ in range(200):
        a, b = random_sentence(gen), random_sentence(gen)
        got = rwmd_directional(a, b, EMB, set())
        expected = brute_directional(a, b, EMB)
        assert got == pytest.approx(expected, rel=1e-9)


def test_rwmd_symmetric_and_zero_on_identical():
    gen = np.random.default_rng(8)
    for _ in range(50):
        a, b = random_sentence(gen), random_sentence(gen)
        assert rwmd(a, b, EMB, set()) == pytest.approx(
            rwmd(b, a, EMB, set()), rel=1e-12)
        assert rwmd(a, a, EMB, set()) == 0.0


def test_rwmd_zero_on_reordered_multiset():
    a = sent("t1", "t2", "t3")
    b = sent("t3", "t1", "t2")
    assert rwmd(a, b, EMB, set()) == 0.0


def test_directional_is_asymmetric_and_max_merges():
    a = sent("t1")
    b = sent("t1", "t5")
    forward = rwmd_directional(a, b, EMB, set())
    backward = rwmd_directional(b, a, EMB, set())
    assert forward == 0.0
    assert backward > 0.0
    assert rwmd(a, b, EMB, set()) == pytest.approx(backward)


def test_directional_lower_bounds_every_assignment():
    gen = np.random.default_rng(9)
    for _ in range(50):
        a, b = random_sentence(gen, 4), random_sentence(gen, 4)
        relaxed = rwmd_directional(a, b, EMB, set())
        a_surfs = eligible_surfaces(a, EMB, set())
        b_surfs = eligible_surfaces(b, EMB, set())
        for assignment in itertools.product(b_surfs, repeat=len(a_surfs)):
            cost = sum(
                float(np.linalg.norm(
                    EMB.get(x).astype(np.float64)
                    - EMB.get(y).astype(np.float64)))
                for x, y in zip(a_surfs, assignment)
            )
            assert relaxed <= cost + 1e-9


def test_multiset_semantics_counts_repeats():
    once = rwmd_directional(sent("t1"), sent("t2"), EMB, set())
    thrice = rwmd_directional(sent("t1", "t1", "t1"), sent("t2"), EMB, set())
    assert thrice == pytest.approx(3.0 * once, rel=1e-12)


def test_incomparable_sentences_return_none():
    in_vocab = sent("t1", "t2")
    oov = sent("zzzoov", "qqqoov")
    assert rwmd_directional(oov, in_vocab, EMB, set()) is None
    assert rwmd_directional(in_vocab, oov, EMB, set()) is None
    assert rwmd(in_vocab, oov, EMB, set()) is None
    assert rwmd_directional(sent("."), in_vocab, EMB) is None


def test_eligible_surfaces_filters_and_keeps_multiplicity():
    s = sent("t1", "the", "t1", "#", ".", "zzzoov")
    assert eligible_surfaces(s, EMB, {"the"}) == ["t1", "t1"]


def test_pairwise_matrix_matches_scalar(kernel_backend):
    gen = np.random.default_rng(10)
    sentences = [tuple(gen.choice(VOCAB, size=int(gen.integers(1, 6))))
                 for _ in range(7)]
    doc = text(*sentences)
    matrix = pairwise_distance_matrix(doc, EMB, set())
    assert matrix.shape == (7, 7)
    for i, j in itertools.product(range(7), repeat=2):
        scalar = rwmd(doc.sentences[i], doc.sentences[j], EMB, set())
        assert matrix[i, j] == pytest.approx(scalar, rel=1e-9, abs=1e-12)
    np.testing.assert_allclose(matrix, matrix.T)
    np.testing.assert_allclose(np.diagonal(matrix), 0.0)


def test_pairwise_matrix_marks_dead_sentences_nan(kernel_backend):
    doc = text(("t1", "t2"), ("zzzoov",), ("t3",))
    matrix = pairwise_distance_matrix(doc, EMB, set())
    assert np.isnan(matrix[1, :]).all()
    assert np.isnan(matrix[:, 1]).all()
    assert np.isfinite(matrix[0, 2])


def test_cross_matrix_matches_scalar(kernel_backend):
    gen = np.random.default_rng(11)
    a_doc = text(*[tuple(gen.choice(VOCAB, size=3)) for _ in range(4)])
    b_doc = text(*[tuple(gen.choice(VOCAB, size=5)) for _ in range(6)])
    matrix = cross_distance_matrix(a_doc, b_doc, EMB, set())
    assert matrix.shape == (4, 6)
    for i, j in itertools.product(range(4), range(6)):
        scalar = rwmd(a_doc.sentences[i], b_doc.sentences[j], EMB, set())
        assert matrix[i, j] == pytest.approx(scalar, rel=1e-9, abs=1e-12)


def test_backends_agree():
    import scisumm._core as core

    backends = core.available_backends()
    if len(backends) < 2:
        pytest.skip("only one kernel backend available")
    gen = np.random.default_rng(12)
    doc = text(*[tuple(gen.choice(VOCAB, size=int(gen.integers(1, 7))))
                 for _ in range(12)])
    results = {}
    saved = core.active
    try:
        for name, module in backends.items():
            core.active = module
            results[name] = pairwise_distance_matrix(doc, EMB, set())
    finally:
        core.active = saved
    np.testing.assert_allclose(results["python"], results["compiled"],
                               rtol=1e-12, atol=0.0)


def test_distances_to_similarities():
    distances = np.array([[0.0, 1.0], [1.0, np.nan]])
    inverse = distances_to_similarities(distances, "inverse")
    np.testing.assert_allclose(inverse[0], [1.0, 0.5])
    assert inverse[1, 1] == 0.0
    exp = distances_to_similarities(distances, "exp", sigma=2.0)
    assert exp[0, 1] == pytest.approx(np.exp(-0.5))
    assert exp[1, 1] == 0.0
    with pytest.raises(ValueError):
        distances_to_similarities(distances, "exp", sigma=0.0)
    with pytest.raises(ValueError):
        distances_to_similarities(distances, "bogus")


def test_build_similarity_matrix(kernel_backend):
    doc = text(("t1", "t2"), ("zzzoov",), ("t1", "t2"))
    sim = build_similarity_matrix(doc, EMB, set())
    assert sim.n == 3
    np.testing.assert_allclose(np.diagonal(sim.values), 1.0)
    assert sim.values[0, 2] == pytest.approx(1.0)  # identical sentences
    assert sim.values[0, 1] == 0.0  # dead sentence contributes nothing
    assert (sim.values <= 1.0 + 1e-12).all() and (sim.values >= 0.0).all()
    assert sim.distances is not None
    assert np.isnan(sim.distances[1, 0])


def test_similarity_matrix_validation():
    with pytest.raises(ValueError):
        SimilarityMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        SimilarityMatrix(np.array([[1.0, np.inf], [np.inf, 1.0]]))
    with pytest.raises(ValueError):
        SimilarityMatrix(np.array([[1.0, 0.2], [0.4, 1.0]]))  # asymmetric
    with pytest.raises(ValueError):
        # off-diagonal exceeds the diagonal
        SimilarityMatrix(np.array([[0.5, 0.9], [0.9, 0.5]]))
    ok = SimilarityMatrix(np.eye(2))
    assert ok.n == 2


def test_empty_document_matrix(kernel_backend):
    empty = from_plain_text("")
    matrix = pairwise_distance_matrix(empty, EMB, set())
    assert matrix.shape == (0, 0)

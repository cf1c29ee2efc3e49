import numpy as np
import pytest

from scisumm.embeddings import EmbeddingTable, IdfTable, build_idf
from scisumm.errors import DataError
from scisumm.rankers import (
    NO_BUDGET,
    RankedSelection,
    SENTENCE_BUDGET,
    TOKEN_BUDGET,
    centroid_rank,
    extract,
    lead,
    lexrank_classic,
    oracle,
    pagerank,
    rwmd_rank,
)
from scisumm.rwmd import SimilarityMatrix
from scisumm.textproc import from_plain_text

rng = np.random.default_rng(42)

VOCAB = [f"t{i}" for i in range(20)]
EMB = EmbeddingTable(
    8, {t: rng.standard_normal(8).astype(np.float32) for t in VOCAB}
)


def text(*sentences):
    return from_plain_text("\n".join(" ".join(s) for s in sentences))


def dense_pagerank(weights, damping=0.85):
    """Independent linear-system solve of the stationary equations."""
    weights = np.asarray(weights, dtype=np.float64)
    n = weights.shape[0]
    column_sums = weights.sum(axis=0)
    transition = np.full((n, n), 1.0 / n)
    live = column_sums > 0
    transition[:, live] = weights[:, live] / column_sums[live]
    x = np.linalg.solve(
        np.eye(n) - damping * transition, np.full(n, (1.0 - damping) / n)
    )
    return x / x.sum()


def test_pagerank_matches_dense_solve():
    gen = np.random.default_rng(5)
    for _ in range(100):
        n = int(gen.integers(1, 5))
        weights = gen.random((n, n))
        weights[gen.random((n, n)) < 0.3] = 0.0
        scores = pagerank(weights, tol=1e-14)
        np.testing.assert_allclose(scores, dense_pagerank(weights), atol=1e-6)


def test_pagerank_sums_to_one_and_is_nonnegative():
    gen = np.random.default_rng(6)
    for _ in range(20):
        n = int(gen.integers(1, 30))
        scores = pagerank(gen.random((n, n)))
        assert abs(scores.sum() - 1.0) <= 1e-9
        assert (scores >= 0.0).all()


def test_pagerank_uniform_complete_graph_is_exactly_uniform():
    scores = pagerank(np.ones((4, 4)))
    assert (scores == 0.25).all()
    scores = pagerank(np.ones((7, 7)))
    assert (scores == scores[0]).all()


def test_pagerank_scale_invariant():
    gen = np.random.default_rng(7)
    weights = gen.random((6, 6))
    np.testing.assert_allclose(
        pagerank(weights), pagerank(1000.0 * weights), rtol=1e-12
    )


def test_pagerank_handles_dangling_columns():
    weights = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    scores = pagerank(weights, tol=1e-14)
    np.testing.assert_allclose(scores, dense_pagerank(weights), atol=1e-9)


def test_pagerank_accepts_similarity_matrix():
    sim = SimilarityMatrix(np.eye(3))
    np.testing.assert_allclose(pagerank(sim), np.full(3, 1 / 3))


def test_pagerank_validation():
    with pytest.raises(DataError):
        pagerank(np.zeros((0, 0)))
    for bad_damping in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            pagerank(np.ones((2, 2)), damping=bad_damping)
    with pytest.raises(ValueError):
        pagerank(np.ones((2, 2)), max_iter=0)


def test_pagerank_warns_on_max_iter(caplog):
    gen = np.random.default_rng(8)
    with caplog.at_level("WARNING"):
        pagerank(gen.random((10, 10)), tol=0.0, max_iter=3)
    assert any("max_iter" in m for m in caplog.messages)


def test_lead_selects_first_k():
    doc = text(("t1", "t2"), ("t3",), ("t4", "t5"), ("t6",))
    selection = lead(doc, 2)
    assert selection.selected == (0, 1)
    assert selection.budget_kind == SENTENCE_BUDGET
    assert [i for i, _ in selection.scores] == [0, 1, 2, 3]
    saliences = dict(selection.scores)
    assert saliences[0] > saliences[1] > saliences[2] > saliences[3]


def test_lead_k_larger_than_document():
    doc = text(("t1",), ("t2",))
    assert lead(doc, 10).selected == (0, 1)


def test_lead_token_budget():
    doc = text(("t1", "t2"), ("t3",), ("t4", "t5"))
    selection = lead(doc, 1, token_budget=3)
    # 2 tokens after the first sentence, 3 after the second: stop there
    assert selection.selected == (0, 1)
    assert selection.budget_kind == TOKEN_BUDGET
    assert selection.budget_value == 3
    huge = lead(doc, 1, token_budget=10_000)
    assert huge.selected == (0, 1, 2)
    with pytest.raises(ValueError):
        lead(doc, 1, token_budget=0)


def test_lead_validation():
    doc = text(("t1",))
    with pytest.raises(ValueError):
        lead(doc, 0)
    with pytest.raises(DataError):
        lead(from_plain_text(""), 1)


def test_extract_returns_document_order():
    doc = text(("t1",), ("t2",), ("t3",))
    selection = RankedSelection(
        scores=((2, 3.0), (0, 2.0), (1, 1.0)),
        selected=(0, 2),
        budget_kind=SENTENCE_BUDGET,
        budget_value=2,
    )
    surfaces = [s.surfaces for s in extract(doc, selection).sentences]
    assert surfaces == [("t1",), ("t3",)]


def test_ranked_selection_validation():
    with pytest.raises(ValueError):  # missing index coverage
        RankedSelection(((0, 1.0), (0, 0.5)), (0,), SENTENCE_BUDGET, 1)
    with pytest.raises(ValueError):  # not sorted by salience
        RankedSelection(((0, 0.5), (1, 1.0)), (0,), SENTENCE_BUDGET, 1)
    with pytest.raises(ValueError):  # selected not ascending unique
        RankedSelection(((0, 1.0), (1, 0.5)), (1, 1), SENTENCE_BUDGET, 2)
    with pytest.raises(ValueError):  # wrong selection size for the budget
        RankedSelection(((0, 1.0), (1, 0.5)), (0, 1), SENTENCE_BUDGET, 1)
    with pytest.raises(ValueError):  # tie must break toward the lower index
        RankedSelection(((1, 1.0), (0, 1.0)), (0,), SENTENCE_BUDGET, 1)


def test_centroid_rank_single_sentence_scores_one():
    doc = text(("t1", "t2", "t3"))
    idf = build_idf([doc])
    selection = centroid_rank(doc, EMB, idf, 1, set())
    assert selection.selected == (0,)
    assert selection.scores[0][1] == pytest.approx(1.0)


def test_centroid_rank_prefers_central_sentence():
    e = np.eye(4, dtype=np.float32)
    emb = EmbeddingTable(
        4, {"a": e[0], "b": e[1], "c": e[2], "mix": (e[0] + e[1] + e[2]) / 3}
    )
    doc = text(("a",), ("b",), ("mix",), ("c",))
    idf = IdfTable(4, {})
    selection = centroid_rank(doc, emb, idf, 1, set())
    # "mix" sits at the document mean direction
    assert selection.selected == (2,)
    top_index, top_salience = selection.scores[0]
    assert top_index == 2
    assert top_salience == pytest.approx(1.0)


def test_centroid_rank_contentless_sentence_scores_zero():
    doc = text(("t1", "t2"), (".",), ("t3",))
    idf = build_idf([doc])
    selection = centroid_rank(doc, EMB, idf, 3, set())
    saliences = dict(selection.scores)
    assert saliences[1] == 0.0


def test_rwmd_rank_duplicate_sentences_outrank_outlier(kernel_backend):
    doc = text(("t1", "t2"), ("t1", "t2"), ("t19",))
    selection = rwmd_rank(doc, EMB, 2, stopwords=set())
    assert selection.selected == (0, 1)
    saliences = dict(selection.scores)
    assert saliences[0] == pytest.approx(saliences[1], rel=1e-12)
    assert saliences[2] < saliences[0]


def test_rwmd_rank_dead_sentence_scores_zero(kernel_backend):
    doc = text(("t1", "t2"), ("zzzoov",), ("t1", "t3"))
    selection = rwmd_rank(doc, EMB, 2, stopwords=set())
    assert selection.selected == (0, 2)
    assert dict(selection.scores)[1] == 0.0


def test_rwmd_rank_transform_choices(kernel_backend):
    doc = text(("t1", "t2"), ("t3", "t4"), ("t1", "t5"))
    inverse = rwmd_rank(doc, EMB, 1, stopwords=set(), transform="inverse")
    exp = rwmd_rank(doc, EMB, 1, stopwords=set(), transform="exp", sigma=2.0)
    assert len(inverse.scores) == len(exp.scores) == 3
    with pytest.raises(ValueError):
        rwmd_rank(doc, EMB, 1, stopwords=set(), transform="nope")


def lexrank_fixture():
    doc = text(
        ("apple", "banana", "cherry"),
        ("apple", "banana", "date"),
        ("elder", "fennel", "grape"),
        ("apple", "elder", "."),
    )
    idf = build_idf([text(s.surfaces) for s in doc.sentences])
    return doc, idf


def reference_lexrank_scores(doc, idf, threshold, damping=0.85):
    """Independent TF-IDF cosine + threshold + dense solve."""
    vocab = sorted({t.surface for t in doc.tokens if t.surface != "."})
    vectors = np.zeros((len(doc.sentences), len(vocab)))
    for i, sentence in enumerate(doc.sentences):
        for token in sentence.tokens:
            if token.surface == ".":
                continue
            j = vocab.index(token.surface)
            vectors[i, j] += idf.idf(token.surface)
    norms = np.linalg.norm(vectors, axis=1)
    sims = np.zeros((len(vectors), len(vectors)))
    for i in range(len(vectors)):
        for j in range(len(vectors)):
            if norms[i] > 0 and norms[j] > 0:
                sims[i, j] = vectors[i] @ vectors[j] / (norms[i] * norms[j])
    sims[sims < threshold] = 0.0
    return dense_pagerank(sims, damping)


def test_lexrank_matches_independent_computation():
    doc, idf = lexrank_fixture()
    selection = lexrank_classic(doc, idf, 2, threshold=0.1, stopwords=set())
    expected = reference_lexrank_scores(doc, idf, threshold=0.1)
    got = np.empty(4)
    for i, salience in selection.scores:
        got[i] = salience
    np.testing.assert_allclose(got, expected, atol=1e-8)
    assert selection.selected == tuple(sorted(np.argsort(-expected)[:2]))


def test_lexrank_threshold_above_one_degenerates_to_uniform():
    doc, idf = lexrank_fixture()
    selection = lexrank_classic(doc, idf, 2, threshold=1.1, stopwords=set())
    saliences = [s for _, s in selection.scores]
    np.testing.assert_allclose(saliences, 0.25)
    # uniform scores tie-break toward the earliest sentences
    assert selection.selected == (0, 1)


def test_lexrank_contentless_sentence_never_selected():
    doc = text(("apple", "banana"), (".",), ("apple", "cherry"))
    idf = build_idf([doc])
    selection = lexrank_classic(doc, idf, 2, stopwords=set())
    assert selection.selected == (0, 2)
    assert dict(selection.scores)[1] == 0.0


def test_lexrank_stopwords_affect_graph():
    doc = text(("the", "apple"), ("the", "banana"))
    idf = build_idf([doc])
    with_stop = lexrank_classic(doc, idf, 1, stopwords={"the"})
    # sharing only a stopword leaves the sentences disconnected
    saliences = [s for _, s in with_stop.scores]
    np.testing.assert_allclose(saliences, 0.5)


def test_oracle_recovers_verbatim_reference(kernel_backend):
    doc = text(("t1", "t2"), ("t3", "t4"), ("t5", "t6"), ("t7", "t8"))
    reference = text(("t3", "t4"), ("t7", "t8"))
    selection = oracle(doc, reference, EMB, set())
    assert selection.selected == (1, 3)
    assert selection.budget_kind == NO_BUDGET
    saliences = dict(selection.scores)
    assert saliences[1] == pytest.approx(1.0)
    assert saliences[3] == pytest.approx(1.0)


def test_oracle_ties_go_to_lower_index(kernel_backend):
    doc = text(("t1", "t2"), ("t1", "t2"), ("t9",))
    reference = text(("t1", "t2"),)
    selection = oracle(doc, reference, EMB, set())
    assert selection.selected == (0,)


def test_oracle_deduplicates_selections(kernel_backend):
    doc = text(("t1", "t2"), ("t9", "t10"))
    reference = text(("t1",), ("t2",))
    selection = oracle(doc, reference, EMB, set())
    assert selection.selected == (0,)


def test_oracle_skips_incomparable_reference_sentences(kernel_backend, caplog):
    doc = text(("t1", "t2"), ("t3",))
    reference = text(("zzzoov",), ("t3",))
    with caplog.at_level("WARNING"):
        selection = oracle(doc, reference, EMB, set())
    assert selection.selected == (1,)
    assert any("skipped 1" in m for m in caplog.messages)


def test_oracle_empty_inputs_raise(kernel_backend):
    doc = text(("t1",))
    with pytest.raises(DataError):
        oracle(from_plain_text(""), doc, EMB, set())
    with pytest.raises(DataError):
        oracle(doc, from_plain_text(""), EMB, set())

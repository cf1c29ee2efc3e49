"""Extractive summarization toolkit for scientific articles.

Pipeline pieces: text normalization and tokenization (``textproc``), corpus
filtering and statistics (``corpus``), embedding tables and weighted sentence
vectors (``embeddings``), relaxed word mover's distances (``rwmd``), sentence
rankers (``rankers``), summary metrics (``metrics``), selection location
analysis (``analysis``), and a command-line interface (``cli``).
"""

from ._core import BACKEND
from .analysis import (
    AlignmentResult,
    LocationHistogram,
    align_generated,
    selection_histogram,
)
from .corpus import (
    ArticleRecord,
    CorpusStats,
    PairExample,
    Rejection,
    Task,
    corpus_stats,
    filter_pair,
    read_pairs,
    read_records,
    split_dataset,
    write_pairs,
)
from .embeddings import (
    EmbeddingTable,
    IdfTable,
    SentenceEmbedding,
    build_idf,
    document_embedding,
    load_embeddings,
    load_idf,
    save_embeddings,
    save_idf,
    sentence_embedding,
)
from .errors import DataError, EmbeddingFormatError, ScisummError
from .metrics import (
    PairScore,
    RougeScore,
    ScoreReport,
    overlap,
    repeat,
    rouge_l,
    rouge_n,
    score_pairs,
)
from .rankers import (
    RankedSelection,
    centroid_rank,
    extract,
    lead,
    lexrank_classic,
    oracle,
    pagerank,
    rwmd_rank,
)
from .rwmd import SimilarityMatrix, build_similarity_matrix, rwmd, rwmd_directional
from .stopwords import DEFAULT_STOPWORDS
from .textproc import (
    Sentence,
    Token,
    TokenizedText,
    TokenKind,
    is_content,
    normalize,
    prepare,
    split_sentences,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult", "ArticleRecord", "BACKEND", "CorpusStats", "DataError",
    "DEFAULT_STOPWORDS", "EmbeddingFormatError", "EmbeddingTable", "IdfTable",
    "LocationHistogram", "PairExample", "PairScore", "RankedSelection",
    "Rejection", "RougeScore", "ScisummError", "ScoreReport", "Sentence",
    "SentenceEmbedding", "SimilarityMatrix", "Task", "Token", "TokenKind",
    "TokenizedText", "align_generated", "build_idf", "build_similarity_matrix",
    "centroid_rank", "corpus_stats", "document_embedding", "extract",
    "filter_pair", "is_content", "lead", "lexrank_classic", "load_embeddings",
    "load_idf", "normalize", "oracle", "overlap", "pagerank", "prepare",
    "read_pairs", "read_records", "repeat", "rouge_l", "rouge_n", "rwmd",
    "rwmd_directional", "rwmd_rank", "save_embeddings", "save_idf",
    "score_pairs", "selection_histogram", "sentence_embedding",
    "split_dataset", "split_sentences", "write_pairs", "__version__",
]

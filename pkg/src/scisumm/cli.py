"""Command-line interface.

Subcommands: ``preprocess`` (filter raw records into task pairs), ``stats``
(corpus statistics), ``summarize`` (run a ranking system), ``oracle``
(shorthand for the reference-guided system), ``evaluate`` (score system
outputs), and ``histogram`` (selection locations). Exit codes: 0 success,
1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import multiprocessing
import os
import sys
from typing import Iterable, Iterator, Sequence

from . import __version__, _core
from .analysis import (
    ABSOLUTE,
    DEFAULT_NORMALIZED_BINS,
    NORMALIZED,
    align_generated,
    selection_histogram,
    write_histogram_csv,
)
from .corpus import (
    PairExample,
    Rejection,
    Task,
    corpus_stats,
    filter_pair,
    pair_to_dict,
    read_pairs,
    read_records,
)
from .embeddings import build_idf, load_embeddings, load_idf
from .errors import DataError
from .metrics import (
    aggregate_scores,
    check_aligned_ids,
    pair_score_row,
    score_pair,
)
from .rankers import (
    DEFAULT_DAMPING,
    DEFAULT_LEXRANK_THRESHOLD,
    centroid_rank,
    extract,
    lead,
    lexrank_classic,
    oracle,
    rwmd_rank,
)
from .rwmd import TRANSFORMS
from .stopwords import resolve_stopwords
from .textproc import (
    TokenizedText,
    desegment_surfaces,
    from_plain_text,
    prepare,
    to_plain_text,
)

logger = logging.getLogger(__name__)

SYSTEMS = ("lead", "tfidf-emb", "rwmd-rank", "lexrank", "oracle")
_NEEDS_EMBEDDINGS = {"tfidf-emb", "rwmd-rank", "oracle"}
_NEEDS_IDF = {"tfidf-emb", "lexrank"}
_DEFAULT_K = {Task.TITLE_GEN: 1, Task.ABSTRACT_GEN: 10}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _version_string() -> str:
    return f"scisumm {__version__} (kernels: {_core.BACKEND})"


def _build_parser() -> _Parser:
    parser = _Parser(prog="scisumm", description=__doc__)
    parser.add_argument("--version", action="version", version=_version_string())
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed recorded in the run config (default 0)")
    common.add_argument("--stopwords", metavar="F",
                        help="stopword file overriding the built-in list")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("preprocess", parents=[common],
                       help="filter raw records into task pairs")
    p.add_argument("--task", required=True,
                   choices=[t.value for t in Task])
    p.add_argument("--in", dest="in_path", required=True, metavar="F")
    p.add_argument("--out", required=True, metavar="F")
    p.add_argument("--keep-rejects", metavar="F",
                   help="write rejected ids and reasons to this file")

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("--in", dest="in_path", required=True, metavar="F")
    p.add_argument("--json", metavar="F", help="also write statistics as JSON")

    for name, help_text in (
        ("summarize", "rank sentences and emit summaries"),
        ("oracle", "reference-guided extractive upper bound"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "summarize":
            p.add_argument("--system", required=True, choices=SYSTEMS)
            p.add_argument("--k", type=int,
                           help="sentences to select (default: 1 for "
                                "title-gen pairs, 10 for abstract-gen)")
            p.add_argument("--token-budget", type=int, metavar="N",
                           help="stop adding sentences once N tokens are reached")
            p.add_argument("--idf", metavar="F",
                           help="document-frequency table (built from the "
                                "input sources when omitted)")
            p.add_argument("--damping", type=float, default=DEFAULT_DAMPING)
            p.add_argument("--threshold", type=float,
                           default=DEFAULT_LEXRANK_THRESHOLD,
                           help="lexrank edge threshold")
            p.add_argument("--similarity-transform", choices=TRANSFORMS,
                           default="inverse")
            p.add_argument("--sigma", type=float, default=1.0,
                           help="scale for the exp similarity transform")
        p.add_argument("--emb", metavar="F", help="embedding table")
        p.add_argument("--emb-format", choices=("auto", "binary", "text"),
                       default="auto")
        p.add_argument("--in", dest="in_path", required=True, metavar="F")
        p.add_argument("--out", required=True, metavar="F")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="parallel document workers (default: cpu count)")

    p = sub.add_parser("evaluate", parents=[common], help="score system outputs")
    p.add_argument("--system-out", required=True, metavar="F")
    p.add_argument("--refs", required=True, metavar="F")
    p.add_argument("--sources", required=True, metavar="F")
    p.add_argument("--desegment", action="store_true",
                   help="merge @@-suffixed byte-pair tokens before scoring")
    p.add_argument("--ignore-punct", action="store_true",
                   help="drop punctuation tokens from ROUGE")
    p.add_argument("--report", required=True, metavar="F",
                   help="aggregate report (JSON)")
    p.add_argument("--per-pair", metavar="F",
                   help="per-pair scores (default: <report>.pairs.jsonl)")

    p = sub.add_parser("histogram", parents=[common],
                       help="selected sentence location histogram")
    p.add_argument("--selections", metavar="F",
                   help="summarize output file")
    p.add_argument("--generated", metavar="F",
                   help="external summaries to align against sources")
    p.add_argument("--sources", metavar="F")
    p.add_argument("--emb", metavar="F")
    p.add_argument("--emb-format", choices=("auto", "binary", "text"),
                   default="auto")
    p.add_argument("--normalized", action="store_true",
                   help="bin by relative location instead of raw index")
    p.add_argument("--bins", type=int, metavar="N")
    p.add_argument("--out", required=True, metavar="F", help="CSV output")
    return parser


def _run_config(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "command"}
    config["subcommand"] = args.command
    config["version"] = __version__
    config["kernel_backend"] = _core.BACKEND
    return config


def _emit_run_config(args: argparse.Namespace, anchor_path: str | None) -> None:
    config = _run_config(args)
    logger.info("run config: %s", json.dumps(config, sort_keys=True))
    if anchor_path:
        with open(anchor_path + ".run.json", "w", encoding="utf-8") as handle:
            json.dump(config, handle, sort_keys=True, indent=2)
            handle.write("\n")


def _tokenize_field(value: str) -> TokenizedText:
    # newline-joined values come from this package and are already token
    # streams; anything else goes through the full pipeline
    if "\n" in value:
        return from_plain_text(value)
    return prepare(value)


def _text_field(payload: dict, candidates: Sequence[str], path: str) -> str:
    for key in candidates:
        value = payload.get(key)
        if isinstance(value, str):
            return value
    raise DataError(
        f"{path}: record {payload.get('id')!r} has none of the text fields "
        f"{list(candidates)}"
    )


class JsonlIndex:
    """Random access to line-delimited JSON records by their ``id``.

    Only byte offsets stay in memory; records are re-parsed on lookup.
    """

    def __init__(self, path: str):
        self.path = path
        self._offsets: dict[str, int] = {}
        self._handle = open(path, "rb")
        offset = 0
        for line in self._handle:
            stripped = line.strip()
            if stripped:
                try:
                    payload = json.loads(stripped)
                    record_id = payload["id"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    logger.warning("%s: skipping unindexable line at offset %d",
                                   path, offset)
                else:
                    if record_id in self._offsets:
                        logger.warning("%s: duplicate id %r, keeping the first",
                                       path, record_id)
                    else:
                        self._offsets[record_id] = offset
            offset += len(line)

    def ids(self) -> set[str]:
        return set(self._offsets)

    def get(self, record_id: str) -> dict:
        offset = self._offsets[record_id]
        self._handle.seek(offset)
        return json.loads(self._handle.readline())

    def close(self) -> None:
        self._handle.close()


def cmd_preprocess(args: argparse.Namespace) -> int:
    task = Task(args.task)
    accepted = 0
    rejected: dict[str, int] = {}
    reject_handle = open(args.keep_rejects, "w", encoding="utf-8") \
        if args.keep_rejects else None
    try:
        with open(args.out, "w", encoding="utf-8") as out_handle:
            for record in read_records(args.in_path):
                result = filter_pair(record, task)
                if isinstance(result, Rejection):
                    rejected[result.reason] = rejected.get(result.reason, 0) + 1
                    if reject_handle:
                        reject_handle.write(json.dumps(
                            {"id": result.id, "reason": result.reason}) + "\n")
                    continue
                out_handle.write(
                    json.dumps(pair_to_dict(result), ensure_ascii=False) + "\n")
                accepted += 1
    finally:
        if reject_handle:
            reject_handle.close()
    total_rejected = sum(rejected.values())
    logger.info("accepted %d pair(s), rejected %d: %s", accepted, total_rejected,
                json.dumps(rejected, sort_keys=True))
    _emit_run_config(args, args.out)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    stopwords = resolve_stopwords(args.stopwords)
    stats = corpus_stats(read_pairs(args.in_path), stopwords)
    for name, mean, std in stats.rows():
        if name == "pair_count":
            print(f"{name}: {stats.pair_count}")
        else:
            print(f"{name}: {mean:.4f} ± {std:.4f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(stats.to_dict(), handle, sort_keys=True, indent=2)
            handle.write("\n")
    _emit_run_config(args, args.json)
    return EXIT_OK


_WORKER: dict = {}


def _summarize_pair(pair: PairExample) -> str:
    cfg = _WORKER
    system = cfg["system"]
    k = cfg["k"] if cfg["k"] is not None else _DEFAULT_K[pair.task]
    budget = cfg["token_budget"]
    if system == "lead":
        selection = lead(pair.source, k, budget)
    elif system == "tfidf-emb":
        selection = centroid_rank(pair.source, cfg["emb"], cfg["idf"], k,
                                  cfg["stopwords"], budget)
    elif system == "rwmd-rank":
        selection = rwmd_rank(pair.source, cfg["emb"], k, cfg["damping"],
                              cfg["stopwords"], cfg["transform"], cfg["sigma"],
                              budget)
    elif system == "lexrank":
        selection = lexrank_classic(pair.source, cfg["idf"], k,
                                    cfg["threshold"], cfg["damping"],
                                    cfg["stopwords"], budget)
    elif system == "oracle":
        selection = oracle(pair.source, pair.target, cfg["emb"],
                           cfg["stopwords"])
    else:
        raise ValueError(f"unknown system {system!r}")
    row = {
        "id": pair.id,
        "selected_indices": list(selection.selected),
        "scores": [[i, s] for i, s in selection.scores],
        "summary_text": to_plain_text(extract(pair.source, selection)),
    }
    return json.dumps(row, ensure_ascii=False)


def _map_pairs(pairs: Iterable[PairExample], workers: int) -> Iterator[str]:
    if workers <= 1:
        yield from map(_summarize_pair, pairs)
        return
    try:
        context = multiprocessing.get_context("fork")
    except ValueError:
        logger.warning("fork start method unavailable, using a single worker")
        yield from map(_summarize_pair, pairs)
        return
    with context.Pool(workers) as pool:
        yield from pool.imap(_summarize_pair, pairs, chunksize=1)


def cmd_summarize(args: argparse.Namespace) -> int:
    system = getattr(args, "system", "oracle")
    stopwords = resolve_stopwords(args.stopwords)
    emb = None
    if system in _NEEDS_EMBEDDINGS:
        if not args.emb:
            logger.error("system %s requires --emb", system)
            return EXIT_USAGE
        emb = load_embeddings(args.emb, args.emb_format)
        logger.info("loaded %d vectors of dimension %d", len(emb), emb.dimension)
    idf = None
    if system in _NEEDS_IDF:
        if args.idf:
            idf = load_idf(args.idf)
        else:
            logger.info("building document frequencies from input sources")
            idf = build_idf(pair.source for pair in read_pairs(args.in_path))
    token_budget = getattr(args, "token_budget", None)
    if system == "oracle" and token_budget is not None:
        logger.warning("the oracle sizes output by the reference; "
                       "ignoring --token-budget")
        token_budget = None
    _WORKER.clear()
    _WORKER.update(
        system=system,
        k=getattr(args, "k", None),
        token_budget=token_budget,
        emb=emb,
        idf=idf,
        stopwords=stopwords,
        damping=getattr(args, "damping", DEFAULT_DAMPING),
        threshold=getattr(args, "threshold", DEFAULT_LEXRANK_THRESHOLD),
        transform=getattr(args, "similarity_transform", "inverse"),
        sigma=getattr(args, "sigma", 1.0),
    )
    count = 0
    with open(args.out, "w", encoding="utf-8") as out_handle:
        for line in _map_pairs(read_pairs(args.in_path), args.workers):
            out_handle.write(line + "\n")
            count += 1
    if count == 0:
        raise DataError(f"{args.in_path}: no usable pairs")
    logger.info("summarized %d document(s) with %s", count, system)
    _emit_run_config(args, args.out)
    return EXIT_OK


def _candidate_text(payload: dict, path: str, desegment: bool) -> TokenizedText:
    value = _text_field(payload, ("summary_text", "summary", "text"), path)
    if desegment:
        value = "\n".join(
            " ".join(desegment_surfaces(line.split()))
            for line in value.split("\n")
        )
    return _tokenize_field(value)


def cmd_evaluate(args: argparse.Namespace) -> int:
    stopwords = resolve_stopwords(args.stopwords)
    output_ids: list[str] = []
    with open(args.system_out, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                output_ids.append(payload["id"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(
                    f"{args.system_out}:{lineno}: unusable output line ({exc})"
                ) from exc
    refs = JsonlIndex(args.refs)
    sources = JsonlIndex(args.sources)
    try:
        check_aligned_ids(output_ids, refs.ids(), sources.ids())
        per_pair_path = args.per_pair or args.report + ".pairs.jsonl"
        scores = []
        with open(args.system_out, encoding="utf-8") as out_handle, \
                open(per_pair_path, "w", encoding="utf-8") as pair_handle:
            for line in out_handle:
                if not line.strip():
                    continue
                payload = json.loads(line)
                pair_id = payload["id"]
                candidate = _candidate_text(payload, args.system_out,
                                            args.desegment)
                if not candidate.sentences:
                    raise DataError(f"output {pair_id!r} has an empty summary")
                reference = _tokenize_field(_text_field(
                    refs.get(pair_id), ("target", "text", "summary_text"),
                    args.refs))
                source = _tokenize_field(_text_field(
                    sources.get(pair_id), ("source", "text", "body"),
                    args.sources))
                score = score_pair(candidate, reference, source, stopwords,
                                   args.ignore_punct)
                pair_handle.write(json.dumps(pair_score_row(pair_id, score))
                                  + "\n")
                scores.append(score)
    finally:
        refs.close()
        sources.close()
    report = aggregate_scores(scores)
    with open(args.report, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, sort_keys=True, indent=2)
        handle.write("\n")
    print(report.format_table(label=os.path.basename(args.system_out)))
    _emit_run_config(args, args.report)
    return EXIT_OK


def _selection_stream(path: str) -> Iterator[tuple[list[int], int]]:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                yield payload["selected_indices"], len(payload["scores"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(
                    f"{path}:{lineno}: unusable selection line ({exc})"
                ) from exc


def _alignment_stream(args: argparse.Namespace,
                      stopwords) -> Iterator[tuple[list[int], int]]:
    emb = load_embeddings(args.emb, args.emb_format)
    sources = JsonlIndex(args.sources)
    skipped = 0
    try:
        with open(args.generated, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    payload = json.loads(line)
                    pair_id = payload["id"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise DataError(
                        f"{args.generated}:{lineno}: unusable line ({exc})"
                    ) from exc
                if pair_id not in sources.ids():
                    raise DataError(f"{args.generated}: id {pair_id!r} "
                                    f"missing from {args.sources}")
                summary = _candidate_text(payload, args.generated, False)
                source = _tokenize_field(_text_field(
                    sources.get(pair_id), ("source", "text", "body"),
                    args.sources))
                if not source.sentences:
                    raise DataError(f"source {pair_id!r} is empty")
                result = align_generated(summary, source, emb, stopwords)
                skipped += result.skipped
                yield list(result.indices), len(source.sentences)
    finally:
        sources.close()
    if skipped:
        logger.warning("alignment skipped %d sentence(s) in total", skipped)


def cmd_histogram(args: argparse.Namespace) -> int:
    if bool(args.selections) == bool(args.generated):
        logger.error("provide exactly one of --selections or --generated")
        return EXIT_USAGE
    if args.generated and not (args.sources and args.emb):
        logger.error("--generated requires --sources and --emb")
        return EXIT_USAGE
    stopwords = resolve_stopwords(args.stopwords)
    if args.selections:
        stream = _selection_stream(args.selections)
    else:
        stream = _alignment_stream(args, stopwords)
    mode = NORMALIZED if args.normalized else ABSOLUTE
    bins = args.bins
    if bins is None and mode == NORMALIZED:
        bins = DEFAULT_NORMALIZED_BINS
    histogram = selection_histogram(stream, mode, bins)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        write_histogram_csv(histogram, handle)
    logger.info("wrote %d %s bins to %s", histogram.bin_count, mode, args.out)
    _emit_run_config(args, args.out)
    return EXIT_OK


_COMMANDS = {
    "preprocess": cmd_preprocess,
    "stats": cmd_stats,
    "summarize": cmd_summarize,
    "oracle": cmd_summarize,
    "evaluate": cmd_evaluate,
    "histogram": cmd_histogram,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())

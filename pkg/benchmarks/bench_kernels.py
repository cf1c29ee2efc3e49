"""Compare the compiled and pure-Python kernel backends.

Two workloads drive the hot paths:

* ``rwmd-matrix``: the full pairwise sentence-distance matrix of a
  single document (vocabulary distance matrix plus directional
  nearest-neighbor sums). Timed through the public
  ``pairwise_distance_matrix`` entry point with the backend swapped.
* ``lcs``: longest-common-subsequence lengths over batches of random
  id sequences, timed at the kernel boundary.

Run from the repository root::

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sentences 300 --dim 300
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import scisumm._core as core
from scisumm.rwmd import pairwise_distance_matrix
from scisumm.sampledata import synthetic_embeddings
from scisumm.textproc import from_plain_text


def build_document(sentences, tokens, vocab_size, dim, seed):
    gen = np.random.default_rng(seed)
    vocab = [f"w{i}" for i in range(vocab_size)]
    emb = synthetic_embeddings(vocab, dim=dim, seed=seed)
    lines = [
        " ".join(gen.choice(vocab, size=tokens)) for _ in range(sentences)
    ]
    return from_plain_text("\n".join(lines)), emb


def build_id_pairs(pairs, seq_len, seed):
    gen = np.random.default_rng(seed)
    return [
        (
            gen.integers(0, 50, size=seq_len).astype(np.int32),
            gen.integers(0, 50, size=seq_len).astype(np.int32),
        )
        for _ in range(pairs)
    ]


def build_csr_inputs(sentences, tokens, vocab_size, seed):
    gen = np.random.default_rng(seed)
    dist = gen.random((vocab_size, vocab_size))
    ids = gen.integers(0, vocab_size, size=sentences * tokens)
    offsets = np.arange(0, sentences * tokens + 1, tokens)
    return (
        dist,
        ids.astype(np.int32),
        np.ones(len(ids)),
        offsets.astype(np.int32),
        ids.astype(np.int32),
        offsets.astype(np.int32),
    )


def best_of(repeats, fn):
    timings = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - started)
    return min(timings)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sentences", type=int, default=172)
    parser.add_argument("--tokens", type=int, default=26)
    parser.add_argument("--vocab", type=int, default=800)
    parser.add_argument("--dim", type=int, default=200)
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--seq-len", type=int, default=250)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = core.available_backends()
    if "compiled" not in backends:
        print("note: compiled extension not built; timing python only")

    doc, emb = build_document(
        args.sentences, args.tokens, args.vocab, args.dim, args.seed
    )
    id_pairs = build_id_pairs(args.pairs, args.seq_len, args.seed)
    csr = build_csr_inputs(args.sentences, args.tokens, args.vocab, args.seed)

    workloads = {
        f"rwmd-matrix ({args.sentences} sentences, dim {args.dim})":
            lambda module: pairwise_distance_matrix(doc, emb),
        f"rwmd-sums kernel ({args.sentences}x{args.sentences} pairs)":
            lambda module: module.rwmd_directional_sums(*csr),
        f"lcs ({args.pairs} pairs of {args.seq_len} ids)":
            lambda module: [
                module.lcs_length(a, b) for a, b in id_pairs
            ],
    }

    original = core.active
    results: dict[str, dict[str, float]] = {}
    try:
        for name, module in sorted(backends.items()):
            core.active = module
            for label, fn in workloads.items():
                results.setdefault(label, {})[name] = best_of(
                    args.repeats, lambda fn=fn, module=module: fn(module)
                )
    finally:
        core.active = original

    width = max(len(label) for label in results)
    header = f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  speedup"
    print(header)
    print("-" * len(header))
    for label, timing in results.items():
        python_s = timing["python"]
        if "compiled" in timing:
            compiled_s = timing["compiled"]
            ratio = python_s / compiled_s if compiled_s else float("inf")
            print(f"{label:<{width}}  {python_s:>9.4f}s  "
                  f"{compiled_s:>9.4f}s  {ratio:>6.1f}x")
        else:
            print(f"{label:<{width}}  {python_s:>9.4f}s  {'-':>10}  {'-':>7}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

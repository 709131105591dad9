"""Benchmark the embedding trainer's numba kernel against the numpy fallback.

The backend is normally chosen at import time via the POOLSCOPE_NUMBA env
flag; here both implementations are timed on the same corpus and draws.

Usage: python benchmarks/bench_embed.py [n_graphs] [feats_per_graph]
"""

import sys
import time
from collections import Counter

import numpy as np

from poolscope.embed import TrainConfig, train_embeddings
from poolscope.embed import _kernels


def build_corpus(n_graphs, feats_per_graph, groups=3, seed=0):
    rng = np.random.default_rng(seed)
    corpora = {}
    for g in range(n_graphs):
        tokens = [f"G{g % groups}F{t}" for t in range(40)]
        counts = Counter()
        for _ in range(feats_per_graph):
            counts[tokens[int(rng.integers(len(tokens)))]] += 1
        corpora[f"lt{g:04d}"] = counts
    return corpora


def time_backend(kernel, corpora, cfg):
    previous = _kernels.sgns_chunk
    _kernels.sgns_chunk = kernel
    try:
        train_embeddings(corpora, cfg)  # warm-up (JIT compile, caches)
        started = time.perf_counter()
        train_embeddings(corpora, cfg)
        return time.perf_counter() - started
    finally:
        _kernels.sgns_chunk = previous


def main():
    n_graphs = int(sys.argv[1]) if len(sys.argv) > 1 else 120
    feats = int(sys.argv[2]) if len(sys.argv) > 2 else 800
    corpora = build_corpus(n_graphs, feats)
    positions = sum(sum(c.values()) for c in corpora.values())
    cfg = TrainConfig(epochs=10, rng_seed=0)
    print(f"corpus: {n_graphs} graphs, {positions} positions, dim={cfg.dim}, "
          f"epochs={cfg.epochs}")

    t_numpy = time_backend(_kernels.sgns_chunk_numpy, corpora, cfg)
    print(f"numpy fallback : {t_numpy:8.3f} s  "
          f"({positions * cfg.epochs / t_numpy / 1e6:6.2f} M pos/s)")

    if _kernels.sgns_chunk_numba is None:
        print("numba kernel   : unavailable (numba missing or disabled)")
        return
    t_numba = time_backend(_kernels.sgns_chunk_numba, corpora, cfg)
    print(f"numba kernel   : {t_numba:8.3f} s  "
          f"({positions * cfg.epochs / t_numba / 1e6:6.2f} M pos/s)")
    print(f"speedup        : {t_numpy / t_numba:8.1f} x")


if __name__ == "__main__":
    main()

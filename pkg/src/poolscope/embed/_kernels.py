"""Hot training loop for the whole-graph embedder.

Two interchangeable implementations of one epoch-chunk of negative-sampling
SGD: a numba ``@njit`` kernel and a pure-numpy fallback with identical
control flow.  The active backend is chosen at import time by the
``POOLSCOPE_NUMBA`` environment variable ("0"/"false"/"off" forces the numpy
path) and degrades to numpy automatically when numba is unavailable.  All
random draws are generated by the caller and passed in, so both backends
consume identical streams.

``benchmarks/bench_embed.py`` compares the two paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

ENV_FLAG = "POOLSCOPE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(ENV_FLAG, "1").strip().lower() not in ("0", "false", "off", "no")


def sgns_chunk_numpy(
    graph_vecs: np.ndarray,
    feat_vecs: np.ndarray,
    pos_graph: np.ndarray,
    pos_feat: np.ndarray,
    discard_p: np.ndarray,
    noise_cum: np.ndarray,
    sub_u: np.ndarray,
    neg_u: np.ndarray,
    lr: float,
) -> float:
    """One pass over a chunk of (graph, feature) positions, in place.

    For each retained position the feature acts as the positive target and
    ``neg_u.shape[1]`` negatives are drawn from the cumulative noise table;
    negatives colliding with the positive are skipped.  Graph-vector
    gradients accumulate across the position's targets and are applied once.
    Returns the summed negative log-likelihood.
    """
    n_neg = neg_u.shape[1]
    loss = 0.0
    for i in range(pos_graph.shape[0]):
        f = pos_feat[i]
        if sub_u[i] < discard_p[f]:
            continue
        g = pos_graph[i]
        v = graph_vecs[g]
        work = np.zeros_like(v)
        for t in range(n_neg + 1):
            if t == 0:
                target = f
                label = 1.0
            else:
                target = int(np.searchsorted(noise_cum, neg_u[i, t - 1], side="right"))
                if target == f:
                    continue
                label = 0.0
            u = feat_vecs[target]
            dot = float(v @ u)
            if dot > 500.0:
                dot = 500.0
            elif dot < -500.0:
                dot = -500.0
            s = 1.0 / (1.0 + math.exp(-dot))
            grad = lr * (label - s)
            work += grad * u
            feat_vecs[target] += grad * v
            p = s if label == 1.0 else 1.0 - s
            loss -= math.log(p if p > 1e-12 else 1e-12)
        graph_vecs[g] += work
    return loss


def _sgns_chunk_loops(
    graph_vecs, feat_vecs, pos_graph, pos_feat, discard_p, noise_cum, sub_u, neg_u, lr
):
    # Same algorithm as sgns_chunk_numpy, written with scalar loops so numba
    # can compile it to machine code.
    n_pos = pos_graph.shape[0]
    n_neg = neg_u.shape[1]
    dim = graph_vecs.shape[1]
    work = np.zeros(dim)
    loss = 0.0
    for i in range(n_pos):
        f = pos_feat[i]
        if sub_u[i] < discard_p[f]:
            continue
        g = pos_graph[i]
        for d in range(dim):
            work[d] = 0.0
        for t in range(n_neg + 1):
            if t == 0:
                target = f
                label = 1.0
            else:
                target = np.searchsorted(noise_cum, neg_u[i, t - 1], side="right")
                if target == f:
                    continue
                label = 0.0
            dot = 0.0
            for d in range(dim):
                dot += graph_vecs[g, d] * feat_vecs[target, d]
            if dot > 500.0:
                dot = 500.0
            elif dot < -500.0:
                dot = -500.0
            s = 1.0 / (1.0 + math.exp(-dot))
            grad = lr * (label - s)
            for d in range(dim):
                work[d] += grad * feat_vecs[target, d]
                feat_vecs[target, d] += grad * graph_vecs[g, d]
            p = s if label == 1.0 else 1.0 - s
            if p < 1e-12:
                p = 1e-12
            loss -= math.log(p)
        for d in range(dim):
            graph_vecs[g, d] += work[d]
    return loss


sgns_chunk_numba = None
if _numba_requested():
    try:
        from numba import njit

        sgns_chunk_numba = njit(cache=True, nogil=True)(_sgns_chunk_loops)
    except ImportError:
        sgns_chunk_numba = None

if sgns_chunk_numba is not None:
    sgns_chunk = sgns_chunk_numba
    BACKEND = "numba"
else:
    sgns_chunk = sgns_chunk_numpy
    BACKEND = "numpy"

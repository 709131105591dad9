"""Whole-graph embedding trainer (distributed bag of WL features).

Each graph owns a trainable vector; WL feature tokens own output vectors.
Training maximises log-sigmoid affinity between a graph vector and each of
its feature occurrences against noise features sampled proportionally to
count^0.75, with the standard frequency-based subsampling of very common
features.  Single-worker mode is deterministic for a fixed seed; more
workers trade determinism for throughput via lock-free shared updates.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels

_INIT_TAG = 0x1A17
_EPOCH_TAG = 0x5EED
_DRAW_CHUNK = 1 << 20  # fixed so the draw stream is independent of data size


class TrainingDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 16
    epochs: int = 10
    initial_lr: float = 0.025
    min_feature_count: int = 5
    downsample_rate: float = 1e-4
    wl_depth: int = 1
    negatives_per_positive: int = 5
    rng_seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.wl_depth != 1:
            raise ValueError("wl_depth is fixed to 1")
        if min(self.dim, self.initial_lr, self.min_feature_count,
               self.downsample_rate, self.negatives_per_positive, self.workers) <= 0:
            raise ValueError("config values must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


@dataclass
class EmbeddingMatrix:
    lt_ids: list[str]
    vectors: np.ndarray  # (n_graphs, dim)
    vocab: list[str]
    vocab_counts: np.ndarray
    feature_vectors: np.ndarray  # (n_vocab, dim)

    def row(self, lt_id: str) -> np.ndarray:
        return self.vectors[self.lt_ids.index(lt_id)]


def _init_graph_vectors(n_graphs: int, cfg: TrainConfig) -> np.ndarray:
    """Seeded uniform init in [-0.5/dim, 0.5/dim), one substream per row."""
    vecs = np.empty((n_graphs, cfg.dim))
    for idx in range(n_graphs):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.rng_seed, _INIT_TAG, idx]))
        vecs[idx] = (rng.random(cfg.dim) - 0.5) / cfg.dim
    return vecs


def _build_vocab(corpora: dict[str, Counter], min_count: int):
    totals: Counter[str] = Counter()
    for feats in corpora.values():
        totals.update(feats)
    vocab = sorted(tok for tok, c in totals.items() if c >= min_count)
    if not vocab:
        raise ValueError(
            f"vocabulary is empty after pruning features with count < {min_count}"
        )
    counts = np.array([totals[tok] for tok in vocab], dtype=np.int64)
    return vocab, counts


def _positions(corpora: dict[str, Counter], lt_ids: list[str], index: dict[str, int]):
    """Expand corpus multisets to (graph row, feature id) arrays.

    Within each graph, occurrences are laid out in ascending feature id so
    the training sequence is independent of how the multiset was built.
    """
    rows: list[int] = []
    feats: list[int] = []
    for g_idx, lt in enumerate(lt_ids):
        items = sorted(
            (index[tok], count) for tok, count in corpora[lt].items() if tok in index
        )
        for f_idx, count in items:
            rows.extend([g_idx] * count)
            feats.extend([f_idx] * count)
    return np.array(rows, dtype=np.int64), np.array(feats, dtype=np.int64)


def train_embeddings(corpora: dict[str, Counter], cfg: TrainConfig) -> EmbeddingMatrix:
    """Train per-graph vectors from WL-feature multisets.

    ``corpora`` maps lt_id -> feature multiset; rows of the result follow
    sorted lt_id order.  With ``cfg.workers == 1`` the output is bit-identical
    across runs for a fixed ``cfg.rng_seed``; with more workers, chunks of
    positions race on the shared parameter arrays (hogwild style) and
    reproducibility is not guaranteed.

    Raises TrainingDiverged when the epoch loss or the parameters stop being
    finite.
    """
    if len(corpora) < 2:
        raise ValueError("need at least 2 graphs to embed")
    lt_ids = sorted(corpora)
    vocab, counts = _build_vocab(corpora, cfg.min_feature_count)
    index = {tok: i for i, tok in enumerate(vocab)}

    pos_graph, pos_feat = _positions(corpora, lt_ids, index)
    n_pos = pos_graph.shape[0]

    noise = counts.astype(np.float64) ** 0.75
    noise_cum = np.cumsum(noise / noise.sum())
    noise_cum[-1] = 1.0

    # Classic subsampling rule: a feature with corpus frequency f above the
    # rate t is dropped with probability 1 - sqrt(t / f).
    freq = counts / max(n_pos, 1)
    discard_p = np.where(
        freq > cfg.downsample_rate, 1.0 - np.sqrt(cfg.downsample_rate / freq), 0.0
    )

    graph_vecs = _init_graph_vectors(len(lt_ids), cfg)
    feat_vecs = np.zeros((len(vocab), cfg.dim))

    lr_floor = cfg.initial_lr / 10.0
    for epoch in range(cfg.epochs):
        if cfg.epochs > 1:
            lr = cfg.initial_lr - (cfg.initial_lr - lr_floor) * epoch / (cfg.epochs - 1)
        else:
            lr = cfg.initial_lr
        rng = np.random.default_rng(
            np.random.SeedSequence([cfg.rng_seed, _EPOCH_TAG, epoch])
        )
        loss = 0.0
        for start in range(0, n_pos, _DRAW_CHUNK):
            stop = min(start + _DRAW_CHUNK, n_pos)
            sub_u = rng.random(stop - start)
            neg_u = rng.random((stop - start, cfg.negatives_per_positive))
            loss += _run_chunk(
                graph_vecs, feat_vecs,
                pos_graph[start:stop], pos_feat[start:stop],
                discard_p, noise_cum, sub_u, neg_u, lr, cfg.workers,
            )
        if not math.isfinite(loss) or not np.all(np.isfinite(graph_vecs)):
            raise TrainingDiverged(
                f"non-finite loss at epoch {epoch} (lr={lr:.5f}, loss={loss})"
            )
    return EmbeddingMatrix(
        lt_ids=lt_ids,
        vectors=graph_vecs,
        vocab=vocab,
        vocab_counts=counts,
        feature_vectors=feat_vecs,
    )


def _run_chunk(
    graph_vecs, feat_vecs, pos_graph, pos_feat, discard_p, noise_cum, sub_u, neg_u,
    lr, workers,
) -> float:
    if workers == 1 or pos_graph.shape[0] < 2 * workers:
        return _kernels.sgns_chunk(
            graph_vecs, feat_vecs, pos_graph, pos_feat,
            discard_p, noise_cum, sub_u, neg_u, lr,
        )
    bounds = np.linspace(0, pos_graph.shape[0], workers + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(
                _kernels.sgns_chunk,
                graph_vecs, feat_vecs,
                pos_graph[a:b], pos_feat[a:b],
                discard_p, noise_cum, sub_u[a:b], neg_u[a:b], lr,
            )
            for a, b in zip(bounds, bounds[1:])
            if b > a
        ]
        return sum(f.result() for f in futures)

"""Per-LT transaction graphs and time-weighted neighbourhood sampling.

A liquidity taker's swaps form a complete graph whose edge weights are the
elapsed seconds between two swaps.  The graph is never materialised: weights
come straight from the timestamp vector, keeping memory linear in the swap
count.  Neighbourhoods are sampled by comparing uniform draws against a
half-normal cut value, so tightly clustered activity survives while long
gaps are almost surely dropped.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..events import EventLog, TimeWindow


@dataclass(frozen=True)
class CutParams:
    """Extremes of one graph's edge weights plus its node count."""

    min_w: float
    max_w: float
    n_nodes: int

    def __post_init__(self) -> None:
        if self.min_w > self.max_w:
            raise ValueError("min_w must not exceed max_w")
        if self.min_w < 0:
            raise ValueError("weights are elapsed seconds, must be >= 0")
        if self.n_nodes < 2:
            raise ValueError("a transaction graph needs at least 2 nodes")


def cut_value(w: float, p: CutParams) -> float:
    """Probability of keeping an edge of weight ``w``.

    A half-normal shifted to the graph's shortest edge and scaled by
    max_w / n_nodes, normalised so the shortest edge is always kept.  When
    every swap is simultaneous (max_w == 0) the value is defined as 1.
    """
    if not (p.min_w <= w <= p.max_w):
        raise ValueError(f"w={w} outside [{p.min_w}, {p.max_w}]")
    scale = p.max_w / p.n_nodes
    if scale == 0:  # all swaps simultaneous (or max_w denormal-small)
        return 1.0
    scaled = (w - p.min_w) / scale
    return math.exp(-0.5 * scaled * scaled)


def _cut_values(weights: np.ndarray, p: CutParams) -> np.ndarray:
    scale = p.max_w / p.n_nodes
    if scale == 0:
        return np.ones_like(weights, dtype=float)
    scaled = (weights - p.min_w) / scale
    return np.exp(-0.5 * scaled * scaled)


@dataclass
class TransactionGraph:
    """Complete weighted graph of one LT's swaps; weights are |Δt| seconds."""

    lt_id: str
    timestamps: np.ndarray  # int64, sorted ascending
    labels: list[str]  # pool label per node, shared global alphabet

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.timestamps):
            raise ValueError("one label per node required")
        if len(self.labels) < 2:
            raise ValueError("a transaction graph needs at least 2 nodes")

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    def cut_params(self) -> CutParams:
        # Timestamps are sorted, so the extreme pairwise gaps are the smallest
        # consecutive difference and the full span; no n x n matrix needed.
        ts = np.asarray(self.timestamps, dtype=np.int64)
        return CutParams(float(np.diff(ts).min()), float(ts[-1] - ts[0]), len(ts))


def _lt_digest(lt_id: str) -> int:
    return int.from_bytes(hashlib.blake2b(lt_id.encode(), digest_size=8).digest(), "big")


def sample_neighbourhoods(g: TransactionGraph, seed: int) -> list[np.ndarray]:
    """Sampled neighbour indices for every node, deterministic given the seed.

    For node ``s`` the uniform draws come from a substream keyed by
    (seed, lt_id, node index), consumed in ascending order of the candidate
    index ``r`` (skipping ``r == s``); ``r`` joins the neighbourhood when its
    draw falls below the cut value of edge (s, r).  Keying by lt_id and node
    index makes the result independent of corpus ordering.
    """
    ts = np.asarray(g.timestamps, dtype=np.float64)
    n = g.n_nodes
    params = g.cut_params()
    digest = _lt_digest(g.lt_id)
    neighbourhoods: list[np.ndarray] = []
    for i in range(n):
        weights = np.abs(ts - ts[i])
        cuts = np.delete(_cut_values(weights, params), i)
        rng = np.random.default_rng(np.random.SeedSequence([seed, digest, i]))
        u = rng.random(n - 1)
        picked = np.flatnonzero(u < cuts)
        # map positions back to node indices (slot i was removed)
        picked = np.where(picked >= i, picked + 1, picked)
        neighbourhoods.append(picked.astype(np.int64))
    return neighbourhoods


def filter_lts(
    log: EventLog,
    pools: set[str],
    w: TimeWindow,
    min_txns: int,
    max_txns: int,
) -> set[str]:
    """Origins whose swap count on the pool set within the window lies in
    [min_txns, max_txns], both bounds inclusive."""
    if min_txns < 2:
        raise ValueError("min_txns must be >= 2 (graphs need two nodes)")
    if min_txns > max_txns:
        raise ValueError("min_txns must not exceed max_txns")
    counts: Counter[str] = Counter()
    for s in log.swaps:
        if s.pool_id in pools and w.contains(s.timestamp):
            counts[s.origin] += 1
    return {lt for lt, c in counts.items() if min_txns <= c <= max_txns}


def build_transaction_graph(
    log: EventLog, lt_id: str, pools: set[str], w: TimeWindow
) -> TransactionGraph:
    """Assemble one LT's swaps on the pool set within the window into a graph."""
    swaps = [
        s
        for s in log.swaps
        if s.origin == lt_id and s.pool_id in pools and w.contains(s.timestamp)
    ]
    swaps.sort(key=lambda s: (s.timestamp, s.txn_id, s.log_index))
    if len(swaps) < 2:
        raise ValueError(f"LT {lt_id!r} has fewer than 2 swaps in window {w.label!r}")
    return TransactionGraph(
        lt_id=lt_id,
        timestamps=np.array([s.timestamp for s in swaps], dtype=np.int64),
        labels=[s.pool_id for s in swaps],
    )

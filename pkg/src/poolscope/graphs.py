"""Pool interconnection graphs, bridge-flow extraction, and centrality.

Pool similarity is the count of common agents (taker or provider role,
wallet or contract identity) active on both pools in a window.  Bridge flow
links pools through tokens bought in one pool and immediately sold in
another inside a single multi-action transaction.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .events import EventLog, TimeWindow

LT = "LT"
LP = "LP"
ORIGIN = "origin"
SENDER = "sender"


@dataclass(frozen=True)
class AgentMeasure:
    """Which agents define pool similarity: role (LT/LP) x identity field."""

    role: str
    identity: str

    def __post_init__(self) -> None:
        if self.role not in (LT, LP) or self.identity not in (ORIGIN, SENDER):
            raise ValueError(f"invalid agent measure ({self.role}, {self.identity})")


@dataclass
class PoolGraph:
    """Undirected weighted graph; edges keyed by sorted pool-id pairs."""

    nodes: set[str]
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    def weight(self, p: str, q: str) -> float:
        if p == q:
            raise ValueError("self-loops are not represented")
        return self.edges.get((min(p, q), max(p, q)), 0.0)


@dataclass
class BridgeGraph:
    """Directed multigraph counts: (src pool, dst pool) -> bridge transactions."""

    nodes: set[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)


def _agents_by_pool(
    log: EventLog, pools: set[str], w: TimeWindow, m: AgentMeasure
) -> dict[str, set[str]]:
    events = log.swaps if m.role == LT else log.liquidity
    agents: dict[str, set[str]] = {p: set() for p in pools}
    for ev in events:
        if ev.pool_id in agents and w.contains(ev.timestamp):
            agents[ev.pool_id].add(ev.origin if m.identity == ORIGIN else ev.sender)
    return agents


def build_common_agent_graph(
    log: EventLog, pools: set[str], w: TimeWindow, m: AgentMeasure
) -> PoolGraph:
    """Edge weight = number of distinct agents active on both pools in the window."""
    unknown = pools - set(log.pools)
    if unknown:
        raise KeyError(f"pools not in log: {sorted(unknown)}")
    agents = _agents_by_pool(log, pools, w, m)
    g = PoolGraph(nodes=set(pools))
    ordered = sorted(pools)
    for i, p in enumerate(ordered):
        for q in ordered[i + 1 :]:
            common = len(agents[p] & agents[q])
            g.edges[(p, q)] = float(common)
    return g


def _components(nodes: set[str], adjacency: dict[str, set[str]]) -> list[set[str]]:
    """Connected components by BFS (tests cross-check with union-find)."""
    seen: set[str] = set()
    comps: list[set[str]] = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        seen.add(start)
        while frontier:
            u = frontier.pop()
            for v in adjacency.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    comp.add(v)
                    frontier.append(v)
        comps.append(comp)
    return comps


def _largest_component(comps: list[set[str]]) -> set[str]:
    # Ties go to the component containing the lexicographically smallest id.
    if not comps:
        return set()
    return min(comps, key=lambda c: (-len(c), min(c)))


def giant_component(g: PoolGraph, threshold: float) -> set[str]:
    """Vertex set of the largest component after dropping edges below threshold.

    Vertices without a surviving incident edge are excluded, so the result is
    empty when no edge survives.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    adjacency: dict[str, set[str]] = defaultdict(set)
    touched: set[str] = set()
    for (p, q), weight in g.edges.items():
        if weight >= threshold and weight > 0:
            adjacency[p].add(q)
            adjacency[q].add(p)
            touched.update((p, q))
    return _largest_component(_components(touched, adjacency))


def threshold_sweep(g: PoolGraph, thresholds: list[float]) -> list[tuple[float, int]]:
    """Giant-component size at each threshold of an ascending sweep."""
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be ascending")
    return [(t, len(giant_component(g, t))) for t in thresholds]


def extract_bridges(log: EventLog, pools: set[str], w: TimeWindow) -> BridgeGraph:
    """Count bridge transactions between pools.

    Swaps are grouped by transaction; groups with at least two actions are
    scanned per token in log-index order.  A token bought in one pool
    (negative pool-side amount, flow mark -1) and sold in the next action
    that touches it (positive amount, +1) bridges the buy pool to the sell
    pool.  Only adjacent (-1, +1) patterns in a token's flow list count, so
    a [-1, +1, +1] list yields a single bridge from the first pool to the
    second.
    """
    unknown = pools - set(log.pools)
    if unknown:
        raise KeyError(f"pools not in log: {sorted(unknown)}")
    by_txn: dict[str, list] = defaultdict(list)
    for s in log.swaps:
        if s.pool_id in pools and w.contains(s.timestamp):
            by_txn[s.txn_id].append(s)
    bg = BridgeGraph(nodes=set(pools))
    for txn_id in sorted(by_txn):
        group = sorted(by_txn[txn_id], key=lambda s: s.log_index)
        if len(group) < 2:
            continue
        flows: dict[str, list[tuple[int, str]]] = defaultdict(list)
        for s in group:
            meta = log.pools[s.pool_id]
            for token, amount in ((meta.token0_symbol, s.amount0), (meta.token1_symbol, s.amount1)):
                flows[token].append((1 if amount > 0 else -1, s.pool_id))
        for token in flows:
            flow = flows[token]
            for (sign_a, pool_a), (sign_b, pool_b) in zip(flow, flow[1:]):
                if sign_a == -1 and sign_b == 1 and pool_a != pool_b:
                    key = (pool_a, pool_b)
                    bg.edges[key] = bg.edges.get(key, 0) + 1
    return bg


def bridge_giant_component(bg: BridgeGraph, min_count: int) -> set[str]:
    """Largest component of the undirected view of edges with enough bridges."""
    if min_count < 0:
        raise ValueError("min_count must be >= 0")
    adjacency: dict[str, set[str]] = defaultdict(set)
    touched: set[str] = set()
    for (p, q), count in bg.edges.items():
        if count >= min_count and count > 0:
            adjacency[p].add(q)
            adjacency[q].add(p)
            touched.update((p, q))
    return _largest_component(_components(touched, adjacency))


def eigenvector_centrality(
    nodes: list[str],
    weight_fn,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> dict[str, float]:
    """Principal-eigenvector scores of a connected weighted undirected graph.

    Power iteration on (A + I) — the identity shift keeps the dominant
    eigenvalue strictly largest on bipartite graphs without changing
    eigenvectors.  Starts from the uniform vector, L2-normalises each step,
    and stops when successive iterates differ by less than ``tol`` in
    max-norm.  Raises on empty or disconnected input.
    """
    n = len(nodes)
    if n == 0:
        raise ValueError("empty graph")
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = a[j, i] = weight_fn(nodes[i], nodes[j])
    if n > 1:
        adjacency = {
            nodes[i]: {nodes[j] for j in range(n) if a[i, j] > 0} for i in range(n)
        }
        comps = _components(set(nodes), adjacency)
        if len(comps) != 1:
            raise ValueError("graph is disconnected; pass a single component")
    v = np.full(n, 1.0 / np.sqrt(n))
    shifted = a + np.eye(n)
    for _ in range(max_iter):
        nxt = shifted @ v
        nxt /= np.linalg.norm(nxt)
        if np.max(np.abs(nxt - v)) < tol:
            v = nxt
            break
        v = nxt
    v = np.abs(v)
    v /= np.linalg.norm(v)
    return {node: float(score) for node, score in zip(nodes, v)}


def pool_graph_centrality(g: PoolGraph, component: set[str]) -> dict[str, float]:
    nodes = sorted(component)
    return eigenvector_centrality(nodes, g.weight)


def bridge_graph_centrality(bg: BridgeGraph, component: set[str]) -> dict[str, float]:
    """Centrality on the undirected collapse of the bridge counts."""
    nodes = sorted(component)

    def weight(p: str, q: str) -> float:
        return float(bg.edges.get((p, q), 0) + bg.edges.get((q, p), 0))

    return eigenvector_centrality(nodes, weight)


def agent_overlap(
    log: EventLog, pools: set[str], w: TimeWindow
) -> dict[str, tuple[int, float, float]]:
    """Per pool: (#origins acting as both LT and LP, ratio of LTs, ratio of LPs).

    Ratios are reported as 0 when the corresponding denominator is 0.
    """
    unknown = pools - set(log.pools)
    if unknown:
        raise KeyError(f"pools not in log: {sorted(unknown)}")
    lts = _agents_by_pool(log, pools, w, AgentMeasure(LT, ORIGIN))
    lps = _agents_by_pool(log, pools, w, AgentMeasure(LP, ORIGIN))
    out: dict[str, tuple[int, float, float]] = {}
    for pool_id in sorted(pools):
        both = lts[pool_id] & lps[pool_id]
        n_lt, n_lp = len(lts[pool_id]), len(lps[pool_id])
        out[pool_id] = (
            len(both),
            len(both) / n_lt if n_lt else 0.0,
            len(both) / n_lp if n_lp else 0.0,
        )
    return out


def write_edge_list(path, edges: dict[tuple[str, str], float | int]) -> None:
    """Emit edges as a ``src,dst,weight`` CSV in sorted key order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "weight"])
        for (src, dst) in sorted(edges):
            writer.writerow([src, dst, edges[(src, dst)]])

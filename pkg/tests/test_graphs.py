import math
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poolscope.graphs import (
    LP,
    LT,
    ORIGIN,
    SENDER,
    AgentMeasure,
    PoolGraph,
    agent_overlap,
    bridge_giant_component,
    build_common_agent_graph,
    eigenvector_centrality,
    extract_bridges,
    giant_component,
    threshold_sweep,
)
from poolscope.events import TimeWindow

from conftest import DAY, T0, build_log, make_liq, make_meta, make_swap

W = TimeWindow("A", T0, T0 + 30 * DAY)


def metas(n=4, shared_token=True):
    out = []
    for i in range(n):
        token0 = "WETH" if shared_token else f"A{i}"
        out.append(make_meta(f"P{i}", token0=token0, token1=f"B{i}"))
    return out


def swap_by(origin, pool, i, sender="s1"):
    return make_swap(txn_id=f"t{origin}{pool}{i}", timestamp=T0 + i, pool_id=pool,
                     origin=origin, sender=sender)


class TestCommonAgentGraph:
    def test_disjoint_agents_zero_weights(self):
        log = build_log(metas(2), swaps=[swap_by("a", "P0", 0), swap_by("b", "P1", 1)])
        g = build_common_agent_graph(log, {"P0", "P1"}, W, AgentMeasure(LT, ORIGIN))
        assert g.weight("P0", "P1") == 0

    def test_shared_three_agents(self):
        swaps = [swap_by(o, p, i) for i, o in enumerate("abc") for p in ("P0", "P1")]
        log = build_log(metas(2), swaps=swaps)
        g = build_common_agent_graph(log, {"P0", "P1"}, W, AgentMeasure(LT, ORIGIN))
        assert g.weight("P0", "P1") == 3

    def test_random_fixture_matches_bruteforce(self):
        rng = np.random.default_rng(5)
        pools = [f"P{i}" for i in range(4)]
        swaps = []
        for i in range(200):
            swaps.append(swap_by(f"o{rng.integers(12)}", pools[rng.integers(4)], i))
        log = build_log(metas(4), swaps=swaps)
        g = build_common_agent_graph(log, set(pools), W, AgentMeasure(LT, ORIGIN))
        # nested-loop intersection oracle straight off the raw events
        agents = defaultdict(set)
        for s in swaps:
            agents[s.pool_id].add(s.origin)
        for i, p in enumerate(pools):
            for q in pools[i + 1:]:
                assert g.weight(p, q) == len(agents[p] & agents[q])

    def test_sender_measure_counts_contracts(self):
        swaps = [swap_by("a", "P0", 0, sender="c1"), swap_by("b", "P1", 1, sender="c1"),
                 swap_by("c", "P1", 2, sender="c2")]
        log = build_log(metas(2), swaps=swaps)
        g = build_common_agent_graph(log, {"P0", "P1"}, W, AgentMeasure(LT, SENDER))
        assert g.weight("P0", "P1") == 1

    def test_lp_measure_uses_liquidity_events(self):
        liq = [make_liq(txn_id=f"l{i}", timestamp=T0 + i, pool_id=p, origin="lp1")
               for i, p in enumerate(("P0", "P1"))]
        log = build_log(metas(2), liquidity=liq)
        g = build_common_agent_graph(log, {"P0", "P1"}, W, AgentMeasure(LP, ORIGIN))
        assert g.weight("P0", "P1") == 1

    def test_invalid_measure(self):
        with pytest.raises(ValueError):
            AgentMeasure("XX", ORIGIN)


def _uf_components(nodes, edges):
    """Union-find oracle for connected components of surviving edges."""
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = defaultdict(set)
    for n in nodes:
        comps[find(n)].add(n)
    return list(comps.values())


def graph_from_edges(edges):
    nodes = {p for e in edges for p in e}
    return PoolGraph(nodes=nodes, edges={tuple(sorted(e)): w for e, w in edges.items()})


class TestGiantComponent:
    def test_connected_graph_low_threshold(self):
        g = graph_from_edges({("a", "b"): 5, ("b", "c"): 7, ("c", "d"): 5})
        assert giant_component(g, 5) == {"a", "b", "c", "d"}

    def test_threshold_above_max_weight(self):
        g = graph_from_edges({("a", "b"): 5, ("b", "c"): 7})
        assert giant_component(g, 8) == set()

    def test_two_components_pick_larger(self):
        g = graph_from_edges({("a", "b"): 9, ("b", "c"): 9, ("x", "y"): 9, ("p", "q"): 1})
        got = giant_component(g, 5)
        surviving = [("a", "b"), ("b", "c"), ("x", "y")]
        oracle = max(_uf_components({"a", "b", "c", "x", "y"}, surviving), key=len)
        assert got == oracle == {"a", "b", "c"}

    def test_size_tie_breaks_to_smallest_member(self):
        g = graph_from_edges({("b", "c"): 9, ("a", "d"): 9})
        assert giant_component(g, 1) == {"a", "d"}

    def test_isolated_vertices_excluded(self):
        g = PoolGraph(nodes={"a", "b", "lonely"}, edges={("a", "b"): 3.0})
        assert giant_component(g, 1) == {"a", "b"}


class TestThresholdSweep:
    def test_zero_threshold_full_component(self):
        g = graph_from_edges({("a", "b"): 2, ("b", "c"): 3})
        assert threshold_sweep(g, [0]) == [(0, 3)]

    def test_equal_weights_step(self):
        g = graph_from_edges({("a", "b"): 5, ("b", "c"): 5, ("c", "d"): 5})
        assert threshold_sweep(g, [1, 5, 6]) == [(1, 4), (5, 4), (6, 0)]

    def test_unsorted_thresholds_rejected(self):
        g = graph_from_edges({("a", "b"): 5})
        with pytest.raises(ValueError):
            threshold_sweep(g, [5, 1])

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_sweep_non_increasing_random_graphs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    edges[(f"n{i}", f"n{j}")] = float(rng.integers(0, 20))
        g = graph_from_edges(edges)
        sizes = [s for _, s in threshold_sweep(g, list(range(0, 22, 3)))]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))
        # recompute oracle: each threshold independently
        for t, s in threshold_sweep(g, list(range(0, 22, 3))):
            surviving = [e for e, w in g.edges.items() if w >= t and w > 0]
            nodes = {p for e in surviving for p in e}
            comps = _uf_components(nodes, surviving)
            assert s == (max(len(c) for c in comps) if comps else 0)


def bridge_txn(txn_id, legs):
    """legs: list of (pool, token_amounts dict keyed 0/1)."""
    out = []
    for idx, (pool, a0, a1) in enumerate(legs):
        out.append(make_swap(txn_id=txn_id, log_index=idx, timestamp=T0 + 5,
                             pool_id=pool, amount0=a0, amount1=a1))
    return out


class TestBridges:
    # pools share token0 == WETH; amount0 is the WETH side
    def test_buy_then_sell_is_bridge(self):
        swaps = bridge_txn("tx", [("P0", -10.0, 10.0), ("P1", 10.0, -10.0)])
        log = build_log(metas(2), swaps=swaps)
        bg = extract_bridges(log, {"P0", "P1"}, W)
        assert bg.edges == {("P0", "P1"): 1}

    def test_single_action_no_bridge(self):
        log = build_log(metas(2), swaps=[make_swap(txn_id="tx", amount0=-1.0, amount1=1.0,
                                                   pool_id="P0", timestamp=T0 + 1)])
        assert extract_bridges(log, {"P0", "P1"}, W).edges == {}

    def test_flow_list_minus_plus_plus(self):
        swaps = bridge_txn("tx", [("P0", -10.0, 10.0), ("P1", 10.0, -10.0), ("P2", 10.0, -10.0)])
        log = build_log(metas(3), swaps=swaps)
        bg = extract_bridges(log, {"P0", "P1", "P2"}, W)
        assert bg.edges == {("P0", "P1"): 1}

    def test_reordering_within_timestamp_invariant(self):
        swaps = bridge_txn("tx", [("P0", -10.0, 10.0), ("P1", 10.0, -10.0)])
        log_a = build_log(metas(2), swaps=swaps)
        log_b = build_log(metas(2), swaps=list(reversed(swaps)))
        assert extract_bridges(log_a, {"P0", "P1"}, W).edges == \
            extract_bridges(log_b, {"P0", "P1"}, W).edges

    @given(st.lists(st.sampled_from([-1, 1]), min_size=2, max_size=12))
    def test_adjacent_pattern_count(self, signs):
        # one token flowing through distinct pools, one leg per sign
        pool_names = [f"P{i}" for i in range(len(signs))]
        legs = [(pool_names[i], 10.0 * s, -10.0 * s) for i, s in enumerate(signs)]
        log = build_log(metas(len(signs)), swaps=bridge_txn("tx", legs))
        bg = extract_bridges(log, set(pool_names), W)
        expected = sum(1 for a, b in zip(signs, signs[1:]) if (a, b) == (-1, 1))
        assert sum(bg.edges.values()) == expected

    def test_bridge_giant_component_chain(self):
        from poolscope.graphs import BridgeGraph
        bg = BridgeGraph(nodes={"P1", "P2", "P3"},
                         edges={("P1", "P2"): 900, ("P2", "P3"): 850})
        assert bridge_giant_component(bg, 800) == {"P1", "P2", "P3"}

    def test_bridge_component_below_min(self):
        from poolscope.graphs import BridgeGraph
        bg = BridgeGraph(nodes={"P1", "P2"}, edges={("P1", "P2"): 5})
        assert bridge_giant_component(bg, 800) == set()

    def test_mixed_directions_collapse_once(self):
        from poolscope.graphs import BridgeGraph
        bg = BridgeGraph(nodes={"P1", "P2"},
                         edges={("P1", "P2"): 900, ("P2", "P1"): 1000})
        assert bridge_giant_component(bg, 800) == {"P1", "P2"}


class TestEigenvector:
    def test_complete_graph_equal_scores(self):
        nodes = [f"n{i}" for i in range(5)]
        scores = eigenvector_centrality(nodes, lambda a, b: 1.0)
        for v in scores.values():
            assert v == pytest.approx(1 / math.sqrt(5), abs=1e-9)

    def test_star_ratio_sqrt_n(self):
        nodes = ["hub", "l1", "l2", "l3", "l4"]
        weight = lambda a, b: 1.0 if "hub" in (a, b) else 0.0
        scores = eigenvector_centrality(nodes, weight)
        assert scores["hub"] / scores["l1"] == pytest.approx(2.0, abs=1e-6)
        # dense eigensolver oracle
        a = np.zeros((5, 5))
        a[0, 1:] = a[1:, 0] = 1.0
        vals, vecs = np.linalg.eigh(a)
        lead = np.abs(vecs[:, np.argmax(vals)])
        expect = {n: lead[i] / np.linalg.norm(lead) for i, n in enumerate(nodes)}
        for n in nodes:
            assert scores[n] == pytest.approx(expect[n], abs=1e-8)

    def test_single_edge(self):
        scores = eigenvector_centrality(["a", "b"], lambda a, b: 2.5)
        assert scores["a"] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
        assert scores["b"] == pytest.approx(1 / math.sqrt(2), abs=1e-9)

    def test_disconnected_rejected(self):
        weight = lambda a, b: 1.0 if {a, b} in ({"a", "b"}, {"c", "d"}) else 0.0
        with pytest.raises(ValueError, match="disconnected"):
            eigenvector_centrality(["a", "b", "c", "d"], weight)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            eigenvector_centrality([], lambda a, b: 1.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_residual_on_random_connected_graphs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        a = np.zeros((n, n))
        for i in range(1, n):  # random spanning tree keeps it connected
            j = int(rng.integers(0, i))
            a[i, j] = a[j, i] = float(rng.integers(1, 10))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.3:
                    a[i, j] = a[j, i] = float(rng.integers(1, 10))
        nodes = [f"n{i}" for i in range(n)]
        scores = eigenvector_centrality(nodes, lambda p, q: a[nodes.index(p), nodes.index(q)])
        v = np.array([scores[x] for x in nodes])
        lam = v @ a @ v
        assert np.linalg.norm(a @ v - lam * v) / np.linalg.norm(v) < 1e-6


class TestAgentOverlap:
    def test_no_common_origins(self):
        log = build_log(metas(1), swaps=[swap_by("lt1", "P0", 0)],
                        liquidity=[make_liq(pool_id="P0", origin="lp1", timestamp=T0 + 1)])
        assert agent_overlap(log, {"P0"}, W)["P0"] == (0, 0.0, 0.0)

    def test_ratios(self):
        swaps = [swap_by(f"lt{i}", "P0", i) for i in range(10)]
        liq = [make_liq(txn_id=f"l{i}", pool_id="P0", origin=f"lp{i}", timestamp=T0 + 100 + i)
               for i in range(3)]
        liq += [make_liq(txn_id=f"lb{i}", pool_id="P0", origin=f"lt{i}", timestamp=T0 + 200 + i)
                for i in range(2)]  # two origins act as both
        log = build_log(metas(1), swaps=swaps, liquidity=liq)
        count, r_lt, r_lp = agent_overlap(log, {"P0"}, W)["P0"]
        assert (count, r_lt, r_lp) == (2, 0.2, 0.4)

    def test_zero_denominators_guarded(self):
        log = build_log(metas(1))
        assert agent_overlap(log, {"P0"}, W)["P0"] == (0, 0.0, 0.0)

    def test_random_fixture_matches_oracle(self):
        rng = np.random.default_rng(9)
        swaps, liq = [], []
        for i in range(120):
            swaps.append(swap_by(f"a{rng.integers(15)}", "P0", i))
        for i in range(40):
            liq.append(make_liq(txn_id=f"l{i}", pool_id="P0",
                                origin=f"a{rng.integers(15)}", timestamp=T0 + 500 + i))
        log = build_log(metas(1), swaps=swaps, liquidity=liq)
        lts = {s.origin for s in swaps}
        lps = {ev.origin for ev in liq}
        both = lts & lps
        assert agent_overlap(log, {"P0"}, W)["P0"] == (
            len(both), len(both) / len(lts), len(both) / len(lps))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poolscope.embed import (
    CutParams,
    TransactionGraph,
    build_transaction_graph,
    cut_value,
    filter_lts,
    sample_neighbourhoods,
)
from poolscope.events import TimeWindow

from conftest import DAY, T0, build_log, make_meta, make_swap

W = TimeWindow("A", T0, T0 + 30 * DAY)


class TestCutValue:
    def test_min_weight_is_one_exactly(self):
        p = CutParams(60, 3600, 20)
        assert cut_value(60, p) == 1.0

    def test_paper_worked_example(self):
        # five minutes with min 60 s, max 3600 s, 20 nodes: about 40%
        p = CutParams(60, 3600, 20)
        assert cut_value(300, p) == pytest.approx(0.4111, abs=5e-4)

    def test_long_edge_effectively_zero(self):
        p = CutParams(60, 3600, 20)
        assert cut_value(3600, p) < 1e-80

    def test_all_simultaneous(self):
        p = CutParams(0, 0, 5)
        assert cut_value(0, p) == 1.0

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            cut_value(10, CutParams(60, 3600, 20))

    @given(st.floats(0, 1e6), st.floats(0, 1e6), st.integers(2, 1000),
           st.floats(0, 1))
    @settings(max_examples=200)
    def test_bounds_and_monotonicity(self, a, b, n, frac):
        min_w, max_w = sorted((a, b))
        p = CutParams(min_w, max_w, n)
        w1 = min_w + frac * (max_w - min_w)
        w2 = min_w + min(1.0, frac + 0.1) * (max_w - min_w)
        c1, c2 = cut_value(w1, p), cut_value(w2, p)
        # mathematically 0 < C <= 1; extreme scalings may underflow to 0.0
        assert 0 <= c1 <= 1 and 0 <= c2 <= 1
        scale = max_w / n
        if scale == 0 or (w1 - min_w) / scale < 30:
            assert c1 > 0
        if w2 >= w1:
            assert c2 <= c1 + 1e-15

    def test_params_validation(self):
        with pytest.raises(ValueError):
            CutParams(10, 5, 20)
        with pytest.raises(ValueError):
            CutParams(0, 10, 1)


class TestSampling:
    def test_simultaneous_swaps_select_everyone(self):
        g = TransactionGraph("lt", np.array([T0] * 5), ["P1"] * 5)
        for i, neigh in enumerate(sample_neighbourhoods(g, 3)):
            assert set(neigh) == set(range(5)) - {i}

    def test_two_bursts_never_cross(self):
        # tight bursts a week apart: cross-burst cut value is ~0
        ts = [T0 + i * 30 for i in range(6)] + [T0 + 7 * DAY + i * 30 for i in range(6)]
        g = TransactionGraph("lt", np.array(ts), ["P1"] * 12)
        crossings = 0
        for seed in range(50):
            for i, neigh in enumerate(sample_neighbourhoods(g, seed)):
                crossings += sum(1 for j in neigh if (i < 6) != (j < 6))
        assert crossings == 0

    def test_deterministic_given_seed(self):
        ts = np.array([T0, T0 + 60, T0 + 200, T0 + 900, T0 + 5000])
        g = TransactionGraph("lt", ts, [f"P{i % 2}" for i in range(5)])
        a = sample_neighbourhoods(g, 11)
        b = sample_neighbourhoods(g, 11)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        c = sample_neighbourhoods(g, 12)
        assert any(not np.array_equal(x, y) for x, y in zip(a, c))

    def test_independent_of_external_state(self):
        ts = np.array([T0, T0 + 60, T0 + 200, T0 + 900])
        g1 = TransactionGraph("lt", ts, ["P1"] * 4)
        np.random.seed(1234)  # global RNG state must not leak in
        g2 = TransactionGraph("lt", ts.copy(), ["P1"] * 4)
        assert all(
            np.array_equal(x, y)
            for x, y in zip(sample_neighbourhoods(g1, 7), sample_neighbourhoods(g2, 7))
        )

    def test_empirical_frequency_tracks_cut_value(self):
        # lighter version of the acceptance calibration: 2,000 seeds
        ts = np.array([T0, T0 + 60, T0 + 300, T0 + 1200, T0 + 3600])
        g = TransactionGraph("lt", ts, ["P1"] * 5)
        params = g.cut_params()
        trials = 2000
        counts = np.zeros((5, 5))
        for seed in range(trials):
            for i, neigh in enumerate(sample_neighbourhoods(g, seed)):
                counts[i, neigh] += 1
        for i in range(5):
            for j in range(5):
                if i == j:
                    continue
                expect = cut_value(abs(float(ts[i] - ts[j])), params)
                assert counts[i, j] / trials == pytest.approx(expect, abs=0.05)


class TestGraphBuild:
    def make_log(self):
        swaps = [
            make_swap(txn_id=f"t{i}", timestamp=T0 + i * 100, origin="lt1", pool_id="P1")
            for i in range(5)
        ]
        swaps += [make_swap(txn_id="x1", timestamp=T0 + 10, origin="lt2", pool_id="P1")]
        return build_log([make_meta("P1"), make_meta("P2", token0="DAI")], swaps=swaps)

    def test_nodes_sorted_by_time(self):
        g = build_transaction_graph(self.make_log(), "lt1", {"P1", "P2"}, W)
        assert g.n_nodes == 5
        assert list(g.timestamps) == sorted(g.timestamps)

    def test_too_few_swaps_rejected(self):
        with pytest.raises(ValueError):
            build_transaction_graph(self.make_log(), "lt2", {"P1", "P2"}, W)

    def test_cut_params_extremes(self):
        ts = np.array([T0, T0 + 60, T0 + 3600])
        g = TransactionGraph("lt", ts, ["P1"] * 3)
        p = g.cut_params()
        assert (p.min_w, p.max_w, p.n_nodes) == (60.0, 3600.0, 3)


class TestFilterLts:
    def make_log(self, counts):
        swaps = []
        for lt, n in counts.items():
            for i in range(n):
                swaps.append(make_swap(txn_id=f"{lt}-{i}", timestamp=T0 + i,
                                       origin=lt, pool_id="P1"))
        return build_log([make_meta("P1")], swaps=swaps)

    def test_bounds_inclusive(self):
        log = self.make_log({"a": 59, "b": 60, "c": 1000, "d": 15000, "e": 15001})
        assert filter_lts(log, {"P1"}, W, 60, 15000) == {"b", "c", "d"}

    def test_counting_oracle(self):
        rng = np.random.default_rng(3)
        counts = {f"lt{i}": int(rng.integers(1, 30)) for i in range(20)}
        log = self.make_log(counts)
        got = filter_lts(log, {"P1"}, W, 5, 20)
        assert got == {lt for lt, n in counts.items() if 5 <= n <= 20}

    def test_min_bound_validation(self):
        with pytest.raises(ValueError):
            filter_lts(self.make_log({"a": 5}), {"P1"}, W, 1, 10)

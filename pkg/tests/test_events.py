import json

import pytest
from hypothesis import given, strategies as st

from poolscope.events import (
    ECOSYS,
    EXOTIC,
    SS,
    IngestError,
    PoolMeta,
    TimeWindow,
    classify_pool,
    exchange_rate_series,
    ingest_events,
    load_pool_metas,
    proxy_tvl_at,
    proxy_tvl_series,
    write_events,
    write_pool_metas,
)

from conftest import DAY, T0, build_log, make_liq, make_meta, make_swap, write_jsonl

POOLS = {"P1": make_meta("P1"), "P2": make_meta("P2", token0="DAI")}


def swap_record(**kw):
    rec = {
        "type": "swap", "txn_id": "t1", "log_index": 0, "ts": T0, "pool": "P1",
        "origin": "o1", "sender": "s1", "recipient": "r1",
        "amount_usd": 5.0, "amount0": 5.0, "amount1": -5.0, "exec_rate": 1.0,
    }
    rec.update(kw)
    return rec


class TestIngest:
    def test_empty_file(self, tmp_path):
        path = write_jsonl(tmp_path / "ev.jsonl", [])
        log = ingest_events(path, POOLS)
        assert log.swaps == [] and log.liquidity == []

    def test_out_of_order_swaps_sorted(self, tmp_path):
        records = [
            swap_record(txn_id="t3", ts=T0 + 20),
            swap_record(txn_id="t1", ts=T0),
            swap_record(txn_id="t2", ts=T0 + 10),
        ]
        log = ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS)
        assert [s.txn_id for s in log.swaps] == ["t1", "t2", "t3"]

    def test_negative_usd_rejected_with_line_number(self, tmp_path):
        records = [swap_record(), swap_record(txn_id="t2", amount_usd=-5.0)]
        with pytest.raises(IngestError, match=":2:"):
            ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS)

    def test_same_sign_amounts_rejected(self, tmp_path):
        records = [swap_record(amount0=5.0, amount1=5.0)]
        with pytest.raises(IngestError, match="opposite signs"):
            ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS)

    def test_undeclared_pool_rejected(self, tmp_path):
        records = [swap_record(pool="NOPE")]
        with pytest.raises(IngestError, match="undeclared pool"):
            ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS)

    def test_duplicate_txn_log_index_rejected(self, tmp_path):
        records = [swap_record(), swap_record(ts=T0 + 5)]
        with pytest.raises(IngestError, match="duplicate"):
            ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS)

    def test_malformed_lines_counted_not_fatal(self, tmp_path):
        path = tmp_path / "ev.jsonl"
        with open(path, "w") as fh:
            fh.write("this is not json\n")
            fh.write(json.dumps(swap_record()) + "\n")
            fh.write(json.dumps({"type": "swap", "txn_id": "t9"}) + "\n")  # missing keys
            fh.write(json.dumps({"type": "teleport"}) + "\n")
        log = ingest_events(path, POOLS)
        assert len(log.swaps) == 1
        assert log.malformed_lines == 3

    def test_kind_filter(self, tmp_path):
        records = [
            swap_record(),
            {"type": "mint", "txn_id": "l1", "log_index": 0, "ts": T0, "pool": "P1",
             "origin": "o1", "sender": "s1", "amount_usd": 10.0},
        ]
        log = ingest_events(write_jsonl(tmp_path / "ev.jsonl", records), POOLS, kinds=("mint",))
        assert not log.swaps and len(log.liquidity) == 1

    def test_round_trip(self, tmp_path):
        log = build_log(
            POOLS.values(),
            swaps=[make_swap(txn_id=f"t{i}", timestamp=T0 + i, exec_rate=1.0 + i / 10)
                   for i in range(4)],
            liquidity=[make_liq(txn_id="l1"), make_liq(txn_id="l2", kind="burn", timestamp=T0 + 9)],
        )
        ev_path, meta_path = tmp_path / "ev.jsonl", tmp_path / "pools.jsonl"
        write_events(ev_path, log)
        write_pool_metas(meta_path, log.pools)
        again = ingest_events(ev_path, load_pool_metas(meta_path))
        assert again.swaps == log.swaps
        assert again.liquidity == log.liquidity
        assert again.pools == log.pools


class TestProxyTvl:
    def test_mint_then_burn(self):
        log = build_log(POOLS.values(), liquidity=[
            make_liq(txn_id="l1", amount_usd=2_000_000),
            make_liq(txn_id="l2", timestamp=T0 + 10, kind="burn", amount_usd=1_500_000),
        ])
        assert [v for _, v in proxy_tvl_series(log, "P1")] == [2_000_000, 500_000]

    def test_no_liquidity_events(self):
        log = build_log(POOLS.values())
        assert proxy_tvl_series(log, "P1") == []

    def test_mint_burn_mint(self):
        log = build_log(POOLS.values(), liquidity=[
            make_liq(txn_id="l1", amount_usd=1e6),
            make_liq(txn_id="l2", timestamp=T0 + 1, kind="burn", amount_usd=1e6),
            make_liq(txn_id="l3", timestamp=T0 + 2, amount_usd=3e6),
        ])
        assert [v for _, v in proxy_tvl_series(log, "P1")] == [1e6, 0.0, 3e6]

    def test_unknown_pool(self):
        with pytest.raises(KeyError):
            proxy_tvl_series(build_log(POOLS.values()), "NOPE")

    @given(st.lists(st.tuples(st.sampled_from(["mint", "burn"]),
                              st.floats(0, 1e6)), max_size=30))
    def test_prefix_sum_property(self, moves):
        liq = [make_liq(txn_id=f"l{i}", timestamp=T0 + i, kind=kind, amount_usd=usd)
               for i, (kind, usd) in enumerate(moves)]
        series = proxy_tvl_series(build_log(POOLS.values(), liquidity=liq), "P1")
        total = 0.0
        expected = []
        for kind, usd in moves:
            total += usd if kind == "mint" else -usd
            expected.append(total)
        assert [v for _, v in series] == pytest.approx(expected)

    def test_right_continuous_lookup(self):
        series = [(10, 5.0), (20, 7.0)]
        assert proxy_tvl_at(series, 9) == 0.0
        assert proxy_tvl_at(series, 10) == 5.0
        assert proxy_tvl_at(series, 19) == 5.0
        assert proxy_tvl_at(series, 25) == 7.0


class TestClassify:
    STABLE = {"USDC", "USDT", "DAI"}
    PEGGED = {"WETH", "WBTC"}

    def test_both_stable_is_ss(self):
        meta = make_meta(token0="USDC", token1="USDT")
        assert classify_pool(meta, self.STABLE, self.PEGGED) == SS

    def test_pegged_pair_is_ecosys(self):
        meta = make_meta(token0="WBTC", token1="WETH")
        assert classify_pool(meta, self.STABLE, self.PEGGED) == ECOSYS

    def test_exotic(self):
        meta = make_meta(token0="SHIB", token1="WETH")
        assert classify_pool(meta, self.STABLE, self.PEGGED) == EXOTIC

    def test_overlapping_sets_rejected(self):
        with pytest.raises(ValueError):
            classify_pool(make_meta(), {"USDC"}, {"USDC", "WETH"})

    @given(st.sampled_from(["USDC", "USDT", "WETH", "WBTC", "SHIB", "CRV"]),
           st.sampled_from(["USDC", "USDT", "WETH", "WBTC", "SHIB", "CRV"]))
    def test_total_and_exclusive(self, t0, t1):
        if t0 == t1:
            return
        got = classify_pool(make_meta(token0=t0, token1=t1), self.STABLE, self.PEGGED)
        assert got in (SS, ECOSYS, EXOTIC)


class TestExchangeRate:
    def test_projection_in_order(self, window):
        log = build_log(POOLS.values(), swaps=[
            make_swap(txn_id="a", timestamp=T0 + 1, exec_rate=1.0),
            make_swap(txn_id="b", timestamp=T0 + 2, exec_rate=1.1),
        ])
        assert exchange_rate_series(log, "P1", window) == [1.0, 1.1]

    def test_empty_window(self, window):
        log = build_log(POOLS.values())
        assert exchange_rate_series(log, "P1", window) == []

    def test_half_open_boundary(self):
        w = TimeWindow("W", T0, T0 + 100)
        log = build_log(POOLS.values(), swaps=[
            make_swap(txn_id="a", timestamp=T0 - 1, exec_rate=0.9),
            make_swap(txn_id="b", timestamp=T0, exec_rate=1.0),
            make_swap(txn_id="c", timestamp=T0 + 99, exec_rate=1.1),
            make_swap(txn_id="d", timestamp=T0 + 100, exec_rate=1.2),
        ])
        assert exchange_rate_series(log, "P1", w) == [1.0, 1.1]


class TestTypes:
    def test_bad_fee_tier(self):
        with pytest.raises(ValueError):
            PoolMeta("P", "A", "B", 1234, T0, 0)

    def test_same_tokens(self):
        with pytest.raises(ValueError):
            PoolMeta("P", "A", "A", 500, T0, 0)

    def test_window_ordering(self):
        with pytest.raises(ValueError):
            TimeWindow("W", T0, T0)

    def test_window_days(self):
        assert TimeWindow("W", T0, T0 + 30 * DAY).days() == 30
        assert TimeWindow("W", T0, T0 + 1).days() == 1
        assert TimeWindow("W", T0 + 100, T0 + DAY + 200).days() == 2

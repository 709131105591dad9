import json

import pytest

from poolscope.events import EventLog, LiquidityEvent, PoolMeta, SwapEvent, TimeWindow

DAY = 86_400
T0 = 1_640_995_200  # 2022-01-01 00:00 UTC


def make_meta(pool_id="P1", token0="USDC", token1="WETH", fee_tier=500,
              created_at=T0 - 30 * DAY, txn_count=5000):
    return PoolMeta(pool_id, token0, token1, fee_tier, created_at, txn_count)


def make_swap(txn_id="t1", log_index=0, timestamp=T0, pool_id="P1", origin="o1",
              sender="s1", recipient="r1", amount_usd=100.0, amount0=100.0,
              amount1=-100.0, exec_rate=1.0):
    return SwapEvent(txn_id, log_index, timestamp, pool_id, origin, sender,
                     recipient, amount_usd, amount0, amount1, exec_rate)


def make_liq(txn_id="l1", log_index=0, timestamp=T0, pool_id="P1", origin="o1",
             sender="s1", kind="mint", amount_usd=1000.0):
    return LiquidityEvent(txn_id, log_index, timestamp, pool_id, origin, sender,
                          kind, amount_usd)


def build_log(metas, swaps=(), liquidity=()):
    key = lambda ev: (ev.timestamp, ev.txn_id, ev.log_index)
    return EventLog(
        pools={m.pool_id: m for m in metas},
        swaps=sorted(swaps, key=key),
        liquidity=sorted(liquidity, key=key),
    )


@pytest.fixture
def window():
    return TimeWindow("W", T0, T0 + 30 * DAY)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    return path

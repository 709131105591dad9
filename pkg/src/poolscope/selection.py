"""Systematic per-window filtering of the pool universe.

Two stages mirror the production workflow: a coarse filter on lifetime
transaction counts and per-token pool coverage, then a per-window filter on
pre-window activity and the TVL proxy.  Filters are applied sequentially,
each counting over the survivors of the previous one.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .events import EventLog, PoolMeta, TimeWindow, proxy_tvl_at, proxy_tvl_series


@dataclass(frozen=True)
class SelectionConfig:
    min_txn_count: int = 1000
    min_pools_per_token: int = 3
    tvl_threshold: float = 1_000_000.0
    windows: tuple[TimeWindow, ...] = ()

    def __post_init__(self) -> None:
        if self.min_txn_count <= 0 or self.min_pools_per_token <= 0 or self.tvl_threshold <= 0:
            raise ValueError("selection thresholds must be positive")


@dataclass
class PoolUniverse:
    window: str
    pool_ids: set[str]
    provenance: dict[str, dict[str, bool]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "window": self.window,
                "pools": sorted(self.pool_ids),
                "provenance": {p: self.provenance[p] for p in sorted(self.provenance)},
            },
            sort_keys=True,
            indent=2,
        )


def coarse_filter(metas: dict[str, PoolMeta], cfg: SelectionConfig) -> set[str]:
    """Lifetime filter: txn_count floor, then token coverage over the survivors.

    A pool survives when its txn_count meets the floor and, among pools that
    already passed the txn_count step, each of its two tokens appears in at
    least ``min_pools_per_token`` pools.  Token counting is deliberately done
    on the post-txn-count set, not re-iterated to a fixpoint.
    """
    if not metas:
        raise ValueError("coarse_filter requires at least one pool")
    active = [m for m in metas.values() if m.txn_count >= cfg.min_txn_count]
    token_pools: Counter[str] = Counter()
    for m in active:
        token_pools[m.token0_symbol] += 1
        token_pools[m.token1_symbol] += 1
    return {
        m.pool_id
        for m in active
        if token_pools[m.token0_symbol] >= cfg.min_pools_per_token
        and token_pools[m.token1_symbol] >= cfg.min_pools_per_token
    }


def _events_before(log: EventLog, pool_id: str, ts: int) -> int:
    n = sum(1 for s in log.swaps if s.pool_id == pool_id and s.timestamp < ts)
    n += sum(1 for ev in log.liquidity if ev.pool_id == pool_id and ev.timestamp < ts)
    return n


def _held_twice(series: list[tuple[int, float]], threshold: float, before: int) -> bool:
    """True when two consecutive liquidity-event points before ``before`` both
    sit at or above the threshold (anti flash-liquidity rule)."""
    prev_ok = False
    for ts, value in series:
        if ts >= before:
            break
        ok = value >= threshold
        if ok and prev_ok:
            return True
        prev_ok = ok
    return False


def window_filter(
    log: EventLog, candidates: set[str], w: TimeWindow, cfg: SelectionConfig
) -> PoolUniverse:
    """Per-window refinement of a candidate set.

    Keeps pools with at least ``min_txn_count`` events (swaps + mints +
    burns) before the window start, TVL proxy at or above the threshold at
    both window boundaries, and at least one pair of consecutive
    liquidity-event points at or above the threshold before the window end.
    """
    unknown = candidates - set(log.pools)
    if unknown:
        raise KeyError(f"candidates not in log: {sorted(unknown)}")
    universe = PoolUniverse(window=w.label, pool_ids=set())
    for pool_id in sorted(candidates):
        series = proxy_tvl_series(log, pool_id)
        flags = {
            "prior_txns": _events_before(log, pool_id, w.start) >= cfg.min_txn_count,
            "tvl_at_start": proxy_tvl_at(series, w.start) >= cfg.tvl_threshold,
            "tvl_at_end": proxy_tvl_at(series, w.end) >= cfg.tvl_threshold,
            "tvl_two_consecutive": _held_twice(series, cfg.tvl_threshold, w.end),
        }
        universe.provenance[pool_id] = flags
        if all(flags.values()):
            universe.pool_ids.add(pool_id)
    return universe


def select_universes(
    log: EventLog, cfg: SelectionConfig
) -> tuple[set[str], dict[str, PoolUniverse]]:
    """Run the full selection: coarse filter once, window filter per window."""
    coarse = coarse_filter(log.pools, cfg)
    return coarse, {w.label: window_filter(log, coarse, w, cfg) for w in cfg.windows}

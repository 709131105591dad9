"""Synthetic event generation with planted ground truth.

Two kinds of pools are generated.  "Law" pools realise exact daily
(volume, rate-stability, liquidity) triples: background market origins
execute an even number of swaps per day whose rates alternate around the
day's centre so the population std is hit exactly, amounts split the
planted volume, and an end-of-day liquidity event pins the TVL proxy to the
day's target.  Behaviour pools host archetype liquidity takers whose swaps
follow planted burst patterns over disjoint pool alphabets; these feed the
embedding/clustering pipeline.  A manifest records every planted value.

All randomness is drawn from substreams keyed by (seed, tag, entity), so a
fixed spec yields byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .events import (
    SECONDS_PER_DAY,
    EventLog,
    LiquidityEvent,
    PoolMeta,
    SwapEvent,
    TimeWindow,
    date_str,
    write_events,
    write_pool_metas,
)

_TAG_LAW = 0x10
_TAG_LT = 0x20
_TAG_CAL = 0x30

LAW_MODES = ("law", "noise", "flat")


@dataclass(frozen=True)
class LawParams:
    """Planted daily-law behaviour of one pool.

    mode "law" follows the planted slope with multiplicative noise, "noise"
    decouples volume from the other variables, "flat" keeps volume constant
    while liquidity sweeps (the stable-stable regime).  ``switch_day``
    optionally flips a law pool to noise from that day index on.
    """

    r_pool: float
    noise: float = 0.05
    mode: str = "law"
    switch_day: int | None = None
    base_tvl: float = 5e6
    tvl_amplitude: float = 0.6
    base_rate: float = 1.0
    base_rate_std: float = 0.01
    swaps_per_day: int = 8

    def __post_init__(self) -> None:
        if self.mode not in LAW_MODES:
            raise ValueError(f"mode must be one of {LAW_MODES}")
        if self.noise < 0:
            raise ValueError("noise level must be >= 0")
        if self.swaps_per_day < 2 or self.swaps_per_day % 2:
            raise ValueError("swaps_per_day must be even and >= 2")
        if not 0 < self.tvl_amplitude < 1:
            raise ValueError("tvl_amplitude must be in (0, 1)")


@dataclass(frozen=True)
class PoolSpec:
    pool_id: str
    token0: str
    token1: str
    fee_tier: int
    law: LawParams | None = None


@dataclass(frozen=True)
class ArchetypeSpec:
    """A planted species of liquidity taker: burst rhythm + pool alphabet."""

    name: str
    pools: tuple[str, ...]
    lt_count: int = 20
    swaps_per_lt: int = 120
    burst_len: int = 10
    intra_gap_s: int = 60
    inter_gap_s: int = 3600
    usd_scale: float = 1000.0

    def duration(self) -> int:
        bursts = math.ceil(self.swaps_per_lt / self.burst_len)
        return (self.burst_len - 1) * self.intra_gap_s * bursts + (
            bursts - 1
        ) * self.inter_gap_s


@dataclass(frozen=True)
class SyntheticSpec:
    start: int  # UTC midnight epoch seconds
    days: int
    pools: tuple[PoolSpec, ...]
    archetypes: tuple[ArchetypeSpec, ...] = ()
    seed: int = 0
    pre_days: int = 7
    pre_swaps: int = 60
    arb_txns_per_day: int = 4
    stable_tokens: tuple[str, ...] = ("USDC", "USDT", "DAI")
    pegged_tokens: tuple[str, ...] = ("WETH", "WBTC")

    def __post_init__(self) -> None:
        if self.start % SECONDS_PER_DAY:
            raise ValueError("start must be a UTC midnight")
        if self.days < 1 or self.pre_days < 1:
            raise ValueError("days and pre_days must be >= 1")
        ids = [p.pool_id for p in self.pools]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate pool ids")
        known = set(ids)
        seen: set[str] = set()
        for arch in self.archetypes:
            alphabet = set(arch.pools)
            if not alphabet <= known:
                raise ValueError(f"archetype {arch.name}: unknown pools {alphabet - known}")
            if alphabet & seen:
                raise ValueError("archetype pool alphabets must be disjoint")
            seen |= alphabet
        law_pools = {p.pool_id for p in self.pools if p.law is not None}
        if law_pools & seen:
            raise ValueError("law pools cannot belong to an archetype alphabet")

    @property
    def end(self) -> int:
        return self.start + self.days * SECONDS_PER_DAY

    def window(self) -> TimeWindow:
        return TimeWindow("MAIN", self.start, self.end)


@dataclass
class SynthPaths:
    events: Path
    pools: Path
    token_classes: Path
    calendar: Path
    ground_truth: Path
    config: Path


def _substream(*keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(list(keys)))


def _pool_digest(pool_id: str) -> int:
    return int.from_bytes(pool_id.encode()[:8].ljust(8, b"\0"), "big")


class _TxnCounter:
    def __init__(self) -> None:
        self.n = 0

    def next(self) -> str:
        self.n += 1
        return f"T{self.n:08d}"


def _planted_daily(spec: SyntheticSpec, pool: PoolSpec) -> list[dict]:
    """Per-day (rate centre, rate std, TVL target, volume) for a law pool."""
    law = pool.law
    rng = _substream(spec.seed, _TAG_LAW, _pool_digest(pool.pool_id))
    out = []
    for d in range(spec.days):
        mode = law.mode
        if law.switch_day is not None and d >= law.switch_day:
            mode = "noise"
        sigma = law.base_rate_std * (1.0 + 0.5 * math.sin(2 * math.pi * d / 23.0))
        centre = law.base_rate * (1.0 + 0.1 * math.sin(2 * math.pi * d / 37.0))
        if mode == "noise":
            t_liq = law.base_tvl * (1.0 + law.tvl_amplitude * (2 * rng.random() - 1))
            sigma = law.base_rate_std * (0.5 + rng.random())
        else:
            t_liq = law.base_tvl * (1.0 + law.tvl_amplitude * math.sin(4 * math.pi * d / spec.days))
        x = t_liq * sigma / pool.fee_tier
        anchor = law.r_pool * law.base_tvl * law.base_rate_std / pool.fee_tier
        if mode == "law":
            vol = law.r_pool * x * (1.0 + law.noise * rng.standard_normal())
        elif mode == "noise":
            vol = anchor * math.exp(0.6 * rng.standard_normal())
        else:  # flat: volume decoupled from the sweeping liquidity
            vol = anchor * (1.0 + 0.02 * rng.standard_normal())
        out.append({"day": d, "sigma": sigma, "centre": centre, "t_liq": t_liq, "vol": abs(vol)})
    return out


def _emit_law_pool(
    spec: SyntheticSpec,
    pool: PoolSpec,
    daily: list[dict],
    swaps: list[SwapEvent],
    liquidity: list[LiquidityEvent],
    txns: _TxnCounter,
) -> None:
    law = pool.law
    m = law.swaps_per_day
    for row in daily:
        day_ts = spec.start + row["day"] * SECONDS_PER_DAY
        for k in range(m):
            rate = row["centre"] + (row["sigma"] if k % 2 == 0 else -row["sigma"])
            usd = row["vol"] / m
            swaps.append(
                SwapEvent(
                    txn_id=txns.next(),
                    log_index=0,
                    timestamp=day_ts + (k + 1) * SECONDS_PER_DAY // (m + 2),
                    pool_id=pool.pool_id,
                    origin=f"MKT-{pool.pool_id}-{row['day'] * m + k:04d}",
                    sender="ROUTER-MKT",
                    recipient=f"MKT-{pool.pool_id}",
                    amount_usd=usd,
                    amount0=usd,
                    amount1=-usd / rate,
                    exec_rate=rate,
                )
            )
        # pin the TVL proxy to the day's target just before the day closes
        prev = _last_tvl(liquidity, pool.pool_id)
        delta = row["t_liq"] - prev
        if abs(delta) > 1e-9:
            liquidity.append(
                LiquidityEvent(
                    txn_id=txns.next(),
                    log_index=0,
                    timestamp=day_ts + SECONDS_PER_DAY - 60,
                    pool_id=pool.pool_id,
                    origin=f"LP-{pool.pool_id}-{row['day'] % 3}",
                    sender="NFTMGR",
                    kind="mint" if delta > 0 else "burn",
                    amount_usd=abs(delta),
                )
            )


def _last_tvl(liquidity: list[LiquidityEvent], pool_id: str) -> float:
    total = 0.0
    for ev in liquidity:
        if ev.pool_id == pool_id:
            total += ev.signed_usd
    return total


def _emit_bootstrap(
    spec: SyntheticSpec,
    pool: PoolSpec,
    base_tvl: float,
    swaps: list[SwapEvent],
    liquidity: list[LiquidityEvent],
    txns: _TxnCounter,
) -> None:
    """Pre-window history: two consecutive above-threshold liquidity points
    plus enough swaps to clear the prior-activity filter."""
    for i, usd in enumerate((base_tvl, base_tvl * 0.01)):
        liquidity.append(
            LiquidityEvent(
                txn_id=txns.next(),
                log_index=0,
                timestamp=spec.start - (3 - i) * SECONDS_PER_DAY,
                pool_id=pool.pool_id,
                origin=f"LP-{pool.pool_id}-0",
                sender="NFTMGR",
                kind="mint",
                amount_usd=usd,
            )
        )
    span = spec.pre_days * SECONDS_PER_DAY
    law = pool.law
    rate0 = law.base_rate if law else 1.0
    std0 = law.base_rate_std if law else 0.01
    for i in range(spec.pre_swaps):
        rate = rate0 + (std0 if i % 2 == 0 else -std0)
        swaps.append(
            SwapEvent(
                txn_id=txns.next(),
                log_index=0,
                timestamp=spec.start - span + i * (span // (spec.pre_swaps + 1)),
                pool_id=pool.pool_id,
                origin=f"SEED-{pool.pool_id}-{i // 50}",
                sender="ROUTER-MKT",
                recipient=f"SEED-{pool.pool_id}",
                amount_usd=100.0,
                amount0=100.0,
                amount1=-100.0 / rate,
                exec_rate=rate,
            )
        )


def _emit_archetype(
    spec: SyntheticSpec,
    arch: ArchetypeSpec,
    arch_idx: int,
    swaps: list[SwapEvent],
    txns: _TxnCounter,
) -> dict[str, str]:
    """Burst-structured swaps for one archetype; returns lt -> archetype name."""
    labels: dict[str, str] = {}
    duration = arch.duration()
    usable_days = max(1, spec.days - duration // SECONDS_PER_DAY - 1)
    for i in range(arch.lt_count):
        lt_id = f"LT-{arch.name}-{i:03d}"
        labels[lt_id] = arch.name
        rng = _substream(spec.seed, _TAG_LT, arch_idx, i)
        t = (
            spec.start
            + int(rng.integers(0, usable_days)) * SECONDS_PER_DAY
            + int(rng.integers(0, 43_200))
        )
        for j in range(arch.swaps_per_lt):
            pool_id = arch.pools[int(rng.integers(0, len(arch.pools)))]
            rate = 1.0 + 0.005 * float(rng.standard_normal())
            rate = max(rate, 0.5)
            usd = arch.usd_scale * math.exp(0.3 * float(rng.standard_normal()))
            swaps.append(
                SwapEvent(
                    txn_id=txns.next(),
                    log_index=0,
                    timestamp=t,
                    pool_id=pool_id,
                    origin=lt_id,
                    sender=f"ROUTER-{arch.name}",
                    recipient=lt_id,
                    amount_usd=usd,
                    amount0=usd,
                    amount1=-usd / rate,
                    exec_rate=rate,
                )
            )
            t += arch.intra_gap_s if (j + 1) % arch.burst_len else arch.inter_gap_s
    return labels


def _emit_behaviour_liquidity(
    spec: SyntheticSpec,
    pool: PoolSpec,
    overlap_origin: str | None,
    liquidity: list[LiquidityEvent],
    txns: _TxnCounter,
) -> None:
    """Weekly TVL wiggle on behaviour pools; some events reuse an LT origin
    so the taker/provider overlap statistics have something to find."""
    week = 0
    for day in range(3, spec.days - 1, 7):
        ts = spec.start + day * SECONDS_PER_DAY + 43_200
        origin = overlap_origin if (overlap_origin and week % 2 == 0) else f"LP-{pool.pool_id}-1"
        liquidity.append(
            LiquidityEvent(
                txn_id=txns.next(),
                log_index=0,
                timestamp=ts,
                pool_id=pool.pool_id,
                origin=origin,
                sender="NFTMGR",
                kind="mint" if week % 2 == 0 else "burn",
                amount_usd=1e5,
            )
        )
        week += 1


def _emit_arbitrage(
    spec: SyntheticSpec,
    behaviour_pools: list[PoolSpec],
    swaps: list[SwapEvent],
    txns: _TxnCounter,
) -> None:
    """Two-leg bridge transactions through a shared token on behaviour pools."""
    pairs: list[tuple[PoolSpec, PoolSpec, str]] = []
    for i, a in enumerate(behaviour_pools):
        for b in behaviour_pools[i + 1 :]:
            shared = {a.token0, a.token1} & {b.token0, b.token1}
            if shared:
                pairs.append((a, b, min(shared)))
    if not pairs:
        return
    for d in range(spec.days):
        for j in range(spec.arb_txns_per_day):
            buy_pool, sell_pool, token = pairs[(d * spec.arb_txns_per_day + j) % len(pairs)]
            txn_id = txns.next()
            ts = spec.start + d * SECONDS_PER_DAY + 3_600 + j * 997
            origin = f"ARB-{(d * spec.arb_txns_per_day + j) % 20}"
            for leg, (pool, sign) in enumerate(((buy_pool, -1.0), (sell_pool, 1.0))):
                token_amt = sign * 500.0
                other_amt = -token_amt
                if pool.token0 == token:
                    amount0, amount1 = token_amt, other_amt
                else:
                    amount0, amount1 = other_amt, token_amt
                swaps.append(
                    SwapEvent(
                        txn_id=txn_id,
                        log_index=leg,
                        timestamp=ts,
                        pool_id=pool.pool_id,
                        origin=origin,
                        sender="ROUTER-ARB",
                        recipient=origin,
                        amount_usd=500.0,
                        amount0=amount0,
                        amount1=amount1,
                        exec_rate=1.0,
                    )
                )


def build_event_log(spec: SyntheticSpec) -> tuple[EventLog, dict]:
    """Generate the full in-memory log plus the ground-truth manifest dict."""
    swaps: list[SwapEvent] = []
    liquidity: list[LiquidityEvent] = []
    txns = _TxnCounter()
    law_truth: dict[str, dict] = {}

    for pool in spec.pools:
        base_tvl = pool.law.base_tvl if pool.law else 5e6
        _emit_bootstrap(spec, pool, base_tvl, swaps, liquidity, txns)

    for pool in spec.pools:
        if pool.law is None:
            continue
        daily = _planted_daily(spec, pool)
        _emit_law_pool(spec, pool, daily, swaps, liquidity, txns)
        law_truth[pool.pool_id] = {
            "r_pool": pool.law.r_pool,
            "mode": pool.law.mode,
            "noise": pool.law.noise,
            "switch_day": pool.law.switch_day,
            "daily": [
                {"day": row["day"], "t_liq": row["t_liq"], "sigma": row["sigma"], "vol": row["vol"]}
                for row in daily
            ],
        }

    lt_truth: dict[str, str] = {}
    for arch_idx, arch in enumerate(spec.archetypes):
        lt_truth.update(_emit_archetype(spec, arch, arch_idx, swaps, txns))

    behaviour_pools = [p for p in spec.pools if p.law is None]
    arch_of_pool = {
        pool_id: arch for arch in spec.archetypes for pool_id in arch.pools
    }
    for pool in behaviour_pools:
        arch = arch_of_pool.get(pool.pool_id)
        overlap = f"LT-{arch.name}-000" if arch else None
        _emit_behaviour_liquidity(spec, pool, overlap, liquidity, txns)
    _emit_arbitrage(spec, behaviour_pools, swaps, txns)

    swaps.sort(key=lambda s: (s.timestamp, s.txn_id, s.log_index))
    liquidity.sort(key=lambda ev: (ev.timestamp, ev.txn_id, ev.log_index))

    per_pool_events: dict[str, int] = {p.pool_id: 0 for p in spec.pools}
    for s in swaps:
        per_pool_events[s.pool_id] += 1
    for ev in liquidity:
        per_pool_events[ev.pool_id] += 1
    metas = {
        p.pool_id: PoolMeta(
            pool_id=p.pool_id,
            token0_symbol=p.token0,
            token1_symbol=p.token1,
            fee_tier=p.fee_tier,
            created_at=spec.start - spec.pre_days * SECONDS_PER_DAY,
            txn_count=per_pool_events[p.pool_id],
        )
        for p in spec.pools
    }
    log = EventLog(pools=metas, swaps=swaps, liquidity=liquidity)
    truth = {
        "seed": spec.seed,
        "start": spec.start,
        "days": spec.days,
        "window": {"label": "MAIN", "start": spec.start, "end": spec.end},
        "archetype_of": dict(sorted(lt_truth.items())),
        "law": law_truth,
    }
    return log, truth


def _calendar(spec: SyntheticSpec) -> dict[str, str]:
    rng = _substream(spec.seed, _TAG_CAL)
    cal: dict[str, str] = {}
    first = spec.start - (spec.pre_days + 3) * SECONDS_PER_DAY
    last = spec.end + 2 * SECONDS_PER_DAY
    ts = first
    while ts <= last:
        day = date_str(ts)
        weekday = (ts // SECONDS_PER_DAY + 4) % 7  # epoch day 0 was a Thursday
        if weekday in (5, 6):
            cal[day] = "closed"
        else:
            cal[day] = "up" if rng.random() < 0.5 else "down"
        ts += SECONDS_PER_DAY
    return cal


def default_run_config(spec: SyntheticSpec, paths: SynthPaths, out_dir: Path) -> dict:
    """A ready-to-run pipeline configuration matched to the generated data."""
    focus_days = min(10, max(3, spec.days // 4))
    focus_start = spec.start + (spec.days - focus_days) * SECONDS_PER_DAY
    return {
        "events": str(paths.events),
        "pools": str(paths.pools),
        "token_classes": str(paths.token_classes),
        "calendar": str(paths.calendar),
        "out_dir": str(out_dir),
        "seed": spec.seed,
        "workers": 1,
        "windows": [{"label": "MAIN", "start": spec.start, "end": spec.end}],
        "primary_window": "MAIN",
        "selection": {
            "min_txn_count": min(50, spec.pre_swaps),
            "min_pools_per_token": 3,
            "tvl_threshold": 1e6,
        },
        "interconnect": {
            "origin_thresholds": [0, 1, 2, 5, 10],
            "sender_thresholds": [0, 1, 2, 5, 10],
            "bridge_min_count": 2,
        },
        "embed": {
            "lt_min_txns": 60,
            "lt_max_txns": 15_000,
            "dim": 16,
            "ari_dims": [16, 32],
            "epochs": 10,
            "initial_lr": 0.025,
            "min_feature_count": 5,
            "downsample_rate": 1e-4,
            "negatives_per_positive": 5,
        },
        "cluster": {"k_min": 1, "k_max": 8, "n_init": 5},
        "cryptoness": {
            "window_days": min(30, max(3, spec.days - 2)),
            "zscore_threshold": 3.0,
            "xi_floor": 0.3,
            "isotherm_bins": 4,
            "opchange_focus": {
                "label": "FOCUS",
                "start": focus_start,
                "end": spec.end,
            },
            "opchange_baseline": {
                "label": "BASE",
                "start": spec.start,
                "end": focus_start,
            },
        },
    }


def generate_synthetic(spec: SyntheticSpec, out_dir) -> SynthPaths:
    """Write event, metadata, token-class, calendar, manifest, and config files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    log, truth = build_event_log(spec)
    paths = SynthPaths(
        events=out / "events.jsonl",
        pools=out / "pools.jsonl",
        token_classes=out / "token_classes.json",
        calendar=out / "calendar.json",
        ground_truth=out / "ground_truth.json",
        config=out / "config.json",
    )
    write_events(paths.events, log)
    write_pool_metas(paths.pools, log.pools)
    paths.token_classes.write_text(
        json.dumps(
            {"stable": sorted(spec.stable_tokens), "pegged": sorted(spec.pegged_tokens)},
            indent=2,
            sort_keys=True,
        )
    )
    paths.calendar.write_text(json.dumps(_calendar(spec), indent=2, sort_keys=True))
    paths.ground_truth.write_text(json.dumps(truth, indent=2, sort_keys=True))
    cfg = default_run_config(spec, paths, out / "run")
    paths.config.write_text(json.dumps(cfg, indent=2, sort_keys=True))
    return paths


def spec_from_dict(obj: dict) -> SyntheticSpec:
    """Build a SyntheticSpec from its JSON form (see README for the schema)."""
    pools = tuple(
        PoolSpec(
            pool_id=str(p["pool_id"]),
            token0=str(p["token0"]),
            token1=str(p["token1"]),
            fee_tier=int(p["fee_tier"]),
            law=LawParams(**p["law"]) if p.get("law") else None,
        )
        for p in obj["pools"]
    )
    archetypes = tuple(
        ArchetypeSpec(**{**a, "pools": tuple(a["pools"])}) for a in obj.get("archetypes", [])
    )
    kwargs = {
        k: obj[k]
        for k in ("seed", "pre_days", "pre_swaps", "arb_txns_per_day")
        if k in obj
    }
    if "stable_tokens" in obj:
        kwargs["stable_tokens"] = tuple(obj["stable_tokens"])
    if "pegged_tokens" in obj:
        kwargs["pegged_tokens"] = tuple(obj["pegged_tokens"])
    return SyntheticSpec(
        start=int(obj["start"]),
        days=int(obj["days"]),
        pools=pools,
        archetypes=archetypes,
        **kwargs,
    )


def default_spec(seed: int = 0, days: int = 45, start: int = 1_641_000_000 // SECONDS_PER_DAY * SECONDS_PER_DAY) -> SyntheticSpec:
    """The stock desk-scale fixture: four law pools and three LT archetypes."""
    law = [
        PoolSpec("USDC-USDT/100", "USDC", "USDT", 100, LawParams(r_pool=2e4, mode="flat")),
        PoolSpec("USDC-WETH/500", "USDC", "WETH", 500, LawParams(r_pool=5e4, noise=0.05)),
        PoolSpec("WETH-CRV/10000", "WETH", "CRV", 10000, LawParams(r_pool=8e5, noise=0.05)),
        PoolSpec("WBTC-WETH/3000", "WBTC", "WETH", 3000, LawParams(r_pool=1e5, mode="noise")),
    ]
    behaviour = [
        PoolSpec("DAI-USDC/500", "DAI", "USDC", 500),
        PoolSpec("DAI-USDT/500", "DAI", "USDT", 500),
        PoolSpec("USDT-WETH/500", "USDT", "WETH", 500),
        PoolSpec("DAI-WETH/500", "DAI", "WETH", 500),
        PoolSpec("WBTC-WETH/500", "WBTC", "WETH", 500),
        PoolSpec("USDC-WETH/3000", "USDC", "WETH", 3000),
        PoolSpec("WBTC-USDC/3000", "WBTC", "USDC", 3000),
        PoolSpec("SHIB-WETH/3000", "SHIB", "WETH", 3000),
        PoolSpec("CRV-USDC/3000", "CRV", "USDC", 3000),
        PoolSpec("WETH-CRV/3000", "WETH", "CRV", 3000),
        PoolSpec("SHIB-WETH/10000", "SHIB", "WETH", 10000),
        PoolSpec("SHIB-USDC/3000", "SHIB", "USDC", 3000),
    ]
    archetypes = (
        ArchetypeSpec(
            name="STABLE",
            pools=("DAI-USDC/500", "DAI-USDT/500", "USDT-WETH/500", "DAI-WETH/500"),
            swaps_per_lt=600,
            burst_len=8,
            intra_gap_s=60,
            inter_gap_s=3600,
            usd_scale=500.0,
        ),
        ArchetypeSpec(
            name="ECO",
            pools=("WBTC-WETH/500", "USDC-WETH/3000", "WBTC-USDC/3000"),
            swaps_per_lt=600,
            burst_len=20,
            intra_gap_s=30,
            inter_gap_s=10_800,
            usd_scale=5000.0,
        ),
        ArchetypeSpec(
            name="EXO",
            pools=(
                "SHIB-WETH/3000",
                "CRV-USDC/3000",
                "WETH-CRV/3000",
                "SHIB-WETH/10000",
                "SHIB-USDC/3000",
            ),
            swaps_per_lt=600,
            burst_len=4,
            intra_gap_s=300,
            inter_gap_s=1800,
            usd_scale=15_000.0,
        ),
    )
    return SyntheticSpec(
        start=start,
        days=days,
        pools=tuple(law + behaviour),
        archetypes=archetypes,
        seed=seed,
    )

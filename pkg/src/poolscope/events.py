"""Canonical event data model, file ingestion, and derived per-pool series.

Event files are UTF-8 JSON lines.  Each record carries a ``type`` key
("swap" | "mint" | "burn"); swaps additionally carry ``recipient``,
``amount0``, ``amount1`` and ``exec_rate``.  Pool metadata lives in a
separate JSON-lines file and must declare every pool referenced by events.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

log = logging.getLogger(__name__)

SECONDS_PER_DAY = 86_400
FEE_TIERS = (100, 500, 3000, 10000)

SS = "SS"
ECOSYS = "ECOSYS"
EXOTIC = "EXOTIC"
POOL_CLASSES = (SS, ECOSYS, EXOTIC)


class IngestError(ValueError):
    """A record violated a hard data invariant (bad pool ref, bad amounts)."""


def parse_utc(value: int | float | str) -> int:
    """Coerce an epoch integer or ISO date/datetime string to epoch seconds (UTC)."""
    if isinstance(value, (int, float)):
        return int(value)
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def day_of(ts: int) -> int:
    """Epoch seconds of the UTC midnight starting the day containing ``ts``."""
    return ts - ts % SECONDS_PER_DAY


def date_str(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%d")


@dataclass(frozen=True, slots=True)
class TimeWindow:
    """Half-open interval [start, end) in UTC epoch seconds."""

    label: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"window {self.label!r}: start must precede end")

    def contains(self, ts: int) -> bool:
        return self.start <= ts < self.end

    def days(self) -> int:
        """Number of distinct UTC dates intersecting the window."""
        last_in = self.end - 1
        return (day_of(last_in) - day_of(self.start)) // SECONDS_PER_DAY + 1

    @classmethod
    def from_mapping(cls, obj: dict) -> "TimeWindow":
        return cls(str(obj["label"]), parse_utc(obj["start"]), parse_utc(obj["end"]))


@dataclass(frozen=True, slots=True)
class PoolMeta:
    pool_id: str
    token0_symbol: str
    token1_symbol: str
    fee_tier: int
    created_at: int
    txn_count: int

    def __post_init__(self) -> None:
        if self.fee_tier not in FEE_TIERS:
            raise ValueError(f"pool {self.pool_id}: fee_tier {self.fee_tier} not in {FEE_TIERS}")
        if self.token0_symbol == self.token1_symbol:
            raise ValueError(f"pool {self.pool_id}: identical token symbols")
        if self.txn_count < 0:
            raise ValueError(f"pool {self.pool_id}: negative txn_count")


@dataclass(frozen=True, slots=True)
class SwapEvent:
    txn_id: str
    log_index: int
    timestamp: int
    pool_id: str
    origin: str
    sender: str
    recipient: str
    amount_usd: float
    amount0: float
    amount1: float
    exec_rate: float

    def __post_init__(self) -> None:
        if self.amount_usd < 0:
            raise ValueError("negative amount_usd")
        if not (self.amount0 * self.amount1 < 0):
            raise ValueError("amount0 and amount1 must have opposite signs")
        if self.exec_rate <= 0:
            raise ValueError("exec_rate must be positive")


@dataclass(frozen=True, slots=True)
class LiquidityEvent:
    txn_id: str
    log_index: int
    timestamp: int
    pool_id: str
    origin: str
    sender: str
    kind: str  # "mint" | "burn"
    amount_usd: float

    def __post_init__(self) -> None:
        if self.kind not in ("mint", "burn"):
            raise ValueError(f"unknown liquidity kind {self.kind!r}")
        if self.amount_usd < 0:
            raise ValueError("negative amount_usd")

    @property
    def signed_usd(self) -> float:
        return self.amount_usd if self.kind == "mint" else -self.amount_usd


@dataclass
class EventLog:
    """Immutable-by-convention container of validated, time-ordered events."""

    pools: dict[str, PoolMeta]
    swaps: list[SwapEvent] = field(default_factory=list)
    liquidity: list[LiquidityEvent] = field(default_factory=list)
    malformed_lines: int = 0

    def require_pool(self, pool_id: str) -> PoolMeta:
        try:
            return self.pools[pool_id]
        except KeyError:
            raise KeyError(f"unknown pool {pool_id!r}") from None


def _event_sort_key(ev) -> tuple:
    return (ev.timestamp, ev.txn_id, ev.log_index)


def load_pool_metas(path) -> dict[str, PoolMeta]:
    """Read the pool metadata JSON-lines file into a pool_id -> PoolMeta map."""
    metas: dict[str, PoolMeta] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                meta = PoolMeta(
                    pool_id=str(obj["pool"]),
                    token0_symbol=str(obj["token0"]),
                    token1_symbol=str(obj["token1"]),
                    fee_tier=int(obj["fee_tier"]),
                    created_at=parse_utc(obj["created_at"]),
                    txn_count=int(obj["txn_count"]),
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise IngestError(f"{path}:{lineno}: bad pool record: {exc}") from exc
            if meta.pool_id in metas:
                raise IngestError(f"{path}:{lineno}: duplicate pool {meta.pool_id!r}")
            metas[meta.pool_id] = meta
    return metas


class _MalformedRecord(Exception):
    """Line parsed as JSON but its fields cannot be coerced to the schema."""


def _parse_event(obj: dict):
    try:
        kind = obj["type"]
        fields = dict(
            txn_id=str(obj["txn_id"]),
            log_index=int(obj["log_index"]),
            timestamp=int(obj["ts"]),
            pool_id=str(obj["pool"]),
            origin=str(obj["origin"]),
            sender=str(obj["sender"]),
        )
        if kind == "swap":
            extra = dict(
                recipient=str(obj["recipient"]),
                amount_usd=float(obj["amount_usd"]),
                amount0=float(obj["amount0"]),
                amount1=float(obj["amount1"]),
                exec_rate=float(obj["exec_rate"]),
            )
        elif kind in ("mint", "burn"):
            extra = dict(kind=kind, amount_usd=float(obj["amount_usd"]))
        else:
            raise KeyError(f"unknown event type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise _MalformedRecord(str(exc)) from exc
    # Construction is outside the coercion guard: dataclass invariant
    # violations (negative USD, same-sign amounts) must surface as errors.
    if kind == "swap":
        return SwapEvent(**fields, **extra)
    return LiquidityEvent(**fields, **extra)


def ingest_events(path, pools: dict[str, PoolMeta], kinds=None) -> EventLog:
    """Read a JSON-lines event file into a validated, sorted EventLog.

    Syntactically malformed lines (unparseable JSON, missing/garbled keys)
    are skipped, counted on the returned log, and reported via logging.
    Semantic violations — a record referencing an undeclared pool, negative
    ``amount_usd``, same-sign swap amounts, or a duplicate
    (txn_id, log_index) — raise IngestError with the offending line number.

    ``kinds`` optionally restricts ingestion to a subset of
    {"swap", "mint", "burn"}.
    """
    wanted = set(kinds) if kinds is not None else {"swap", "mint", "burn"}
    swaps: list[SwapEvent] = []
    liquidity: list[LiquidityEvent] = []
    seen: set[tuple[str, int]] = set()
    malformed = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                malformed += 1
                log.warning("%s:%d: malformed line skipped (%s)", path, lineno, exc)
                continue
            if not isinstance(obj, dict):
                malformed += 1
                log.warning("%s:%d: malformed line skipped (not an object)", path, lineno)
                continue
            if obj.get("type") in ("swap", "mint", "burn") and obj["type"] not in wanted:
                continue
            try:
                ev = _parse_event(obj)
            except _MalformedRecord as exc:
                malformed += 1
                log.warning("%s:%d: malformed line skipped (%s)", path, lineno, exc)
                continue
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from exc
            if ev.pool_id not in pools:
                raise IngestError(f"{path}:{lineno}: undeclared pool {ev.pool_id!r}")
            key = (ev.txn_id, ev.log_index)
            if key in seen:
                raise IngestError(f"{path}:{lineno}: duplicate (txn_id, log_index) {key}")
            seen.add(key)
            if isinstance(ev, SwapEvent):
                swaps.append(ev)
            else:
                liquidity.append(ev)
    swaps.sort(key=_event_sort_key)
    liquidity.sort(key=_event_sort_key)
    if malformed:
        log.warning("%s: skipped %d malformed line(s)", path, malformed)
    return EventLog(pools=dict(pools), swaps=swaps, liquidity=liquidity, malformed_lines=malformed)


def write_pool_metas(path, metas: dict[str, PoolMeta]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for meta in sorted(metas.values(), key=lambda m: m.pool_id):
            fh.write(
                json.dumps(
                    {
                        "pool": meta.pool_id,
                        "token0": meta.token0_symbol,
                        "token1": meta.token1_symbol,
                        "fee_tier": meta.fee_tier,
                        "created_at": meta.created_at,
                        "txn_count": meta.txn_count,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def write_events(path, log_: EventLog) -> None:
    """Emit all events of a log in canonical (timestamp, txn_id, log_index) order."""
    records = []
    for s in log_.swaps:
        records.append(
            (
                _event_sort_key(s),
                {
                    "type": "swap",
                    "txn_id": s.txn_id,
                    "log_index": s.log_index,
                    "ts": s.timestamp,
                    "pool": s.pool_id,
                    "origin": s.origin,
                    "sender": s.sender,
                    "recipient": s.recipient,
                    "amount_usd": s.amount_usd,
                    "amount0": s.amount0,
                    "amount1": s.amount1,
                    "exec_rate": s.exec_rate,
                },
            )
        )
    for ev in log_.liquidity:
        records.append(
            (
                _event_sort_key(ev),
                {
                    "type": ev.kind,
                    "txn_id": ev.txn_id,
                    "log_index": ev.log_index,
                    "ts": ev.timestamp,
                    "pool": ev.pool_id,
                    "origin": ev.origin,
                    "sender": ev.sender,
                    "amount_usd": ev.amount_usd,
                },
            )
        )
    records.sort(key=lambda r: r[0])
    with open(path, "w", encoding="utf-8") as fh:
        for _, obj in records:
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def load_token_classes(path) -> tuple[set[str], set[str]]:
    """Read the token-class JSON file -> (stable symbols, pegged symbols)."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    stable = set(map(str, obj["stable"]))
    pegged = set(map(str, obj["pegged"]))
    if stable & pegged:
        raise ValueError(f"stable and pegged sets overlap: {sorted(stable & pegged)}")
    return stable, pegged


def classify_pool(meta: PoolMeta, stable_set: set[str], pegged_set: set[str]) -> str:
    """Classify a pool by its token symbols.

    SS when both tokens are stablecoins; ECOSYS when both tokens are
    stablecoins or pegged to the anchor coins but the pair is not SS;
    EXOTIC otherwise.
    """
    if stable_set & pegged_set:
        raise ValueError("stable_set and pegged_set must be disjoint")
    t0, t1 = meta.token0_symbol, meta.token1_symbol
    if t0 in stable_set and t1 in stable_set:
        return SS
    safe = stable_set | pegged_set
    if t0 in safe and t1 in safe:
        return ECOSYS
    return EXOTIC


def proxy_tvl_series(log_: EventLog, pool_id: str) -> list[tuple[int, float]]:
    """Running USD sum of +mint/-burn amounts at each liquidity event of a pool.

    The series is implicitly 0 before the first event.  Negative values are
    surfaced as-is: on consistent chain data they cannot occur, so they flag
    data errors.
    """
    log_.require_pool(pool_id)
    series: list[tuple[int, float]] = []
    total = 0.0
    for ev in log_.liquidity:
        if ev.pool_id != pool_id:
            continue
        total += ev.signed_usd
        series.append((ev.timestamp, total))
    return series


def proxy_tvl_at(series: list[tuple[int, float]], ts: int) -> float:
    """Right-continuous step lookup: value of the last event at or before ts."""
    value = 0.0
    for ev_ts, ev_val in series:
        if ev_ts > ts:
            break
        value = ev_val
    return value


def exchange_rate_series(log_: EventLog, pool_id: str, window: TimeWindow) -> list[float]:
    """Execution rates of the pool's swaps inside the window, in time order."""
    log_.require_pool(pool_id)
    return [s.exec_rate for s in log_.swaps if s.pool_id == pool_id and window.contains(s.timestamp)]


def population_std(values) -> float:
    n = len(values)
    if n == 0:
        raise ValueError("population_std of empty sequence")
    mean = sum(values) / n
    return math.sqrt(sum((v - mean) ** 2 for v in values) / n)

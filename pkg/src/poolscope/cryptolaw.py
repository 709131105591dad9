"""Pool-health regression: daily state rows, zero-intercept fits, and the
dynamics built on them.

Each pool-day is summarised as (volume, rate stability, liquidity, fee
stimulus); a zero-intercept regression of volume against
(fee stimulus * liquidity / stability) yields the pool's characteristic
slope and a goodness score in (-inf, 1] used as a health measure.  The
score uses the centered total sum of squares, so poorly adhering pools
legitimately score below zero.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .events import (
    SECONDS_PER_DAY,
    EventLog,
    TimeWindow,
    day_of,
    population_std,
    proxy_tvl_series,
    proxy_tvl_at,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DailyLawRow:
    date: int  # UTC midnight epoch seconds
    p_vol: float  # USD swap volume of the day
    v_stab: float  # 1 / population std of the day's execution rates
    n_fee: float  # 1 / fee tier
    t_liq: float  # TVL proxy sampled at day end

    @property
    def x(self) -> float:
        return self.n_fee * self.t_liq / self.v_stab

    @property
    def y(self) -> float:
        return self.p_vol


@dataclass(frozen=True)
class LawFit:
    r_pool: float
    xi: float
    n_obs: int

    def __post_init__(self) -> None:
        if self.n_obs < 3:
            raise ValueError("a reported fit needs at least 3 observations")
        if self.xi > 1 + 1e-12:
            raise ValueError("xi cannot exceed 1")


def daily_law_rows(log_: EventLog, pool_id: str, w: TimeWindow) -> list[DailyLawRow]:
    """One row per UTC day of the window with at least two swaps.

    Days with a single swap (std undefined) or identical rates (zero std)
    are dropped; drops are logged.  Liquidity is the right-continuous TVL
    proxy sampled at the last second of the day.
    """
    meta = log_.require_pool(pool_id)
    series = proxy_tvl_series(log_, pool_id)
    by_day: dict[int, list] = defaultdict(list)
    for s in log_.swaps:
        if s.pool_id == pool_id and w.contains(s.timestamp):
            by_day[day_of(s.timestamp)].append(s)
    rows: list[DailyLawRow] = []
    dropped = 0
    for day in sorted(by_day):
        swaps = by_day[day]
        if len(swaps) < 2:
            dropped += 1
            continue
        std = population_std([s.exec_rate for s in swaps])
        if std == 0:
            dropped += 1
            continue
        rows.append(
            DailyLawRow(
                date=day,
                p_vol=sum(s.amount_usd for s in swaps),
                v_stab=1.0 / std,
                n_fee=1.0 / meta.fee_tier,
                t_liq=proxy_tvl_at(series, day + SECONDS_PER_DAY - 1),
            )
        )
    if dropped:
        log.debug("pool %s window %s: dropped %d day(s) without defined std",
                  pool_id, w.label, dropped)
    return rows


def zscore_filter(rows: list[DailyLawRow], threshold: float = 3.0) -> list[DailyLawRow]:
    """Single-pass outlier drop on (volume, stability, liquidity) z-scores.

    A row is dropped when any variable's |z| exceeds the threshold; z-scores
    use the mean and population std of the input rows.  Variables with zero
    variance are skipped.  The pass is not re-iterated.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    keep = np.ones(len(rows), dtype=bool)
    for values in (
        np.array([r.p_vol for r in rows]),
        np.array([r.v_stab for r in rows]),
        np.array([r.t_liq for r in rows]),
    ):
        std = values.std()
        if std == 0:
            continue
        z = (values - values.mean()) / std
        keep &= np.abs(z) <= threshold
    return [r for r, k in zip(rows, keep) if k]


def fit_crypto_law(rows: list[DailyLawRow]) -> LawFit:
    """Zero-intercept least squares of y = slope * x over the rows.

    The goodness score is 1 - SS_res / SS_tot with SS_tot centered about the
    mean of y, so it can go negative when forcing the origin fits worse than
    the flat mean — the regime expected of stable-stable pools.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    x = np.array([r.x for r in rows])
    y = np.array([r.y for r in rows])
    sxx = float(x @ x)
    if sxx == 0:
        raise ValueError("all x are zero; slope undefined")
    slope = float(x @ y) / sxx
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0:
        raise ValueError("constant y; goodness score undefined")
    ss_res = float(np.sum((y - slope * x) ** 2))
    return LawFit(r_pool=slope, xi=1.0 - ss_res / ss_tot, n_obs=len(rows))


def sliding_cryptoness(
    rows: list[DailyLawRow], window_days: int = 30, step_days: int = 1
) -> list[tuple[int, LawFit]]:
    """Windowed fits over date-sorted rows; entries are (window end date, fit).

    Every window of ``window_days`` consecutive calendar days fully inside
    the data's date span is fitted after per-window outlier filtering.
    Windows with fewer than 3 surviving rows, or whose fit is degenerate,
    are skipped.
    """
    if window_days < 1 or step_days < 1:
        raise ValueError("window_days and step_days must be >= 1")
    dates = [r.date for r in rows]
    if dates != sorted(dates):
        raise ValueError("rows must be date-sorted")
    if not rows:
        return []
    span = window_days * SECONDS_PER_DAY
    out: list[tuple[int, LawFit]] = []
    for start in range(dates[0], dates[-1] - span + SECONDS_PER_DAY + 1,
                       step_days * SECONDS_PER_DAY):
        in_window = [r for r in rows if start <= r.date < start + span]
        if len(in_window) < 3:
            continue
        surviving = zscore_filter(in_window)
        if len(surviving) < 3:
            continue
        try:
            fit = fit_crypto_law(surviving)
        except ValueError as exc:
            log.debug("window ending %d skipped: %s", start + span - SECONDS_PER_DAY, exc)
            continue
        out.append((start + span - SECONDS_PER_DAY, fit))
    return out


@dataclass
class IsothermBin:
    t_lo: float
    t_hi: float
    points: list[tuple[float, float]]  # (p_vol, v_stab)
    flagged: bool = False  # one of the two most-populated bins


def isotherm_bins(rows: list[DailyLawRow], n_bins: int) -> list[IsothermBin]:
    """Equal-width liquidity bins with their (volume, stability) scatter sets.

    The two most-populated bins are flagged for the constant-liquidity
    upper-shift check.
    """
    if n_bins < 2:
        raise ValueError("need at least 2 bins")
    t = [r.t_liq for r in rows]
    t_min, t_max = min(t), max(t)
    if t_min == t_max:
        raise ValueError("degenerate liquidity range")
    width = (t_max - t_min) / n_bins
    bins = [
        IsothermBin(t_lo=t_min + i * width, t_hi=t_min + (i + 1) * width, points=[])
        for i in range(n_bins)
    ]
    for r in rows:
        idx = min(int((r.t_liq - t_min) / width), n_bins - 1)
        bins[idx].points.append((r.p_vol, r.v_stab))
    top_two = sorted(range(n_bins), key=lambda i: (-len(bins[i].points), i))[:2]
    for i in top_two:
        bins[i].flagged = True
    return bins


@dataclass(frozen=True)
class OpChange:
    """Relative change of average daily operation counts, focus vs baseline.

    A kind is None when the baseline shows no such operations; the average
    covers the defined kinds only.
    """

    swap: float | None
    mint: float | None
    burn: float | None
    avg: float | None


def op_change(
    log_: EventLog, pool_id: str, focus: TimeWindow, baseline: TimeWindow
) -> OpChange:
    if focus.start < baseline.end and baseline.start < focus.end:
        raise ValueError("focus and baseline windows must be disjoint")
    log_.require_pool(pool_id)

    def daily_counts(w: TimeWindow) -> dict[str, float]:
        counts = {"swap": 0, "mint": 0, "burn": 0}
        for s in log_.swaps:
            if s.pool_id == pool_id and w.contains(s.timestamp):
                counts["swap"] += 1
        for ev in log_.liquidity:
            if ev.pool_id == pool_id and w.contains(ev.timestamp):
                counts[ev.kind] += 1
        days = w.days()
        return {kind: c / days for kind, c in counts.items()}

    base = daily_counts(baseline)
    foc = daily_counts(focus)
    changes: dict[str, float | None] = {}
    for kind in ("swap", "mint", "burn"):
        changes[kind] = (foc[kind] - base[kind]) / base[kind] if base[kind] > 0 else None
    defined = [c for c in changes.values() if c is not None]
    return OpChange(
        swap=changes["swap"],
        mint=changes["mint"],
        burn=changes["burn"],
        avg=sum(defined) / len(defined) if defined else None,
    )


@dataclass
class RPoolSummary:
    values: list[float]
    mean: float | None
    order_of_magnitude: int | None


def rpool_distribution(
    fits: list[tuple[int, LawFit]], xi_floor: float = 0.3
) -> RPoolSummary:
    """Slopes of the fits whose goodness score clears the floor."""
    values = [fit.r_pool for _, fit in fits if fit.xi > xi_floor]
    if not values:
        return RPoolSummary(values=[], mean=None, order_of_magnitude=None)
    mean = sum(values) / len(values)
    order = int(math.floor(math.log10(abs(mean)))) if mean != 0 else None
    return RPoolSummary(values=values, mean=mean, order_of_magnitude=order)

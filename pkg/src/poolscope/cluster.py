"""Seeded k-means++ with elbow selection, partition similarity, and
behavioural profiling of liquidity takers."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from statistics import median

import numpy as np

from .events import EventLog, TimeWindow, date_str

LLOYD_MAX_ITER = 300
ELBOW_IMPROVEMENT = 0.10


@dataclass
class Clustering:
    labels: np.ndarray  # cluster index per input row
    k: int
    inertia: float
    centers: np.ndarray

    def __post_init__(self) -> None:
        if self.inertia < 0:
            raise ValueError("inertia must be non-negative")


def _inertia(points: np.ndarray, centers: np.ndarray, labels: np.ndarray) -> float:
    return float(np.sum((points - centers[labels]) ** 2))


def _seed_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-weighted seeding: each new center is drawn with probability
    proportional to the squared distance from the nearest chosen center."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:  # all remaining points coincide with a center
            centers[j:] = points[rng.integers(n, size=k - j)]
            break
        probs = d2 / total
        centers[j] = points[rng.choice(n, p=probs)]
        d2 = np.minimum(d2, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(points: np.ndarray, centers: np.ndarray) -> Clustering:
    k = centers.shape[0]
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    prev_inertia = math.inf
    for _ in range(LLOYD_MAX_ITER):
        d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(d2, axis=1)
        for j in range(k):
            mask = new_labels == j
            if mask.any():
                centers[j] = points[mask].mean(axis=0)
            else:
                # repair: hand the empty cluster the point farthest from its
                # current center
                far = int(np.argmax(np.sum((points - centers[new_labels]) ** 2, axis=1)))
                new_labels[far] = j
                centers[j] = points[far]
        inertia = _inertia(points, centers, new_labels)
        assert inertia <= prev_inertia * (1 + 1e-9) + 1e-12, "Lloyd inertia increased"
        converged = np.array_equal(new_labels, labels)
        labels = new_labels
        prev_inertia = inertia
        if converged:
            break
    return Clustering(labels=labels, k=k, inertia=prev_inertia, centers=centers)


def kmeans_pp(points: np.ndarray, k: int, seed: int) -> Clustering:
    """k-means++ seeding followed by Lloyd iterations to an assignment fixpoint.

    Deterministic for a fixed seed.  Raises on k outside [1, n] or non-finite
    coordinates.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] < 1:
        raise ValueError("points must be a 2-D matrix")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite coordinates")
    rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
    return _lloyd(points, _seed_centers(points, k, rng))


def kmeans_best(
    points: np.ndarray,
    k: int,
    seed: int,
    n_init: int = 5,
    warm_centers: np.ndarray | None = None,
) -> Clustering:
    """Best of ``n_init`` seeded runs, optionally also trying a warm start.

    The warm start appends the farthest point to a previous solution's
    centers, which guarantees the best-of inertia cannot exceed the previous
    k's — this keeps elbow curves monotone.
    """
    candidates = [kmeans_pp(points, k, seed * 1009 + trial) for trial in range(n_init)]
    if warm_centers is not None and warm_centers.shape[0] == k - 1:
        pts = np.asarray(points, dtype=np.float64)
        d2 = np.min(
            np.sum((pts[:, None, :] - warm_centers[None, :, :]) ** 2, axis=2), axis=1
        )
        extra = pts[int(np.argmax(d2))]
        centers = np.vstack([warm_centers, extra[None, :]])
        candidates.append(_lloyd(pts, centers.copy()))
    return min(candidates, key=lambda c: c.inertia)


def inertia_sweep(
    points: np.ndarray, ks: list[int], seed: int, n_init: int = 5
) -> dict[int, Clustering]:
    """Best clustering per k over an ascending, consecutive range of ks."""
    if sorted(ks) != list(ks):
        raise ValueError("ks must be ascending")
    out: dict[int, Clustering] = {}
    prev: Clustering | None = None
    for k in ks:
        warm = prev.centers if prev is not None and prev.k == k - 1 else None
        out[k] = kmeans_best(points, k, seed, n_init=n_init, warm_centers=warm)
        prev = out[k]
    return out


def elbow_select(inertias: dict[int, float]) -> int:
    """Pick the k after which extra clusters stop paying for themselves.

    Returns the smallest k whose relative improvement to k+1 falls below 10%;
    when every step keeps improving faster than that, falls back to the k
    with the largest curvature (second difference).
    """
    ks = sorted(inertias)
    if len(ks) < 3:
        raise ValueError("need at least 3 k values")
    if ks != list(range(ks[0], ks[-1] + 1)):
        raise ValueError("k values must be consecutive")
    for k in ks[:-1]:
        cur, nxt = inertias[k], inertias[k + 1]
        improvement = (cur - nxt) / cur if cur > 0 else 0.0
        if improvement <= ELBOW_IMPROVEMENT:
            return k
    curvature = {
        k: inertias[k - 1] - 2 * inertias[k] + inertias[k + 1] for k in ks[1:-1]
    }
    return min(curvature, key=lambda k: (-curvature[k], k))


def adjusted_rand_index(a, b) -> float:
    """Chance-adjusted agreement between two labelings of the same items."""
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise ValueError("labelings must cover the same items")
    n = len(a)
    if n < 2:
        raise ValueError("need at least 2 items")
    table: dict[tuple, int] = {}
    rows: dict[object, int] = {}
    cols: dict[object, int] = {}
    for x, y in zip(a, b):
        table[(x, y)] = table.get((x, y), 0) + 1
        rows[x] = rows.get(x, 0) + 1
        cols[y] = cols.get(y, 0) + 1

    def comb2(m: int) -> float:
        return m * (m - 1) / 2.0

    sum_ij = sum(comb2(c) for c in table.values())
    sum_a = sum(comb2(c) for c in rows.values())
    sum_b = sum(comb2(c) for c in cols.values())
    expected = sum_a * sum_b / comb2(n)
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:  # both partitions trivial and identical in structure
        return 1.0
    return (sum_ij - expected) / (max_index - expected)


def entropy(proportions) -> float:
    """Shannon entropy in nats; zero-probability terms contribute nothing."""
    return -sum(p * math.log(p) for p in proportions if p > 0)


@dataclass
class LTProfile:
    avg_usd: float
    median_usd: float
    avg_dt: float
    median_dt: float
    prop_ss: float
    prop_ecosys: float
    prop_exotic: float
    class_entropy: float
    prop_fee_100: float
    prop_fee_500: float
    prop_fee_3000: float
    prop_fee_10000: float
    fee_entropy: float
    prop_market_up: float
    prop_market_down: float
    prop_market_closed: float

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)])


PROFILE_FEATURES = [f.name for f in fields(LTProfile)]


def lt_features(
    log: EventLog,
    lt_ids: set[str],
    pools: set[str],
    w: TimeWindow,
    class_map: dict[str, str],
    index_calendar: dict[str, str],
) -> dict[str, LTProfile]:
    """Behavioural summary per LT over its window swaps on the pool set.

    ``class_map`` must cover every pool; ``index_calendar`` maps each UTC
    date string to "up" | "down" | "closed".  An LT with no swaps in the
    window is a contract violation (they are filtered upstream).
    """
    missing = pools - set(class_map)
    if missing:
        raise KeyError(f"class_map missing pools: {sorted(missing)}")
    swaps_by_lt: dict[str, list] = {lt: [] for lt in lt_ids}
    for s in log.swaps:
        if s.origin in swaps_by_lt and s.pool_id in pools and w.contains(s.timestamp):
            swaps_by_lt[s.origin].append(s)
    profiles: dict[str, LTProfile] = {}
    for lt in sorted(lt_ids):
        swaps = sorted(swaps_by_lt[lt], key=lambda s: (s.timestamp, s.txn_id, s.log_index))
        if not swaps:
            raise ValueError(f"LT {lt!r} has no swaps in window {w.label!r}")
        n = len(swaps)
        usd = [s.amount_usd for s in swaps]
        gaps = [float(b.timestamp - a.timestamp) for a, b in zip(swaps, swaps[1:])]
        class_counts = {"SS": 0, "ECOSYS": 0, "EXOTIC": 0}
        fee_counts = {100: 0, 500: 0, 3000: 0, 10000: 0}
        market_counts = {"up": 0, "down": 0, "closed": 0}
        for s in swaps:
            class_counts[class_map[s.pool_id]] += 1
            fee_counts[log.pools[s.pool_id].fee_tier] += 1
            day = date_str(s.timestamp)
            if day not in index_calendar:
                raise KeyError(f"index calendar missing date {day}")
            market_counts[index_calendar[day]] += 1
        class_props = [class_counts[c] / n for c in ("SS", "ECOSYS", "EXOTIC")]
        fee_props = [fee_counts[t] / n for t in (100, 500, 3000, 10000)]
        market_props = [market_counts[m] / n for m in ("up", "down", "closed")]
        profiles[lt] = LTProfile(
            avg_usd=sum(usd) / n,
            median_usd=float(median(usd)),
            avg_dt=sum(gaps) / len(gaps) if gaps else 0.0,
            median_dt=float(median(gaps)) if gaps else 0.0,
            prop_ss=class_props[0],
            prop_ecosys=class_props[1],
            prop_exotic=class_props[2],
            class_entropy=entropy(class_props),
            prop_fee_100=fee_props[0],
            prop_fee_500=fee_props[1],
            prop_fee_3000=fee_props[2],
            prop_fee_10000=fee_props[3],
            fee_entropy=entropy(fee_props),
            prop_market_up=market_props[0],
            prop_market_down=market_props[1],
            prop_market_closed=market_props[2],
        )
    return profiles


def profile_clusters(
    labels: dict[str, int], profiles: dict[str, LTProfile]
) -> tuple[dict[int, int], dict[int, np.ndarray]]:
    """Column-wise feature means per cluster plus cluster sizes."""
    missing = set(labels) - set(profiles)
    if missing:
        raise KeyError(f"profiles missing for: {sorted(missing)}")
    sizes: dict[int, int] = {}
    sums: dict[int, np.ndarray] = {}
    for lt, cluster in labels.items():
        vec = profiles[lt].as_vector()
        sizes[cluster] = sizes.get(cluster, 0) + 1
        sums[cluster] = sums.get(cluster, np.zeros_like(vec)) + vec
    return sizes, {c: sums[c] / sizes[c] for c in sums}

"""Per-pool activity features, rank correlations, and PCA projections.

Thirteen per-pool statistics summarise swap and liquidity activity over a
window (daily averages are taken over every day of the window, quiet days
included).  The feature matrix feeds a Spearman correlation heatmap and
linear / rbf / cosine kernel PCA projections.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, fields

import numpy as np
from scipy.stats import rankdata

from .events import EventLog, TimeWindow, day_of, population_std

KERNELS = ("linear", "rbf", "cosine")


@dataclass
class PoolFeatureRow:
    SdailyLT: float  # avg daily distinct swap origins
    LdailyLP: float  # avg daily distinct liquidity origins
    SstdP: float  # execution-rate std over the window; NaN when no swaps
    SavgUSD: float
    LavgUSDmint: float
    LavgUSDburn: float
    SdailyVol: float
    LdailyVolMint: float
    LdailyVolBurn: float
    SdailyTxn: float
    LdailyTxn: float
    SdailyS: float  # avg daily distinct swap senders
    Sdaily1txn: float  # one-swap origins per day
    SfeeTier: float | None = None

    def as_vector(self, include_fee: bool = False) -> np.ndarray:
        values = [getattr(self, f.name) for f in fields(self)[:13]]
        if include_fee:
            values.append(self.SfeeTier)
        return np.array(values, dtype=float)


POOL_FEATURE_NAMES = [f.name for f in fields(PoolFeatureRow)][:13]


def compute_pool_features(
    log: EventLog, pools: set[str], w: TimeWindow
) -> dict[str, PoolFeatureRow]:
    """Thirteen activity features per pool over the window.

    A pool with no swaps still gets a row: swap-side features are 0 and the
    rate volatility is NaN to flag that it is undefined.
    """
    unknown = pools - set(log.pools)
    if unknown:
        raise KeyError(f"pools not in log: {sorted(unknown)}")
    days = w.days()
    out: dict[str, PoolFeatureRow] = {}
    for pool_id in sorted(pools):
        swaps = [s for s in log.swaps if s.pool_id == pool_id and w.contains(s.timestamp)]
        liq = [ev for ev in log.liquidity if ev.pool_id == pool_id and w.contains(ev.timestamp)]
        mints = [ev for ev in liq if ev.kind == "mint"]
        burns = [ev for ev in liq if ev.kind == "burn"]

        daily_origins: dict[int, set[str]] = defaultdict(set)
        daily_senders: dict[int, set[str]] = defaultdict(set)
        origin_swaps: Counter[str] = Counter()
        for s in swaps:
            daily_origins[day_of(s.timestamp)].add(s.origin)
            daily_senders[day_of(s.timestamp)].add(s.sender)
            origin_swaps[s.origin] += 1
        daily_lp: dict[int, set[str]] = defaultdict(set)
        for ev in liq:
            daily_lp[day_of(ev.timestamp)].add(ev.origin)

        rates = [s.exec_rate for s in swaps]
        usd = [s.amount_usd for s in swaps]
        out[pool_id] = PoolFeatureRow(
            SdailyLT=sum(len(v) for v in daily_origins.values()) / days,
            LdailyLP=sum(len(v) for v in daily_lp.values()) / days,
            SstdP=population_std(rates) if rates else math.nan,
            SavgUSD=sum(usd) / len(usd) if usd else 0.0,
            LavgUSDmint=sum(ev.amount_usd for ev in mints) / len(mints) if mints else 0.0,
            LavgUSDburn=sum(ev.amount_usd for ev in burns) / len(burns) if burns else 0.0,
            SdailyVol=sum(usd) / days,
            LdailyVolMint=sum(ev.amount_usd for ev in mints) / days,
            LdailyVolBurn=sum(ev.amount_usd for ev in burns) / days,
            SdailyTxn=len(swaps) / days,
            LdailyTxn=len(liq) / days,
            SdailyS=sum(len(v) for v in daily_senders.values()) / days,
            Sdaily1txn=sum(1 for c in origin_swaps.values() if c == 1) / days,
            SfeeTier=float(log.pools[pool_id].fee_tier),
        )
    return out


def spearman_matrix(rows: np.ndarray) -> np.ndarray:
    """Spearman correlations between feature columns.

    Ranks use the average-rank convention for ties, then plain Pearson on
    the ranks.  Columns with zero rank variance get NaN against every other
    column (diagonal stays 1).
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 3:
        raise ValueError("need a matrix with at least 3 rows")
    n, d = rows.shape
    ranks = np.column_stack([rankdata(rows[:, j], method="average") for j in range(d)])
    centered = ranks - ranks.mean(axis=0)
    stds = centered.std(axis=0)
    corr = np.full((d, d), np.nan)
    for i in range(d):
        for j in range(i, d):
            if i == j:
                corr[i, j] = 1.0
            elif stds[i] > 0 and stds[j] > 0:
                corr[i, j] = corr[j, i] = float(
                    (centered[:, i] @ centered[:, j]) / (n * stds[i] * stds[j])
                )
    return corr


def standardize(rows: np.ndarray) -> np.ndarray:
    """Column-wise zero mean, unit (population) variance."""
    rows = np.asarray(rows, dtype=float)
    stds = rows.std(axis=0)
    if np.any(stds == 0):
        bad = np.flatnonzero(stds == 0).tolist()
        raise ValueError(f"constant feature column(s) {bad} cannot be standardized")
    return (rows - rows.mean(axis=0)) / stds


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make each column's first non-negligible loading positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def pca_project(
    rows: np.ndarray, kernel: str = "linear", dims: int = 3, rbf_gamma: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Top-``dims`` PCA projections plus the full eigenvalue spectrum.

    Rows are standardized before any kernel is evaluated.  The linear path
    eigendecomposes the covariance matrix; kernel paths double-center the
    kernel matrix first.  Eigenvalues come back descending with numerical
    negatives clipped to zero.  The rbf bandwidth defaults to 1/n_features.
    """
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}")
    rows = np.asarray(rows, dtype=float)
    if rows.shape[0] < dims + 1:
        raise ValueError("need at least dims + 1 rows")
    x = standardize(rows)
    n, d = x.shape

    if kernel == "linear":
        cov = x.T @ x / n
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1]
        eigvals = np.clip(eigvals[order], 0.0, None)
        eigvecs = _fix_signs(eigvecs[:, order])
        rank = int(np.sum(eigvals > 1e-9 * max(eigvals[0], 1e-30)))
        if dims > rank:
            raise ValueError(f"dims={dims} exceeds data rank {rank}")
        return x @ eigvecs[:, :dims], eigvals

    if kernel == "rbf":
        gamma = rbf_gamma if rbf_gamma is not None else 1.0 / d
        sq = np.sum(x**2, axis=1)
        k_mat = np.exp(-gamma * (sq[:, None] + sq[None, :] - 2 * x @ x.T))
    else:  # cosine
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero rows cannot be cosine-normalized")
        unit = x / norms[:, None]
        k_mat = unit @ unit.T

    one = np.full((n, n), 1.0 / n)
    centered = k_mat - one @ k_mat - k_mat @ one + one @ k_mat @ one
    eigvals, alphas = np.linalg.eigh(centered)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    alphas = _fix_signs(alphas[:, order])
    rank = int(np.sum(eigvals > 1e-9 * max(eigvals[0], 1e-30)))
    if dims > rank:
        raise ValueError(f"dims={dims} exceeds kernel rank {rank}")
    return alphas[:, :dims] * np.sqrt(eigvals[:dims]), eigvals

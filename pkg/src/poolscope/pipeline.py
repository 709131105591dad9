"""Run orchestration: configuration, stage execution, and report emission.

Stages run in dependency order (select feeds everything; embed feeds
cluster).  Data outputs land under ``<out_dir>/reports/`` and are
byte-reproducible in single-worker mode for a fixed seed; the manifest at
``<out_dir>/manifest.json`` records the config hash, seed, input and output
digests, per-stage row counts, and wall-clock timings (timings are the one
part of a run that legitimately varies between repeats, which is why the
manifest lives outside the reports tree).
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import cryptolaw, graphs, poolfeats
from .cluster import (
    PROFILE_FEATURES,
    adjusted_rand_index,
    elbow_select,
    inertia_sweep,
    lt_features,
    profile_clusters,
)
from .embed import TrainConfig, build_transaction_graph, sample_neighbourhoods, train_embeddings
from .embed.txgraph import filter_lts
from .embed.wl import wl_relabel
from .events import (
    TimeWindow,
    classify_pool,
    ingest_events,
    load_pool_metas,
    load_token_classes,
)
from .selection import SelectionConfig, select_universes

log = logging.getLogger(__name__)

STAGES = ("select", "interconnect", "embed", "cluster", "poolfeat", "cryptoness")
_DEPS = {
    "select": (),
    "interconnect": ("select",),
    "embed": ("select",),
    "cluster": ("embed",),
    "poolfeat": ("select",),
    "cryptoness": ("select",),
}


class ConfigError(ValueError):
    """Invalid configuration or missing upstream artifacts."""


@dataclass(frozen=True)
class InterconnectConfig:
    origin_thresholds: tuple[float, ...] = (0, 1, 2, 5, 10)
    sender_thresholds: tuple[float, ...] = (0, 1, 2, 5, 10)
    origin_component_threshold: float = 1.0
    sender_component_threshold: float = 1.0
    bridge_min_count: int = 1


@dataclass(frozen=True)
class EmbedConfig:
    lt_min_txns: int = 60
    lt_max_txns: int = 15_000
    dim: int = 16
    ari_dims: tuple[int, ...] = (16, 32)
    epochs: int = 10
    initial_lr: float = 0.025
    min_feature_count: int = 5
    downsample_rate: float = 1e-4
    negatives_per_positive: int = 5
    neighbourhood_seed: int = 0


@dataclass(frozen=True)
class ClusterConfig:
    k_min: int = 1
    k_max: int = 8
    n_init: int = 5


@dataclass(frozen=True)
class CryptonessConfig:
    window_days: int = 30
    step_days: int = 1
    zscore_threshold: float = 3.0
    xi_floor: float = 0.3
    isotherm_bins: int = 4
    opchange_focus: TimeWindow | None = None
    opchange_baseline: TimeWindow | None = None


@dataclass
class RunConfig:
    events: Path
    pools: Path
    token_classes: Path
    calendar: Path
    out_dir: Path
    windows: list[TimeWindow]
    primary_window: str
    seed: int = 0
    workers: int = 1
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    interconnect: InterconnectConfig = field(default_factory=InterconnectConfig)
    embed: EmbedConfig = field(default_factory=EmbedConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    cryptoness: CryptonessConfig = field(default_factory=CryptonessConfig)

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        try:
            windows = [TimeWindow.from_mapping(w) for w in obj["windows"]]
            if not windows:
                raise ConfigError("at least one window is required")
            primary = obj.get("primary_window", windows[0].label)
            if primary not in {w.label for w in windows}:
                raise ConfigError(f"primary_window {primary!r} not among windows")
            sel = obj.get("selection", {})
            ic = obj.get("interconnect", {})
            em = obj.get("embed", {})
            cl = obj.get("cluster", {})
            cx = obj.get("cryptoness", {})
            return cls(
                events=Path(obj["events"]),
                pools=Path(obj["pools"]),
                token_classes=Path(obj["token_classes"]),
                calendar=Path(obj["calendar"]),
                out_dir=Path(obj["out_dir"]),
                windows=windows,
                primary_window=primary,
                seed=int(obj.get("seed", 0)),
                workers=int(obj.get("workers", 1)),
                selection=SelectionConfig(
                    min_txn_count=int(sel.get("min_txn_count", 1000)),
                    min_pools_per_token=int(sel.get("min_pools_per_token", 3)),
                    tvl_threshold=float(sel.get("tvl_threshold", 1e6)),
                    windows=tuple(windows),
                ),
                interconnect=InterconnectConfig(
                    origin_thresholds=tuple(ic.get("origin_thresholds", (0, 1, 2, 5, 10))),
                    sender_thresholds=tuple(ic.get("sender_thresholds", (0, 1, 2, 5, 10))),
                    origin_component_threshold=float(ic.get("origin_component_threshold", 1)),
                    sender_component_threshold=float(ic.get("sender_component_threshold", 1)),
                    bridge_min_count=int(ic.get("bridge_min_count", 1)),
                ),
                embed=EmbedConfig(
                    lt_min_txns=int(em.get("lt_min_txns", 60)),
                    lt_max_txns=int(em.get("lt_max_txns", 15_000)),
                    dim=int(em.get("dim", 16)),
                    ari_dims=tuple(int(d) for d in em.get("ari_dims", (16, 32))),
                    epochs=int(em.get("epochs", 10)),
                    initial_lr=float(em.get("initial_lr", 0.025)),
                    min_feature_count=int(em.get("min_feature_count", 5)),
                    downsample_rate=float(em.get("downsample_rate", 1e-4)),
                    negatives_per_positive=int(em.get("negatives_per_positive", 5)),
                    neighbourhood_seed=int(em.get("neighbourhood_seed", obj.get("seed", 0))),
                ),
                cluster=ClusterConfig(
                    k_min=int(cl.get("k_min", 1)),
                    k_max=int(cl.get("k_max", 8)),
                    n_init=int(cl.get("n_init", 5)),
                ),
                cryptoness=CryptonessConfig(
                    window_days=int(cx.get("window_days", 30)),
                    step_days=int(cx.get("step_days", 1)),
                    zscore_threshold=float(cx.get("zscore_threshold", 3.0)),
                    xi_floor=float(cx.get("xi_floor", 0.3)),
                    isotherm_bins=int(cx.get("isotherm_bins", 4)),
                    opchange_focus=(
                        TimeWindow.from_mapping(cx["opchange_focus"])
                        if "opchange_focus" in cx
                        else None
                    ),
                    opchange_baseline=(
                        TimeWindow.from_mapping(cx["opchange_baseline"])
                        if "opchange_baseline" in cx
                        else None
                    ),
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad configuration: {exc}") from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def primary(self) -> TimeWindow:
        return next(w for w in self.windows if w.label == self.primary_window)

    def canonical_json(self) -> str:
        def default(value):
            if isinstance(value, Path):
                return str(value)
            if isinstance(value, TimeWindow):
                return {"label": value.label, "start": value.start, "end": value.end}
            if hasattr(value, "__dict__"):
                return value.__dict__
            if isinstance(value, tuple):
                return list(value)
            raise TypeError(f"unserializable {type(value)}")

        return json.dumps(self.__dict__, default=default, sort_keys=True)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


class _Run:
    """State shared between stages of one pipeline invocation."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.reports = cfg.out_dir / "reports"
        self.reports.mkdir(parents=True, exist_ok=True)
        for name in (cfg.events, cfg.pools, cfg.token_classes, cfg.calendar):
            if not Path(name).exists():
                raise ConfigError(f"input file missing: {name}")
        self.metas = load_pool_metas(cfg.pools)
        self.log = ingest_events(cfg.events, self.metas)
        self.stable, self.pegged = load_token_classes(cfg.token_classes)
        with open(cfg.calendar, encoding="utf-8") as fh:
            self.calendar = json.load(fh)
        self.counts: dict[str, dict] = {}
        self.universe: set[str] | None = None
        self.embeddings: dict[int, tuple[list[str], np.ndarray]] = {}

    # -- artifact handoff ---------------------------------------------------

    def universe_path(self) -> Path:
        return self.reports / f"universe_{self.cfg.primary_window}.json"

    def load_universe(self) -> set[str]:
        if self.universe is not None:
            return self.universe
        path = self.universe_path()
        if not path.exists():
            raise ConfigError(f"missing upstream artifact {path}; run the select stage first")
        with open(path, encoding="utf-8") as fh:
            self.universe = set(json.load(fh)["pools"])
        return self.universe

    def embedding_path(self, dim: int) -> Path:
        return self.reports / f"embeddings_{dim}.csv"

    def load_embeddings(self, dim: int) -> tuple[list[str], np.ndarray]:
        if dim in self.embeddings:
            return self.embeddings[dim]
        path = self.embedding_path(dim)
        if not path.exists():
            raise ConfigError(f"missing upstream artifact {path}; run the embed stage first")
        lt_ids: list[str] = []
        rows: list[list[float]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader)
            for row in reader:
                lt_ids.append(row[0])
                rows.append([float(v) for v in row[1:]])
        matrix = np.array(rows) if rows else np.zeros((0, dim))
        self.embeddings[dim] = (lt_ids, matrix)
        return self.embeddings[dim]

    def class_map(self, pools: set[str]) -> dict[str, str]:
        return {
            p: classify_pool(self.log.pools[p], self.stable, self.pegged) for p in pools
        }


# -- stages -------------------------------------------------------------------


def _stage_select(run: _Run) -> dict:
    coarse, universes = select_universes(run.log, run.cfg.selection)
    with open(run.reports / "universe_coarse.json", "w", encoding="utf-8") as fh:
        json.dump({"pools": sorted(coarse)}, fh, indent=2, sort_keys=True)
    for label, universe in universes.items():
        path = run.reports / f"universe_{label}.json"
        path.write_text(universe.to_json())
    primary = universes.get(run.cfg.primary_window)
    run.universe = set(primary.pool_ids) if primary else set()
    return {
        "coarse": len(coarse),
        **{label: len(u.pool_ids) for label, u in universes.items()},
    }


def _stage_interconnect(run: _Run) -> dict:
    cfg = run.cfg
    pools = run.load_universe()
    w = cfg.primary()
    counts: dict[str, object] = {"pools": len(pools)}
    components: dict[str, list[str]] = {}
    sweep_rows: list[list] = []
    specs = [
        ("lt_origin", graphs.AgentMeasure(graphs.LT, graphs.ORIGIN),
         cfg.interconnect.origin_thresholds, cfg.interconnect.origin_component_threshold),
        ("lt_sender", graphs.AgentMeasure(graphs.LT, graphs.SENDER),
         cfg.interconnect.sender_thresholds, cfg.interconnect.sender_component_threshold),
        ("lp_origin", graphs.AgentMeasure(graphs.LP, graphs.ORIGIN),
         cfg.interconnect.origin_thresholds, cfg.interconnect.origin_component_threshold),
        ("lp_sender", graphs.AgentMeasure(graphs.LP, graphs.SENDER),
         cfg.interconnect.sender_thresholds, cfg.interconnect.sender_component_threshold),
    ]
    for name, measure, thresholds, comp_threshold in specs:
        g = graphs.build_common_agent_graph(run.log, pools, w, measure)
        graphs.write_edge_list(run.reports / f"graph_{name}.csv", g.edges)
        for threshold, size in graphs.threshold_sweep(g, list(thresholds)):
            sweep_rows.append([name, threshold, size])
        components[name] = sorted(graphs.giant_component(g, comp_threshold))
    _write_csv(run.reports / "sweeps.csv", ["measure", "threshold", "giant_size"], sweep_rows)

    bridges = graphs.extract_bridges(run.log, pools, w)
    graphs.write_edge_list(run.reports / "bridges.csv", bridges.edges)
    bridge_comp = graphs.bridge_giant_component(bridges, cfg.interconnect.bridge_min_count)
    components["bridge"] = sorted(bridge_comp)
    with open(run.reports / "components.json", "w", encoding="utf-8") as fh:
        json.dump(components, fh, indent=2, sort_keys=True)

    centrality_rows: list[list] = []
    if bridge_comp:
        scores = graphs.bridge_graph_centrality(bridges, bridge_comp)
        centrality_rows = [[node, scores[node]] for node in sorted(scores)]
    _write_csv(run.reports / "centrality.csv", ["pool", "score"], centrality_rows)

    overlap = graphs.agent_overlap(run.log, pools, w)
    _write_csv(
        run.reports / "overlap.csv",
        ["pool", "common_lt_lp", "ratio_of_lts", "ratio_of_lps"],
        [[p, *overlap[p]] for p in sorted(overlap)],
    )
    counts["bridge_edges"] = len(bridges.edges)
    counts["bridge_component"] = len(bridge_comp)
    return counts


def _stage_embed(run: _Run) -> dict:
    cfg = run.cfg
    pools = run.load_universe()
    w = cfg.primary()
    lts = sorted(
        filter_lts(run.log, pools, w, cfg.embed.lt_min_txns, cfg.embed.lt_max_txns)
    )
    corpora = {}
    for lt in lts:
        g = build_transaction_graph(run.log, lt, pools, w)
        neigh = sample_neighbourhoods(g, cfg.embed.neighbourhood_seed)
        corpora[lt] = wl_relabel(g.labels, neigh)
    counts: dict[str, object] = {"lts": len(lts)}
    if len(corpora) < 2:
        log.warning("embed: only %d LT(s) pass the activity filter; nothing to train", len(lts))
        for dim in cfg.embed.ari_dims:
            _write_csv(run.embedding_path(dim),
                       ["lt_id"] + [f"v{i}" for i in range(dim)], [])
        (run.reports / "vocab.json").write_text(json.dumps({}, indent=2))
        return counts
    for dim in sorted(set(cfg.embed.ari_dims) | {cfg.embed.dim}):
        matrix = train_embeddings(
            corpora,
            TrainConfig(
                dim=dim,
                epochs=cfg.embed.epochs,
                initial_lr=cfg.embed.initial_lr,
                min_feature_count=cfg.embed.min_feature_count,
                downsample_rate=cfg.embed.downsample_rate,
                negatives_per_positive=cfg.embed.negatives_per_positive,
                rng_seed=cfg.seed,
                workers=cfg.workers,
            ),
        )
        _write_csv(
            run.embedding_path(dim),
            ["lt_id"] + [f"v{i}" for i in range(dim)],
            [[lt, *matrix.vectors[i]] for i, lt in enumerate(matrix.lt_ids)],
        )
        run.embeddings[dim] = (matrix.lt_ids, matrix.vectors)
        if dim == cfg.embed.dim:
            vocab = {tok: int(c) for tok, c in zip(matrix.vocab, matrix.vocab_counts)}
            (run.reports / "vocab.json").write_text(
                json.dumps(vocab, indent=2, sort_keys=True)
            )
            counts["vocab"] = len(vocab)
    return counts


def _stage_cluster(run: _Run) -> dict:
    cfg = run.cfg
    pools = run.load_universe()
    w = cfg.primary()
    ks = list(range(cfg.cluster.k_min, cfg.cluster.k_max + 1))
    selected: dict[int, np.ndarray] = {}
    lt_ids_by_dim: dict[int, list[str]] = {}
    inertia_rows: list[list] = []
    for dim in cfg.embed.ari_dims:
        lt_ids, matrix = run.load_embeddings(dim)
        lt_ids_by_dim[dim] = lt_ids
        if matrix.shape[0] < max(ks):
            log.warning("cluster: %d LTs < k_max=%d; skipping dim %d",
                        matrix.shape[0], max(ks), dim)
            continue
        sweep = inertia_sweep(matrix, ks, cfg.seed, n_init=cfg.cluster.n_init)
        best_k = elbow_select({k: c.inertia for k, c in sweep.items()})
        selected[dim] = sweep[best_k].labels
        for k in ks:
            inertia_rows.append([dim, k, sweep[k].inertia, int(k == best_k)])
    _write_csv(run.reports / "inertia.csv", ["dim", "k", "inertia", "selected"], inertia_rows)

    dims = [d for d in cfg.embed.ari_dims if d in selected]
    ari_rows = []
    for da in dims:
        row = [da]
        for db in dims:
            row.append(adjusted_rand_index(selected[da], selected[db]))
        ari_rows.append(row)
    _write_csv(run.reports / "ari_matrix.csv", ["dim", *map(str, dims)], ari_rows)

    counts: dict[str, object] = {"dims_clustered": len(dims)}
    primary_dim = cfg.embed.dim
    if primary_dim in selected:
        lt_ids = lt_ids_by_dim[primary_dim]
        labels = {lt: int(c) for lt, c in zip(lt_ids, selected[primary_dim])}
        _write_csv(
            run.reports / "labels.csv",
            ["lt_id", "cluster"],
            [[lt, labels[lt]] for lt in lt_ids],
        )
        profiles = lt_features(
            run.log, set(lt_ids), pools, w, run.class_map(pools), run.calendar
        )
        sizes, means = profile_clusters(labels, profiles)
        _write_csv(
            run.reports / "profiles.csv",
            ["cluster", "size", *PROFILE_FEATURES],
            [[c, sizes[c], *means[c]] for c in sorted(sizes)],
        )
        counts["k"] = int(max(labels.values())) + 1 if labels else 0
        counts["clustered_lts"] = len(labels)
    else:
        _write_csv(run.reports / "labels.csv", ["lt_id", "cluster"], [])
        _write_csv(run.reports / "profiles.csv",
                   ["cluster", "size", *PROFILE_FEATURES], [])
    return counts


def _stage_poolfeat(run: _Run) -> dict:
    cfg = run.cfg
    pools = run.load_universe()
    w = cfg.primary()
    counts: dict[str, object] = {"pools": len(pools)}
    features = poolfeats.compute_pool_features(run.log, pools, w)
    ordered = sorted(features)
    _write_csv(
        run.reports / "pool_features.csv",
        ["pool", *poolfeats.POOL_FEATURE_NAMES, "SfeeTier"],
        [[p, *features[p].as_vector(), features[p].SfeeTier] for p in ordered],
    )
    usable = [p for p in ordered if math.isfinite(features[p].SstdP)]
    matrix = np.array([features[p].as_vector() for p in usable])
    if len(usable) >= 3:
        with_fee = np.column_stack([matrix, [features[p].SfeeTier for p in usable]])
        corr = poolfeats.spearman_matrix(with_fee)
        names = [*poolfeats.POOL_FEATURE_NAMES, "SfeeTier"]
        _write_csv(
            run.reports / "spearman.csv",
            ["feature", *names],
            [[names[i], *corr[i]] for i in range(len(names))],
        )
    counts["rows_with_swaps"] = len(usable)
    for kernel in poolfeats.KERNELS:
        if len(usable) < 4:
            break
        try:
            proj, spectrum = poolfeats.pca_project(matrix, kernel=kernel, dims=3)
        except ValueError as exc:
            log.warning("poolfeat: %s PCA skipped (%s)", kernel, exc)
            continue
        _write_csv(
            run.reports / f"pca_{kernel}_projection.csv",
            ["pool", "pc1", "pc2", "pc3", "fee_tier"],
            [
                [p, *proj[i], run.log.pools[p].fee_tier]
                for i, p in enumerate(usable)
            ],
        )
        _write_csv(
            run.reports / f"pca_{kernel}_spectrum.csv",
            ["component", "eigenvalue"],
            [[i, v] for i, v in enumerate(spectrum)],
        )
    return counts


def _stage_cryptoness(run: _Run) -> dict:
    cfg = run.cfg
    pools = sorted(run.load_universe())
    w = cfg.primary()
    cx = cfg.cryptoness
    fit_rows: list[list] = []
    sliding_rows: list[list] = []
    iso_rows: list[list] = []
    op_rows: list[list] = []
    rpool_rows: list[list] = []
    skipped: dict[str, str] = {}
    for pool in pools:
        rows = cryptolaw.daily_law_rows(run.log, pool, w)
        if len(rows) < 3:
            skipped[pool] = f"only {len(rows)} usable day(s)"
            continue
        surviving = cryptolaw.zscore_filter(rows, cx.zscore_threshold)
        try:
            fit = cryptolaw.fit_crypto_law(surviving)
            fit_rows.append([pool, fit.r_pool, fit.xi, fit.n_obs])
        except ValueError as exc:
            skipped[pool] = str(exc)
        series = cryptolaw.sliding_cryptoness(rows, cx.window_days, cx.step_days)
        for date, f in series:
            sliding_rows.append([pool, date, f.r_pool, f.xi, max(f.xi, 0.0), f.n_obs])
        summary = cryptolaw.rpool_distribution(series, cx.xi_floor)
        rpool_rows.append(
            [pool, len(summary.values), summary.mean, summary.order_of_magnitude]
        )
        try:
            bins = cryptolaw.isotherm_bins(rows, cx.isotherm_bins)
        except ValueError:
            bins = []
        for b_idx, b in enumerate(bins):
            for p_vol, v_stab in b.points:
                iso_rows.append([pool, b_idx, b.t_lo, b.t_hi, int(b.flagged), p_vol, v_stab])
        if cx.opchange_focus and cx.opchange_baseline:
            change = cryptolaw.op_change(run.log, pool, cx.opchange_focus, cx.opchange_baseline)
            op_rows.append([pool, change.swap, change.mint, change.burn, change.avg])
    _write_csv(run.reports / "law_fits.csv", ["pool", "r_pool", "xi", "n_obs"], fit_rows)
    _write_csv(
        run.reports / "sliding_xi.csv",
        ["pool", "end_date", "r_pool", "xi", "xi_clamped", "n_obs"],
        sliding_rows,
    )
    _write_csv(
        run.reports / "isotherms.csv",
        ["pool", "bin", "t_lo", "t_hi", "flagged", "p_vol", "v_stab"],
        iso_rows,
    )
    _write_csv(
        run.reports / "opchange.csv",
        ["pool", "swap_change", "mint_change", "burn_change", "avg_change"],
        op_rows,
    )
    _write_csv(
        run.reports / "rpool_summary.csv",
        ["pool", "n_kept", "mean", "order_of_magnitude"],
        rpool_rows,
    )
    return {
        "fitted": len(fit_rows),
        "sliding_rows": len(sliding_rows),
        "isotherm_points": len(iso_rows),
        "skipped": skipped,
    }


_STAGE_FN = {
    "select": _stage_select,
    "interconnect": _stage_interconnect,
    "embed": _stage_embed,
    "cluster": _stage_cluster,
    "poolfeat": _stage_poolfeat,
    "cryptoness": _stage_cryptoness,
}


def run_pipeline(cfg: RunConfig, stages=None) -> dict:
    """Execute the requested stages in dependency order; returns the manifest.

    A stage whose dependency is neither requested nor already materialised
    on disk fails validation before anything runs.
    """
    requested = list(STAGES) if stages is None else list(stages)
    unknown = set(requested) - set(STAGES)
    if unknown:
        raise ConfigError(f"unknown stages: {sorted(unknown)}")
    ordered = [s for s in STAGES if s in requested]
    run = _Run(cfg)
    for stage in ordered:
        for dep in _DEPS[stage]:
            if dep in ordered:
                continue
            probe = run.universe_path() if dep == "select" else run.embedding_path(cfg.embed.dim)
            if not probe.exists():
                raise ConfigError(
                    f"stage {stage!r} needs {dep!r} output; run it first or request it"
                )
    timings: dict[str, float] = {}
    for stage in ordered:
        started = time.perf_counter()
        run.counts[stage] = _STAGE_FN[stage](run)
        timings[stage] = time.perf_counter() - started
        log.info("stage %s done in %.2fs", stage, timings[stage])
    manifest = {
        "seed": cfg.seed,
        "workers": cfg.workers,
        "config_sha256": hashlib.sha256(cfg.canonical_json().encode()).hexdigest(),
        "stages": ordered,
        "inputs": {
            str(p): _sha256(Path(p))
            for p in (cfg.events, cfg.pools, cfg.token_classes, cfg.calendar)
        },
        "outputs": {
            str(p.relative_to(cfg.out_dir)): _sha256(p)
            for p in sorted(run.reports.rglob("*"))
            if p.is_file()
        },
        "counts": run.counts,
        "malformed_lines": run.log.malformed_lines,
        "timings": timings,
    }
    with open(cfg.out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return manifest

"""Command-line entry points.

Every analysis subcommand reads a JSON run configuration (``--config``);
individual top-level fields can be overridden with dedicated flags and any
nested field with ``--set section.key=value``.  Exit codes: 0 on success,
2 on configuration/validation errors, 1 on runtime failures.
"""

from __future__ import annotations

import json
import logging
import sys
import traceback

import click

from .events import IngestError
from .pipeline import ConfigError, RunConfig, run_pipeline
from .synth import default_spec, generate_synthetic, spec_from_dict


def _apply_overrides(obj: dict, overrides: tuple[str, ...]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        target = obj
        *parents, leaf = dotted.split(".")
        for key in parents:
            target = target.setdefault(key, {})
        target[leaf] = value
    return obj


def _load_config(config_path, overrides, **direct) -> RunConfig:
    if config_path is None:
        raise ConfigError("--config is required (or generate one with `poolscope synth`)")
    with open(config_path, encoding="utf-8") as fh:
        obj = json.load(fh)
    for key, value in direct.items():
        if value is not None:
            obj[key] = value
    return RunConfig.from_dict(_apply_overrides(obj, overrides))


def _stage_command(name: str, help_text: str):
    @click.command(name=name, help=help_text)
    @click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                  help="JSON run configuration.")
    @click.option("--events", default=None, help="Override the events file path.")
    @click.option("--pools", default=None, help="Override the pool metadata path.")
    @click.option("--token-classes", "token_classes", default=None)
    @click.option("--calendar", default=None)
    @click.option("--out-dir", "out_dir", default=None)
    @click.option("--seed", type=int, default=None)
    @click.option("--workers", type=int, default=None)
    @click.option("--primary-window", "primary_window", default=None)
    @click.option("--set", "overrides", multiple=True,
                  help="Dotted override, e.g. --set selection.min_txn_count=50")
    def command(config_path, overrides, **direct):
        cfg = _load_config(config_path, overrides, **direct)
        stages = None if name == "run-all" else [name]
        manifest = run_pipeline(cfg, stages)
        click.echo(json.dumps({"stages": manifest["stages"], "counts": manifest["counts"]},
                              indent=2, sort_keys=True))

    return command


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def cli(verbose: bool) -> None:
    """Batch analytics for AMM liquidity pools."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--days", type=int, default=45, show_default=True)
@click.option("--spec", "spec_path", type=click.Path(exists=True), default=None,
              help="Custom generation spec (JSON); defaults to the stock fixture.")
def synth(out_dir, seed, days, spec_path):
    """Generate a synthetic event corpus with planted ground truth."""
    if spec_path:
        with open(spec_path, encoding="utf-8") as fh:
            spec = spec_from_dict(json.load(fh))
    else:
        spec = default_spec(seed=seed, days=days)
    paths = generate_synthetic(spec, out_dir)
    click.echo(json.dumps({
        "events": str(paths.events),
        "pools": str(paths.pools),
        "config": str(paths.config),
        "ground_truth": str(paths.ground_truth),
    }, indent=2, sort_keys=True))


for _name, _help in (
    ("select", "Build per-window pool universes."),
    ("interconnect", "Pool graphs, bridges, centrality, and overlap stats."),
    ("embed", "Train LT transaction-graph embeddings."),
    ("cluster", "Cluster embeddings and profile the groups."),
    ("poolfeat", "Per-pool features, correlations, and PCA."),
    ("cryptoness", "Daily-law fits, sliding health scores, and diagnostics."),
    ("run-all", "Run every stage in dependency order."),
):
    cli.add_command(_stage_command(_name, _help))


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)
    except (ConfigError, IngestError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except Exception:  # noqa: BLE001 - last-resort runtime failure
        traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main()

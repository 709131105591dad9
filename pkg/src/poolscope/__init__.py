"""Batch analytics for AMM liquidity pools.

Subpackages and modules cover the full pipeline: event ingestion and derived
series (``events``), systematic pool-universe selection (``selection``),
pool-interconnection and bridge-flow graphs (``graphs``), liquidity-taker
transaction-graph embeddings (``embed``), clustering and behavioural
profiling (``cluster``), per-pool feature analysis (``poolfeats``), the
pool-health regression (``cryptolaw``), synthetic data generation with
planted ground truth (``synth``) and run orchestration (``pipeline``/``cli``).
"""

__version__ = "0.1.0"

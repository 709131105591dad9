"""Liquidity-taker transaction graphs and whole-graph embeddings."""

from .txgraph import (
    CutParams,
    TransactionGraph,
    build_transaction_graph,
    cut_value,
    filter_lts,
    sample_neighbourhoods,
)
from .wl import wl_relabel
from .trainer import EmbeddingMatrix, TrainConfig, TrainingDiverged, train_embeddings

__all__ = [
    "CutParams",
    "TransactionGraph",
    "build_transaction_graph",
    "cut_value",
    "filter_lts",
    "sample_neighbourhoods",
    "wl_relabel",
    "EmbeddingMatrix",
    "TrainConfig",
    "TrainingDiverged",
    "train_embeddings",
]

"""Analytic incremental adapters over frozen vision-language embeddings."""

from ._rail import (
    Adapter,
    DualAdapter,
    EmbeddingDataset,
    PrimalAdapter,
    RailError,
    SplitRole,
    compute_metrics,
    kernel_matrix,
    load_embeddings,
    pearson,
    rhl_project,
    run,
    sample_few_shot,
    save_embeddings,
    synthesize,
    zero_shot_probs,
)

__all__ = [
    "Adapter",
    "DualAdapter",
    "EmbeddingDataset",
    "PrimalAdapter",
    "RailError",
    "SplitRole",
    "compute_metrics",
    "kernel_matrix",
    "load_embeddings",
    "pearson",
    "rhl_project",
    "run",
    "sample_few_shot",
    "save_embeddings",
    "synthesize",
    "zero_shot_probs",
]

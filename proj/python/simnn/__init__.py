"""Similarity neural networks and RBF baselines for heterogeneous, incomplete tabular data.

The heavy lifting lives in the compiled extension; this package re-exports its
surface: dataset loading, similarity matrices, leader clustering, and the three
model kinds (snn, rbf2, rbfk) with JSON round-tripping.
"""

from ._core import (
    Dataset,
    Model,
    cluster,
    derive_task,
    horse_colic_schema_text,
    load_dataset,
    model_from_json,
    parse_dataset,
    similarity_matrix,
    train,
)

__all__ = [
    "Dataset",
    "Model",
    "cluster",
    "derive_task",
    "horse_colic_schema_text",
    "load_dataset",
    "model_from_json",
    "parse_dataset",
    "similarity_matrix",
    "train",
]

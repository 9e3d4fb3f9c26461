"""Certified graph-minor embeddings for dense target graphs.

Every embedder returns a :class:`MinorModel` that has passed
:func:`verify_model`, or raises :class:`EmbeddingFailed` carrying a
stage-tagged :class:`FailureReport`.
"""

from .dense import DenseConfig, embed_dense_rooted
from .extremal import ExtremalClassParams, compute_alpha, extract_minor_minimal, in_class
from .failure import EmbeddingFailed, FailureReport
from .gamma import compute_gamma
from .generators import generate
from .graph import Graph, read_edge_list, write_edge_list
from .oracle import MinorModel, has_minor_exact, verify_model
from .pipeline import PipelineConfig, RunRecord, embed_auto, run_experiment
from .sparse import SparseConfig, embed_sparse

__version__ = "0.1.0"

__all__ = [
    "DenseConfig",
    "EmbeddingFailed",
    "ExtremalClassParams",
    "FailureReport",
    "Graph",
    "MinorModel",
    "PipelineConfig",
    "RunRecord",
    "SparseConfig",
    "compute_alpha",
    "compute_gamma",
    "embed_auto",
    "embed_dense_rooted",
    "embed_sparse",
    "extract_minor_minimal",
    "generate",
    "has_minor_exact",
    "in_class",
    "read_edge_list",
    "run_experiment",
    "verify_model",
    "write_edge_list",
]

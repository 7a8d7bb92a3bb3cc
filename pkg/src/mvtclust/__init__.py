"""Multi-view clustering via a sparse and low-rank representation tensor.

The pipeline stacks per-view feature matrices into a third-order tensor,
learns a self-expressive representation tensor with an ADMM solver that
couples a tensor nuclear norm, tube-wise sparsity and an inter-view
consensus term, and reads cluster labels off a Markov-chain spectral
embedding of the learned affinities.
"""

__version__ = "0.1.0"

from .construct import MultiViewDataset, build_tensor, synth_generate
from .estimator import MultiViewTensorClustering
from .io import (
    DatasetFormatError,
    Manifest,
    load_dataset,
    load_manifest,
    load_report,
    run_cluster,
    run_synth,
)
from .metrics import MetricReport, accuracy, ari, evaluate_trials, nmi, pair_scores
from .prox import prox_f1, prox_tnn, svt
from .selftest import run_selftest
from .solver import SolverConfig, SolverTrace, solve
from .spectral import cluster_pipeline, cluster_trials, kmeans
from .tensor3 import (
    ImaginaryResidueError,
    identity_tensor,
    norm_f1,
    norm_ff1,
    norm_fro,
    norm_tnn,
    tproduct,
    tproduct_reference,
)

__all__ = [
    "DatasetFormatError",
    "ImaginaryResidueError",
    "Manifest",
    "MetricReport",
    "MultiViewDataset",
    "MultiViewTensorClustering",
    "SolverConfig",
    "SolverTrace",
    "accuracy",
    "ari",
    "build_tensor",
    "cluster_pipeline",
    "cluster_trials",
    "evaluate_trials",
    "identity_tensor",
    "kmeans",
    "load_dataset",
    "load_manifest",
    "load_report",
    "nmi",
    "norm_f1",
    "norm_ff1",
    "norm_fro",
    "norm_tnn",
    "pair_scores",
    "prox_f1",
    "prox_tnn",
    "run_cluster",
    "run_selftest",
    "run_synth",
    "solve",
    "svt",
    "synth_generate",
    "tproduct",
    "tproduct_reference",
]

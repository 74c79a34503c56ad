"""Few-shot classification by label propagation and kernel PCA scoring.

The pipeline: expand each class's tiny support set by letting classes take
turns claiming their nearest unlabeled points, fit a kernel PCA model per
class on the expanded sets, then assign queries to the class that
reconstructs them with the smallest error. Baselines, geometry diagnostics,
an episodic evaluation harness, a synthetic chain-graph generator and file
IO round out the toolkit; the ``kprop`` console script fronts all of it.
"""

from .classifiers import (
    ClassifierVerdict,
    LinearModel,
    classify_kprop,
    classify_linear,
    classify_prototype,
    classify_subspace,
    train_linear,
)
from .episodes import (
    DEFAULT_SWEEP_GRID,
    METHODS,
    EvalReport,
    FewShotTask,
    MethodConfig,
    SweepPoint,
    aggregate,
    evaluate_method,
    evaluate_task,
    sample_task,
    sample_tasks,
    sweep_extra_labels,
)
from .errors import (
    ConfigError,
    DataConsistencyError,
    DisjointSetsError,
    EmptyInputError,
    FileFormatError,
    KpropError,
    NonFiniteError,
    NotSymmetricError,
    SamplingError,
    ShapeMismatchError,
    UnsupportedLayoutError,
)
from .featio import Dataset, load_array, load_dataset, load_report, save_array, write_dataset, write_report
from .geometry import (
    DistanceStats,
    PnnEstimate,
    estimate_pnn,
    nn_same_class_fraction,
    pairwise_distance_stats,
)
from .kernels import (
    DEFAULT_SIGMA,
    CenteredKernel,
    KernelConfig,
    center_kernel_matrix,
    gaussian_kernel,
    kernel_matrix,
    pairwise_sq_dists,
)
from .kpca import (
    KpcaModel,
    fit_kpca,
    project,
    project_many,
    reconstruction_error,
    reconstruction_errors,
)
from .numerics import EigenDecomposition, eigh_symmetric, thin_svd
from .propagation import Claim, LabeledSets, PropagationResult, propagate_labels
from .synthgen import SynthConfig, SynthDataset, generate_sparse_graph_dataset

__version__ = "0.1.0"

__all__ = [
    "ClassifierVerdict",
    "LinearModel",
    "classify_kprop",
    "classify_linear",
    "classify_prototype",
    "classify_subspace",
    "train_linear",
    "DEFAULT_SWEEP_GRID",
    "METHODS",
    "EvalReport",
    "FewShotTask",
    "MethodConfig",
    "SweepPoint",
    "aggregate",
    "evaluate_method",
    "evaluate_task",
    "sample_task",
    "sample_tasks",
    "sweep_extra_labels",
    "ConfigError",
    "DataConsistencyError",
    "DisjointSetsError",
    "EmptyInputError",
    "FileFormatError",
    "KpropError",
    "NonFiniteError",
    "NotSymmetricError",
    "SamplingError",
    "ShapeMismatchError",
    "UnsupportedLayoutError",
    "Dataset",
    "load_array",
    "load_dataset",
    "load_report",
    "save_array",
    "write_dataset",
    "write_report",
    "DistanceStats",
    "PnnEstimate",
    "estimate_pnn",
    "nn_same_class_fraction",
    "pairwise_distance_stats",
    "DEFAULT_SIGMA",
    "CenteredKernel",
    "KernelConfig",
    "center_kernel_matrix",
    "gaussian_kernel",
    "kernel_matrix",
    "pairwise_sq_dists",
    "KpcaModel",
    "fit_kpca",
    "project",
    "project_many",
    "reconstruction_error",
    "reconstruction_errors",
    "EigenDecomposition",
    "eigh_symmetric",
    "thin_svd",
    "Claim",
    "LabeledSets",
    "PropagationResult",
    "propagate_labels",
    "SynthConfig",
    "SynthDataset",
    "generate_sparse_graph_dataset",
    "__version__",
]

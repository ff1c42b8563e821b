"""Local outlier detection with the relative density-based outlier score (RDOS)."""

__version__ = "0.1.0"

from .baselines import METHODS, inflo_scores, lof_scores, mnn_scores, odin_scores, score
from .core import (
    DataError,
    Dataset,
    DimensionError,
    ParameterError,
    Params,
    euclidean_distance,
    minmax_normalize,
)
from .datagen import SynthSpec, gen_cosine, gen_two_gaussians
from .density import KernelSpec, gaussian_kernel, kernel_moment_check, local_density
from .evaluation import RocCurve, auc_table, auc_vs_k_sweep, roc_auc
from .neighbors import (
    KnnGraph,
    NeighborSets,
    build_knn_graph,
    build_knn_graph_bruteforce,
    build_knn_graph_kdtree,
    extended_neighborhood,
    reverse_neighbors,
    shared_neighbors,
)
from .rdos import ScoreReport, rdos_scores, threshold_detect, top_n
from .theory import BoundInput, ball_volume, false_alarm_bound, validate_theorem1, validate_theorem2

"""Distance matrices, Karcher means, k-means and k-NN on manifolds."""

from fisher_rao.learning.classification import (
    ErrorCurve,
    knn_classify,
    knn_error_curve,
    knn_from_distances,
    stratified_split,
)
from fisher_rao.learning.clustering import ClusteringResult, riemannian_kmeans
from fisher_rao.learning.datasets import (
    MEAN_LINE_VALUES,
    mean_lines_dataset,
    synthetic_dirichlet_classes,
)
from fisher_rao.learning.distances import (
    DistanceMatrix,
    cross_distances,
    pairwise_distances,
)
from fisher_rao.learning.karcher import karcher_mean

__all__ = [
    "MEAN_LINE_VALUES",
    "ClusteringResult",
    "DistanceMatrix",
    "ErrorCurve",
    "cross_distances",
    "karcher_mean",
    "knn_classify",
    "knn_error_curve",
    "knn_from_distances",
    "mean_lines_dataset",
    "pairwise_distances",
    "stratified_split",
    "synthetic_dirichlet_classes",
]

"""fisher-rao – Fisher-Rao geometry of parametric probability families."""

from fisher_rao._config import SolverConfig, resolve_solver_config
from fisher_rao._version import __version__
from fisher_rao.exceptions import (
    ConfigurationError,
    DegeneratePlaneError,
    DifferentiationError,
    DimensionMismatchError,
    DomainError,
    FamilyMismatchError,
    FisherRaoError,
    IncompleteGeodesicError,
    InfiniteDistanceError,
    InputError,
    IntegrationError,
    NonConvergenceError,
    NotPositiveDefiniteError,
    NumericalError,
    QuadratureError,
    SingularMetricError,
    TangencyError,
    UndefinedCurvatureError,
)
from fisher_rao.families import (
    Bernoulli,
    Beta,
    Binomial,
    Categorical,
    CenteredNormal,
    DiagonalNormal,
    Dirichlet,
    Exponential,
    Gamma,
    Geometric,
    InformationManifold,
    Multinomial,
    Normal,
    Poisson,
    family_from_spec,
    get_family,
)
from fisher_rao.generic import (
    DensityModel,
    as_manifold,
    fisher_christoffels,
    fisher_matrix,
)
from fisher_rao.geometry import GeodesicPath, ManifoldSpec, euclidean_spec
from fisher_rao.learning import (
    ClusteringResult,
    DistanceMatrix,
    karcher_mean,
    knn_classify,
    pairwise_distances,
    riemannian_kmeans,
)
from fisher_rao.types import FamilySpec

__all__ = [
    "__version__",
    "SolverConfig",
    "resolve_solver_config",
    # Families
    "InformationManifold",
    "Bernoulli",
    "Beta",
    "Binomial",
    "Categorical",
    "CenteredNormal",
    "DiagonalNormal",
    "Dirichlet",
    "Exponential",
    "Gamma",
    "Geometric",
    "Multinomial",
    "Normal",
    "Poisson",
    "FamilySpec",
    "family_from_spec",
    "get_family",
    # Geometry engine
    "GeodesicPath",
    "ManifoldSpec",
    "euclidean_spec",
    # Generic densities
    "DensityModel",
    "as_manifold",
    "fisher_christoffels",
    "fisher_matrix",
    # Learning
    "ClusteringResult",
    "DistanceMatrix",
    "karcher_mean",
    "knn_classify",
    "pairwise_distances",
    "riemannian_kmeans",
    # Errors
    "FisherRaoError",
    "InputError",
    "DomainError",
    "DimensionMismatchError",
    "FamilyMismatchError",
    "TangencyError",
    "InfiniteDistanceError",
    "UndefinedCurvatureError",
    "NumericalError",
    "IntegrationError",
    "IncompleteGeodesicError",
    "QuadratureError",
    "DifferentiationError",
    "NonConvergenceError",
    "SingularMetricError",
    "NotPositiveDefiniteError",
    "DegeneratePlaneError",
    "ConfigurationError",
]

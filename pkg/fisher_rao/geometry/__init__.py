"""Family-agnostic Riemannian engine."""

from fisher_rao.geometry.connection import (
    GeodesicPath,
    LogResult,
    christoffels,
    dist,
    dist_batch,
    exp,
    exp_batch,
    geodesic,
    geodesic_sphere,
    log,
    log_batch,
    parallel_transport,
)
from fisher_rao.geometry.curvature import (
    riemann_curvature,
    riemann_tensor,
    sectional_curvature,
)
from fisher_rao.geometry.manifold import (
    ManifoldSpec,
    batch_norm,
    euclidean_spec,
    inner_product,
    norm,
)

__all__ = [
    "GeodesicPath",
    "LogResult",
    "ManifoldSpec",
    "batch_norm",
    "christoffels",
    "dist",
    "dist_batch",
    "euclidean_spec",
    "exp",
    "exp_batch",
    "geodesic",
    "geodesic_sphere",
    "inner_product",
    "log",
    "log_batch",
    "norm",
    "parallel_transport",
    "riemann_curvature",
    "riemann_tensor",
    "sectional_curvature",
]

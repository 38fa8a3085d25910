"""JSON reports written by the command-line front end.

Parameter points are flattened to their public coordinates: ``(m, sigma)``,
``(kappa, gamma)``, the full probability vector of a simplex family or a
covariance matrix in row-major order.
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, Field

Metric = Literal["fisher-rao", "euclidean", "legacy-halfplane"]


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


class PairDistance(BaseModel):
    """Distance between points ``i`` and ``j``."""

    i: int = Field(..., description="Index of the first point.")
    j: int = Field(..., description="Index of the second point.")
    distance: float | None = Field(
        default=None, description="Geodesic distance; null when the solver failed."
    )
    error: str | None = Field(default=None, description="Failure message, if any.")


class DistanceReport(BaseModel):
    """Output of ``fisher-rao dist``."""

    family: str = Field(..., description="Family the points belong to.")
    metric: Metric = Field(default="fisher-rao", description="Distance used.")
    pairs: list[PairDistance] = Field(default_factory=list, description="All pairs.")


class MetricReport(BaseModel):
    """Output of ``fisher-rao metric``."""

    family: str = Field(..., description="Family name.")
    point: list[float] = Field(..., description="Parameter point.")
    matrix: list[list[float]] = Field(..., description="Fisher information matrix.")
    numeric: bool = Field(
        default=False, description="Whether the matrix came from numeric integration."
    )


class CurvatureReport(BaseModel):
    """Output of ``fisher-rao curvature``."""

    family: str = Field(..., description="Family name.")
    point: list[float] = Field(..., description="Parameter point.")
    curvature: float = Field(..., description="Sectional curvature.")
    numeric: bool = Field(
        default=False, description="Whether the numeric Riemann tensor was used."
    )


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


class SampleReport(BaseModel):
    """Output of ``fisher-rao sample``."""

    family: str = Field(..., description="Family name.")
    point: list[float] = Field(..., description="Parameter point.")
    seed: int | None = Field(default=None, description="Random seed.")
    samples: list[Union[float, list[float]]] = Field(
        ..., description="Draws; vectors for multivariate families."
    )


class PdfReport(BaseModel):
    """Output of ``fisher-rao pdf``."""

    family: str = Field(..., description="Family name.")
    point: list[float] = Field(..., description="Parameter point.")
    xs: list[Union[float, list[float]]] = Field(..., description="Observations.")
    densities: list[float] = Field(..., description="Density (or mass) at each x.")


# ---------------------------------------------------------------------------
# Learning
# ---------------------------------------------------------------------------


class KMeansReport(BaseModel):
    """Output of ``fisher-rao kmeans``."""

    family: str = Field(..., description="Family name.")
    metric: Metric = Field(default="fisher-rao", description="Distance used.")
    k: int = Field(..., description="Number of clusters.")
    seed: int | None = Field(default=None, description="Random seed.")
    centroids: list[list[float]] = Field(..., description="Cluster centers.")
    labels: list[int] = Field(..., description="Cluster index of every point.")
    inertia: float = Field(..., description="Sum of squared distances to centroids.")
    n_iter: int = Field(..., description="Assignment steps performed.")
    reseeds: int = Field(default=0, description="Empty-cluster reseeds.")


class KnnReport(BaseModel):
    """Output of ``fisher-rao knn``."""

    family: str = Field(..., description="Family name.")
    metric: Metric = Field(default="fisher-rao", description="Distance used.")
    k: int = Field(..., description="Number of neighbours.")
    predictions: list[int] = Field(..., description="Predicted label per test point.")
    accuracy: float | None = Field(
        default=None, description="Agreement with test labels, when given."
    )

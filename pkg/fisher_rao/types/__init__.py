"""Typed models for everything the command line reads or writes."""

from fisher_rao.types.family import REQUIRED_OPTIONS, FamilyName, FamilySpec
from fisher_rao.types.reports import (
    CurvatureReport,
    DistanceReport,
    KMeansReport,
    KnnReport,
    MetricReport,
    PairDistance,
    PdfReport,
    SampleReport,
)

__all__ = [
    "REQUIRED_OPTIONS",
    "CurvatureReport",
    "DistanceReport",
    "FamilyName",
    "FamilySpec",
    "KMeansReport",
    "KnnReport",
    "MetricReport",
    "PairDistance",
    "PdfReport",
    "SampleReport",
]

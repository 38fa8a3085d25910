"""Parametric families with closed-form or numeric Fisher-Rao geometry."""

from __future__ import annotations

from typing import Callable

from fisher_rao._config import SolverConfig
from fisher_rao.families._base import InformationManifold, map_path
from fisher_rao.families.dirichlet import Beta, Dirichlet, minkowski_coord
from fisher_rao.families.gamma import (
    Gamma,
    gamma_curvature,
    natural_to_scale,
    scale_to_natural,
)
from fisher_rao.families.multinomial import Categorical, Multinomial
from fisher_rao.families.normal import (
    CenteredNormal,
    DiagonalNormal,
    Normal,
    halfplane_dist,
    legacy_halfplane_dist,
)
from fisher_rao.families.scalar import (
    Bernoulli,
    Binomial,
    Exponential,
    Geometric,
    Poisson,
    ScalarFamily,
)
from fisher_rao.types.family import FamilySpec

__all__ = [
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
    "InformationManifold",
    "Multinomial",
    "Normal",
    "Poisson",
    "ScalarFamily",
    "family_from_spec",
    "gamma_curvature",
    "get_family",
    "halfplane_dist",
    "legacy_halfplane_dist",
    "map_path",
    "minkowski_coord",
    "natural_to_scale",
    "scale_to_natural",
]

_Factory = Callable[[FamilySpec, "SolverConfig | None"], InformationManifold]

_REGISTRY: dict[str, _Factory] = {
    "bernoulli": lambda s, c: Bernoulli(c),
    "binomial": lambda s, c: Binomial(s.n, c),
    "poisson": lambda s, c: Poisson(c),
    "exponential": lambda s, c: Exponential(c),
    "geometric": lambda s, c: Geometric(c),
    "categorical": lambda s, c: Categorical(s.dim, c),
    "multinomial": lambda s, c: Multinomial(s.dim, s.n, c),
    "normal": lambda s, c: Normal(c),
    "normal-diagonal": lambda s, c: DiagonalNormal(s.dim, c),
    "normal-centered": lambda s, c: CenteredNormal(s.dim, config=c),
    "gamma": lambda s, c: Gamma(c),
    "beta": lambda s, c: Beta(c),
    "dirichlet": lambda s, c: Dirichlet(s.dim, c),
}


def family_from_spec(
    spec: FamilySpec, config: SolverConfig | None = None
) -> InformationManifold:
    """Instantiate the family a :class:`FamilySpec` describes."""
    return _REGISTRY[spec.family](spec, config)


def get_family(
    name: str,
    *,
    n: int | None = None,
    dim: int | None = None,
    config: SolverConfig | None = None,
) -> InformationManifold:
    """Shortcut for ``family_from_spec(FamilySpec(family=name, n=n, dim=dim))``.

    Raises:
        pydantic.ValidationError: unknown family or missing options.
    """
    spec = FamilySpec(family=name, n=n, dim=dim)  # type: ignore[arg-type]
    return family_from_spec(spec, config)

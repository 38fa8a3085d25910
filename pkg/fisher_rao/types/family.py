"""Family selection model.

Used by ``fisher_rao.families.family_from_spec()`` and every CLI command.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

FamilyName = Literal[
    "bernoulli",
    "binomial",
    "poisson",
    "exponential",
    "geometric",
    "categorical",
    "multinomial",
    "normal",
    "normal-diagonal",
    "normal-centered",
    "gamma",
    "beta",
    "dirichlet",
]

# options each family cannot do without
REQUIRED_OPTIONS: dict[str, tuple[str, ...]] = {
    "binomial": ("n",),
    "categorical": ("dim",),
    "multinomial": ("dim", "n"),
    "normal-diagonal": ("dim",),
    "normal-centered": ("dim",),
    "dirichlet": ("dim",),
}


class FamilySpec(BaseModel):
    """A parametric family and its integer options.

    ``n`` is the trial count (binomial, multinomial); ``dim`` is the number
    of categories (categorical, multinomial), the number of concentration
    parameters (dirichlet) or the data dimension (normal-diagonal,
    normal-centered).
    """

    model_config = ConfigDict(extra="forbid")

    family: FamilyName = Field(..., description="Family name.")
    n: int | None = Field(default=None, gt=0, description="Number of trials.")
    dim: int | None = Field(
        default=None, gt=0, description="Categories, parameters or data dimension."
    )

    @model_validator(mode="after")
    def _check_options(self) -> FamilySpec:
        required = REQUIRED_OPTIONS.get(self.family, ())
        missing = [opt for opt in required if getattr(self, opt) is None]
        if missing:
            raise ValueError(f"family {self.family!r} requires {', '.join(missing)}")
        return self

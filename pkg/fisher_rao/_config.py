"""Solver configuration for fisher-rao.

Centralizes environment-variable and optional ``.env`` file resolution so
every family, the generic metric and the CLI share one numeric policy.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Callable, Mapping, TypeVar

from fisher_rao.exceptions import ConfigurationError

T = TypeVar("T", int, float)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_LOG_TOL = 1e-9
DEFAULT_LOG_MAX_ITER = 100
DEFAULT_GEODESIC_SAMPLES = 100
DEFAULT_QUADRATURE_NODES = 100
DEFAULT_BOUNDARY_MARGIN = 1e-8
DEFAULT_WORKERS = 1

ENV_PREFIX = "FISHER_RAO_"


@dataclass(frozen=True)
class SolverConfig:
    """Resolved numeric policy.

    Attributes:
        rtol: Relative tolerance of the geodesic integrator.
        atol: Absolute tolerance of the geodesic integrator.
        log_tol: Shooting residual tolerance, scaled by ``1 + |y|_inf``.
        log_max_iter: Newton iterations allowed per shooting solve.
        geodesic_samples: Default number of segments in a sampled geodesic.
        quadrature_nodes: Default Gauss-Legendre node count.
        boundary_margin: Integration stops this close to a coordinate bound.
        workers: Threads used to fan out pairwise distance computations.
    """

    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    log_tol: float = DEFAULT_LOG_TOL
    log_max_iter: int = DEFAULT_LOG_MAX_ITER
    geodesic_samples: int = DEFAULT_GEODESIC_SAMPLES
    quadrature_nodes: int = DEFAULT_QUADRATURE_NODES
    boundary_margin: float = DEFAULT_BOUNDARY_MARGIN
    workers: int = DEFAULT_WORKERS

    def replace(self, **changes: float | int) -> SolverConfig:
        """Return a copy with ``changes`` applied (validated)."""
        return resolve_solver_config(
            **{**dataclasses.asdict(self), **changes},  # type: ignore[arg-type]
        )


def _assignment(line: str) -> tuple[str, str] | None:
    """``KEY=VALUE`` of one env-file line; None for blanks and comments."""
    text = line.strip()
    if not text or text[0] == "#":
        return None
    if text.startswith("export "):
        text = text.removeprefix("export ")
    key, sep, value = text.partition("=")
    if not sep:
        raise ValueError("expected KEY=VALUE")
    if not key.strip():
        raise ValueError("empty key name")
    value = value.strip()
    if len(value) > 1 and value[0] in "'\"" and value[-1] == value[0]:
        value = value[1:-1]
    return key.strip(), value


def _load_env_file(env_file: str | PathLike[str]) -> dict[str, str]:
    """``FISHER_RAO_*`` settings of an env file; other keys are skipped."""
    path = Path(env_file).expanduser()
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise ConfigurationError(f"Env file not found: {path}") from None

    settings: dict[str, str] = {}
    for line_no, line in enumerate(lines, 1):
        try:
            pair = _assignment(line)
        except ValueError as exc:
            raise ConfigurationError(
                f"Invalid env line {line_no} in {path}: {exc}"
            ) from None
        if pair is not None and pair[0].startswith(ENV_PREFIX):
            settings[pair[0]] = pair[1]
    return settings


def _lookup(name: str, file_values: Mapping[str, str]) -> str | None:
    raw = file_values[name] if name in file_values else os.environ.get(name)
    if raw is None or not raw.strip():
        return None
    return raw.strip()


def _resolve(
    field: str,
    explicit: T | None,
    default: T,
    cast: Callable[[str], T],
    file_values: Mapping[str, str],
    *,
    minimum: T,
    strict: bool,
) -> T:
    """Resolve one setting and check it against ``minimum``.

    ``strict`` means the value must exceed ``minimum``; otherwise it may
    equal it.
    """
    env_name = f"{ENV_PREFIX}{field.upper()}"
    if explicit is not None:
        value, source = explicit, field
    else:
        raw = _lookup(env_name, file_values)
        if raw is None:
            return default
        try:
            value = cast(raw)
        except ValueError as exc:
            kind = "an integer" if cast is int else "a number"
            raise ConfigurationError(
                f"Invalid {env_name} value {raw!r}; expected {kind}."
            ) from exc
        source = env_name

    too_small = value <= minimum if strict else value < minimum
    if too_small:
        op = ">" if strict else ">="
        raise ConfigurationError(f"{source} must be {op} {minimum}")
    return value


def resolve_solver_config(
    *,
    rtol: float | None = None,
    atol: float | None = None,
    log_tol: float | None = None,
    log_max_iter: int | None = None,
    geodesic_samples: int | None = None,
    quadrature_nodes: int | None = None,
    boundary_margin: float | None = None,
    workers: int | None = None,
    env_file: str | PathLike[str] | None = None,
) -> SolverConfig:
    """Resolve solver settings from explicit args + env + optional env file.

    Precedence is:
    1. Explicit argument
    2. Optional ``env_file`` values
    3. Process environment variables (``FISHER_RAO_RTOL`` and friends)
    4. Package defaults
    """

    file_values: dict[str, str] = {}
    if env_file is not None:
        file_values = _load_env_file(env_file)

    return SolverConfig(
        rtol=_resolve(
            "rtol", rtol, DEFAULT_RTOL, float, file_values, minimum=0.0, strict=True
        ),
        atol=_resolve(
            "atol", atol, DEFAULT_ATOL, float, file_values, minimum=0.0, strict=True
        ),
        log_tol=_resolve(
            "log_tol",
            log_tol,
            DEFAULT_LOG_TOL,
            float,
            file_values,
            minimum=0.0,
            strict=True,
        ),
        log_max_iter=_resolve(
            "log_max_iter",
            log_max_iter,
            DEFAULT_LOG_MAX_ITER,
            int,
            file_values,
            minimum=1,
            strict=False,
        ),
        geodesic_samples=_resolve(
            "geodesic_samples",
            geodesic_samples,
            DEFAULT_GEODESIC_SAMPLES,
            int,
            file_values,
            minimum=1,
            strict=False,
        ),
        quadrature_nodes=_resolve(
            "quadrature_nodes",
            quadrature_nodes,
            DEFAULT_QUADRATURE_NODES,
            int,
            file_values,
            minimum=2,
            strict=False,
        ),
        boundary_margin=_resolve(
            "boundary_margin",
            boundary_margin,
            DEFAULT_BOUNDARY_MARGIN,
            float,
            file_values,
            minimum=0.0,
            strict=False,
        ),
        workers=_resolve(
            "workers",
            workers,
            DEFAULT_WORKERS,
            int,
            file_values,
            minimum=1,
            strict=False,
        ),
    )

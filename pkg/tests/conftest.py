"""Shared test fixtures for fisher-rao tests."""

from __future__ import annotations

import os

import numpy as np
import pytest

from fisher_rao import SolverConfig

ENV_PREFIX = "FISHER_RAO_"


@pytest.fixture(autouse=True)
def clean_solver_env(monkeypatch):
    """Keep FISHER_RAO_* settings of the calling shell out of the tests."""
    for name in list(os.environ):
        if name.startswith(ENV_PREFIX) and name != "FISHER_RAO_LOG":
            monkeypatch.delenv(name, raising=False)


@pytest.fixture()
def config() -> SolverConfig:
    """Package defaults, independent of the environment."""
    return SolverConfig()


@pytest.fixture()
def rng() -> np.random.Generator:
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(12345)


@pytest.fixture()
def points_csv(tmp_path):
    """Return a helper writing rows (and an optional header) to a CSV file."""

    def _write(rows, header=None, name="points.csv"):
        lines = [] if header is None else [",".join(header)]
        lines += [",".join(repr(float(v)) for v in row) for row in rows]
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write

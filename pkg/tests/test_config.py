"""Tests for solver configuration resolution and the exception hierarchy."""

from __future__ import annotations

import logging

import pytest

from fisher_rao import (
    ConfigurationError,
    DomainError,
    FisherRaoError,
    InputError,
    IntegrationError,
    NonConvergenceError,
    NumericalError,
    Poisson,
    SolverConfig,
    resolve_solver_config,
)
from fisher_rao._logging import _configure, logger


class TestDefaults:
    """Package defaults when nothing is configured."""

    def test_defaults(self):
        cfg = resolve_solver_config()
        assert cfg == SolverConfig()
        assert cfg.rtol == 1e-10
        assert cfg.atol == 1e-12
        assert cfg.log_tol == 1e-9
        assert cfg.log_max_iter == 100
        assert cfg.geodesic_samples == 100
        assert cfg.quadrature_nodes == 100
        assert cfg.boundary_margin == 1e-8
        assert cfg.workers == 1

    def test_config_is_frozen(self):
        cfg = SolverConfig()
        with pytest.raises(AttributeError):
            cfg.rtol = 1.0  # type: ignore[misc]

    def test_replace_validates(self):
        cfg = SolverConfig().replace(workers=4)
        assert cfg.workers == 4
        with pytest.raises(ConfigurationError, match="rtol must be > 0"):
            SolverConfig().replace(rtol=0.0)


class TestEnvironment:
    """Settings read from FISHER_RAO_* variables."""

    def test_rtol_from_env(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_RTOL", "1e-8")
        assert resolve_solver_config().rtol == 1e-8

    def test_workers_from_env(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_WORKERS", "3")
        assert resolve_solver_config().workers == 3

    def test_explicit_overrides_env(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_QUADRATURE_NODES", "40")
        assert resolve_solver_config(quadrature_nodes=60).quadrature_nodes == 60

    def test_blank_env_value_uses_default(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_LOG_MAX_ITER", "  ")
        assert resolve_solver_config().log_max_iter == 100

    def test_invalid_float_env_raises(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_ATOL", "tiny")
        with pytest.raises(ConfigurationError, match="Invalid FISHER_RAO_ATOL"):
            resolve_solver_config()

    def test_invalid_int_env_raises(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_WORKERS", "2.5")
        with pytest.raises(ConfigurationError, match="expected an integer"):
            resolve_solver_config()

    def test_non_positive_tolerance_raises(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_LOG_TOL", "-1")
        with pytest.raises(ConfigurationError, match="FISHER_RAO_LOG_TOL must be > 0"):
            resolve_solver_config()

    def test_family_resolves_config_at_construction(self, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_GEODESIC_SAMPLES", "12")
        assert Poisson().config.geodesic_samples == 12


class TestEnvFile:
    """Settings read from an env file."""

    def test_env_file_values(self, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text(
            "\n".join(
                [
                    "# solver settings",
                    "",
                    "export FISHER_RAO_RTOL=1e-9",
                    "FISHER_RAO_WORKERS='2'",
                    'FISHER_RAO_GEODESIC_SAMPLES="50"',
                ]
            ),
            encoding="utf-8",
        )
        cfg = resolve_solver_config(env_file=env_file)
        assert cfg.rtol == 1e-9
        assert cfg.workers == 2
        assert cfg.geodesic_samples == 50

    def test_env_file_beats_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FISHER_RAO_WORKERS", "8")
        env_file = tmp_path / ".env"
        env_file.write_text("FISHER_RAO_WORKERS=2\n", encoding="utf-8")
        assert resolve_solver_config(env_file=env_file).workers == 2

    def test_explicit_beats_env_file(self, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text("FISHER_RAO_WORKERS=2\n", encoding="utf-8")
        assert resolve_solver_config(workers=5, env_file=env_file).workers == 5

    def test_unrelated_keys_ignored(self, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text(
            "DATABASE_URL=postgres://db\nFISHER_RAO_WORKERS=3\n", encoding="utf-8"
        )
        assert resolve_solver_config(env_file=env_file).workers == 3

    def test_missing_env_file_raises(self, tmp_path):
        with pytest.raises(ConfigurationError, match="Env file not found"):
            resolve_solver_config(env_file=tmp_path / "absent.env")

    def test_malformed_line_raises(self, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text("FISHER_RAO_RTOL\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Invalid env line 1"):
            resolve_solver_config(env_file=env_file)

    def test_empty_key_raises(self, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text("=1\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="empty key name"):
            resolve_solver_config(env_file=env_file)


class TestExceptionLayers:
    """Exit codes and inheritance of the error hierarchy."""

    def test_exit_codes(self):
        assert InputError.exit_code == 2
        assert NumericalError.exit_code == 3
        assert ConfigurationError.exit_code == 2

    def test_domain_error_is_value_error(self):
        assert issubclass(DomainError, ValueError)
        assert issubclass(DomainError, FisherRaoError)

    def test_numerical_attributes(self):
        exc = NonConvergenceError("no luck", residual=0.5, iterate=[1.0])
        assert isinstance(exc, NumericalError)
        assert exc.residual == 0.5
        err = IntegrationError("stiff", t=0.3, state=[1.0, 2.0])
        assert err.t == 0.3


class TestLogging:
    """FISHER_RAO_LOG handling of the package logger."""

    @pytest.fixture()
    def fresh_logger(self, monkeypatch):
        monkeypatch.setattr(logger, "handlers", [])
        monkeypatch.setattr(logger, "propagate", True)
        monkeypatch.setattr(logger, "level", logging.NOTSET)
        return logger

    def test_level_and_handler(self, fresh_logger):
        _configure("info")
        assert fresh_logger.level == logging.INFO
        assert len(fresh_logger.handlers) == 1
        assert fresh_logger.propagate is False

    @pytest.mark.parametrize("name", ["", "loud"], ids=["unset", "unknown"])
    def test_ignored_values(self, fresh_logger, name):
        _configure(name)
        assert fresh_logger.level == logging.NOTSET
        assert fresh_logger.handlers == []

"""
Tests for Settings

Settings come from LS_* environment variables with defaults for everything.
"""

import pytest
from pydantic import ValidationError

from lstransforms.config import Settings
from lstransforms.schemas import RunConfig, Tolerance


def test_defaults(monkeypatch: pytest.MonkeyPatch) -> None:
    """Without LS_* variables every setting takes its default."""
    for name in ("LS_MAX_N", "LS_ABS_TOL", "LS_WORKERS", "LS_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings(_env_file=None)

    assert settings.max_n == 12
    assert settings.coefficient_tol == 1e-6
    assert settings.abs_tol == 1e-12
    assert settings.workers == 1


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    """LS_* variables override the defaults, and the log level is normalized."""
    monkeypatch.setenv("LS_MAX_N", "8")
    monkeypatch.setenv("LS_WORKERS", "4")
    monkeypatch.setenv("LS_LOG_LEVEL", "debug")
    settings = Settings(_env_file=None)

    assert settings.max_n == 8
    assert settings.workers == 4
    assert settings.log_level == "DEBUG"


def test_invalid_values(monkeypatch: pytest.MonkeyPatch) -> None:
    """Unknown log levels and a zero abs_tol are rejected."""
    monkeypatch.setenv("LS_LOG_LEVEL", "chatty")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)

    monkeypatch.delenv("LS_LOG_LEVEL")
    monkeypatch.setenv("LS_ABS_TOL", "0")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_run_config_tolerance_overrides() -> None:
    """Per-command overrides replace only the fields they name."""
    config = RunConfig(command="kernel", abs_tol=1e-9, max_subdivisions=50)
    tol = config.tolerance()

    assert tol.abs_tol == 1e-9
    assert tol.max_subdivisions == 50
    assert tol.rel_tol == Tolerance().rel_tol


def test_run_config_rejects_unknown_command() -> None:
    """A command name outside the registry does not validate."""
    with pytest.raises(ValidationError):
        RunConfig(command="plot")

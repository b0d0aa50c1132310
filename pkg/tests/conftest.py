"""
Pytest Configuration and Shared Fixtures

This file is automatically loaded by pytest and provides:
- Tolerances shared by the numerical tests
- A CLI runner that captures the exit status and the report
- Test configuration (markers)
"""

import json
from pathlib import Path
from typing import Any, Callable, Optional

import pytest

from lstransforms.main import main
from lstransforms.schemas import Tolerance


@pytest.fixture
def tolerance() -> Tolerance:
    """
    Default tolerance for library calls in tests.

    Returns:
        Tolerance: abs 1e-12, rel 1e-10
    """
    return Tolerance(abs_tol=1e-12, rel_tol=1e-10, max_subdivisions=2000)


@pytest.fixture
def tight_tolerance() -> Tolerance:
    """Tolerance for comparisons against closed forms at the 1e-13 level."""
    return Tolerance(abs_tol=1e-14, rel_tol=1e-13, max_subdivisions=4000)


@pytest.fixture
def tmp_report(tmp_path: Path) -> Path:
    """Path of a report file that does not exist yet."""
    return tmp_path / "reports" / "report.json"


@pytest.fixture
def cli_runner(capsys: pytest.CaptureFixture[str]) -> Callable[..., tuple[int, Optional[Any]]]:
    """
    Run the CLI in-process.

    Usage:
        def test_kernel(cli_runner):
            code, report = cli_runner("kernel", "--kind", "bessel_k", "--x", "1")

    Returns:
        (exit status, parsed JSON report from stdout or None)
    """

    def run(*argv: str) -> tuple[int, Optional[Any]]:
        code = main(list(argv))
        out = capsys.readouterr().out
        if not out.strip():
            return code, None
        try:
            return code, json.loads(out)
        except json.JSONDecodeError:
            return code, out
    return run


def pytest_configure(config: pytest.Config) -> None:
    """
    Configure pytest with custom markers.

    Args:
        config: Pytest configuration object
    """
    config.addinivalue_line(
        "markers",
        "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers",
        "integration: marks tests as integration tests"
    )

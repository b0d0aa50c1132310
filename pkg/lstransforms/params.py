"""
Shared Command Parameters

Reusable argument groups and parsers for the CLI commands.

- Tolerance overrides (--abs-tol, --rel-tol, --max-subdivisions)
- Output options (--format, --output)
- List syntax: comma-separated numbers ("0,1,0" -> a_0, a_1, a_2)

Malformed input raises ``DomainError`` so every command reports it the same
way (exit status 1).
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from lstransforms.config import settings
from lstransforms.errors import DomainError
from lstransforms.schemas import CoefficientSequence

T = TypeVar("T")
R = TypeVar("R")


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises DomainError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise DomainError(f"{self.prog}: {message}")


def add_tolerance_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tolerance")
    group.add_argument("--abs-tol", type=float, default=None, help=f"absolute tolerance (default {settings.abs_tol:g})")
    group.add_argument("--rel-tol", type=float, default=None, help=f"relative tolerance (default {settings.rel_tol:g})")
    group.add_argument(
        "--max-subdivisions",
        type=int,
        default=None,
        help=f"subdivision budget per integral (default {settings.max_subdivisions})",
    )


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    group.add_argument("--output", default=None, help="report path (stdout when omitted)")


def parse_floats(text: str) -> list[float]:
    """
    Parse a comma-separated list of numbers.

    Example:
        >>> parse_floats("0.5, 1,2")
        [0.5, 1.0, 2.0]
    """
    items = [item.strip() for item in str(text).split(",") if item.strip()]
    try:
        return [float(item) for item in items]
    except ValueError:
        raise DomainError(f"malformed number list {text!r}", text=text)


def parse_ints(text: str) -> list[int]:
    values = parse_floats(text)
    if any(v != int(v) for v in values):
        raise DomainError(f"expected integers, got {text!r}", text=text)
    return [int(v) for v in values]


def parse_sequence(text: str, delta: float = 0.0) -> CoefficientSequence:
    """Coefficient sequence from "a_0,a_1,..." with an optional decay certificate delta."""
    values = parse_floats(text)
    try:
        return CoefficientSequence.from_values(values, delta)
    except ValueError as exc:
        raise DomainError(str(exc), text=text, delta=delta)


def map_ordered(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply func to every item on settings.workers threads; results keep input order."""
    items = list(items)
    if settings.workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.workers) as executor:
        return list(executor.map(func, items))


"""
lstransforms CLI

Main entry point for the command-line interface.

Exit status:
- 0: report written
- 1: invalid input (DomainError or a parameter validation error)
- 2: a quadrature failed to converge or hit a non-finite integrand value

Nothing is written unless the command succeeds.
"""

import logging
import sys
import time
from datetime import datetime, timezone
from typing import Optional, Sequence

from pydantic import ValidationError

from lstransforms import __version__
from lstransforms.commands import COMMANDS
from lstransforms.config import settings
from lstransforms.errors import DomainError, QuadratureError
from lstransforms.params import CommandParser
from lstransforms.reporting import render, resolve_path, write_atomic
from lstransforms.schemas import CommandReport, RunConfig

logger = logging.getLogger("lstransforms")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_QUADRATURE = 2


def build_parser() -> CommandParser:
    parser = CommandParser(prog="lstransforms", description="Discrete Lebedev-Skalskaya index transforms")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)
    for command in COMMANDS.values():
        command.register(subparsers)
    return parser


def run(config: RunConfig) -> int:
    """Execute one validated invocation and write its report."""
    started_at = datetime.now(timezone.utc).isoformat()
    started = time.perf_counter()
    command = COMMANDS[config.command]

    try:
        output = command.handle(config.params, config.tolerance())
    except (DomainError, ValidationError) as exc:
        logger.error("%s: invalid input: %s", config.command, exc)
        return EXIT_INVALID
    except QuadratureError as exc:
        logger.error("%s: quadrature failed: %s", config.command, exc.to_dict())
        return EXIT_QUADRATURE

    for warning in output.warnings:
        logger.warning("%s: %s", config.command, warning)

    report = CommandReport(
        command=config.command,
        params=config.params,
        results=output.results,
        warnings=output.warnings,
        timing={"started_at": started_at, "elapsed_seconds": time.perf_counter() - started},
    )
    text = render(report, config.output_format, output.document)
    if config.output:
        write_atomic(resolve_path(config.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        params = COMMANDS[args.command].collect(args)
        config = RunConfig(
            command=args.command,
            params=params,
            abs_tol=args.abs_tol,
            rel_tol=args.rel_tol,
            max_subdivisions=args.max_subdivisions,
            output_format=args.output_format,
            output=args.output,
        )
    except (DomainError, ValidationError) as exc:
        logger.error("invalid arguments: %s", exc)
        return EXIT_INVALID
    return run(config)

"""
Reconstruct Command

Partial sums of the incomplete-kernel series of a built-in periodic profile,
compared with the integral representation of the same function.

Example:
    lstransforms reconstruct --profile triangle --x 1 --N 2,4,8,16
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_floats, parse_ints
from lstransforms.schemas import CommandOutput, Tolerance, Variant
from lstransforms.services.profiles import builtin_profile, profile_coefficients, profile_variant, reconstruct_im, reconstruct_re, represent_from_profile


class ReconstructParams(BaseModel):
    profile: Literal["cos", "sin", "triangle", "odd_triangle"] = "cos"
    x: list[float] = Field(min_length=1)
    N: list[int] = Field(default_factory=lambda: [1, 2, 4, 8], min_length=1)


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("reconstruct", help="partial-sum reconstruction of a profile function")
    parser.add_argument("--profile", choices=("cos", "sin", "triangle", "odd_triangle"), default="cos")
    parser.add_argument("--x", required=True, help="comma-separated evaluation points (> 0)")
    parser.add_argument("--N", default="1,2,4,8", help="comma-separated partial-sum orders")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    return {"profile": args.profile, "x": parse_floats(args.x), "N": parse_ints(args.N)}


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = ReconstructParams(**params)
    profile = builtin_profile(config.profile)
    report = profile_coefficients(profile, max(config.N), tol)
    coefficients = report.as_sequence()
    partial_sum = reconstruct_re if profile_variant(profile) == Variant.RE else reconstruct_im

    rows = []
    for x in config.x:
        reference = represent_from_profile(profile, x, tol)
        for N in config.N:
            value = partial_sum(coefficients, x, N)
            rows.append({"x": x, "N": N, "value": value, "reference": reference, "abs_error": abs(value - reference)})
    return CommandOutput(results=rows, warnings=report.warnings)

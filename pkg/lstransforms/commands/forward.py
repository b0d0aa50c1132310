"""
Forward Command

Sums a forward series (complete or incomplete kernels) on a grid of x.

Example:
    lstransforms forward --seq 1,0,0 --alpha 0.5 --x 0.5,1,2
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_floats, parse_sequence
from lstransforms.schemas import CoefficientSequence, CommandOutput, Tolerance
from lstransforms.services.transforms import forward_report


class ForwardParams(BaseModel):
    seq: list[float]
    delta: float = Field(default=0.0, ge=0, lt=1.5707963267948966)
    alpha: float = Field(default=0.5, gt=-1, lt=1)
    x: list[float] = Field(min_length=1)
    variant: Literal["re", "im"] = "re"
    incomplete: bool = False


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("forward", help="evaluate a forward series on a grid of x")
    parser.add_argument("--seq", required=True, help="coefficients a_0,a_1,...")
    parser.add_argument("--delta", type=float, default=0.0, help="decay certificate exponent")
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--x", required=True, help="comma-separated arguments (> 0)")
    parser.add_argument("--variant", choices=("re", "im"), default="re")
    parser.add_argument("--incomplete", action="store_true", help="use the incomplete kernels J(x, 1/2+in, pi)")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    return {
        "seq": parse_sequence(args.seq, args.delta).values,
        "delta": args.delta,
        "alpha": args.alpha,
        "x": parse_floats(args.x),
        "variant": args.variant,
        "incomplete": args.incomplete,
    }


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = ForwardParams(**params)
    seq = CoefficientSequence.from_values(config.seq, config.delta)
    report = forward_report(seq, config.alpha, config.x, config.variant, tol, incomplete=config.incomplete)
    rows = [{"x": row.pop("index"), **row} for row in report.rows()]
    return CommandOutput(results=rows, warnings=report.warnings)

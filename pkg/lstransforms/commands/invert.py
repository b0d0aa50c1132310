"""
Invert Command

Recovers coefficients a_0..a_N of a function by one of the inversion
formulas. The function is either exp(-x cosh u0) or a forward series.

Example:
    lstransforms invert --function laplace --u0 0.7 --method coeff --n-max 4
    lstransforms invert --function series --seq 0,1 --indices 14
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_floats, parse_ints
from lstransforms.schemas import CoefficientSequence, CommandOutput, FunctionEvaluator, Tolerance
from lstransforms.services.transforms import METHODS, laplace_kernel_function, recover_coefficients, series_function, zero_function


class InvertParams(BaseModel):
    function: Literal["laplace", "series", "zero"] = "laplace"
    u0: float = 0.7
    seq: list[float] = Field(default_factory=list)
    delta: float = Field(default=0.0, ge=0, lt=1.5707963267948966)
    method: Literal["coeff", "theorem2", "theorem3", "theorem5"] = "theorem2"
    variant: Literal["re", "im"] = "re"
    alpha: float = Field(default=0.5, gt=-1, lt=1)
    n_max: int = Field(default=8, ge=0)
    indices: Optional[list[int]] = None

    @model_validator(mode="after")
    def _series_needs_coefficients(self) -> "InvertParams":
        if self.function == "series" and not self.seq:
            raise ValueError("--function series needs --seq")
        return self

    def evaluator(self) -> FunctionEvaluator:
        if self.function == "laplace":
            return laplace_kernel_function(self.u0)
        if self.function == "zero":
            return zero_function()
        seq = CoefficientSequence.from_values(self.seq, self.delta)
        return series_function(seq, self.alpha, self.variant, incomplete=self.method == "theorem3")


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("invert", help="recover coefficients of a function")
    parser.add_argument("--function", choices=("laplace", "series", "zero"), default="laplace")
    parser.add_argument("--u0", type=float, default=0.7, help="u0 of f(x) = exp(-x cosh u0)")
    parser.add_argument("--seq", default=None, help="coefficients of the forward series f")
    parser.add_argument("--delta", type=float, default=0.0)
    parser.add_argument("--method", choices=METHODS, default="theorem2")
    parser.add_argument("--variant", choices=("re", "im"), default="re")
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--n-max", type=int, default=8)
    parser.add_argument("--indices", default=None, help="comma-separated indices (overrides --n-max)")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    params = {
        "function": args.function,
        "u0": args.u0,
        "seq": parse_floats(args.seq) if args.seq else [],
        "delta": args.delta,
        "method": args.method,
        "variant": args.variant,
        "alpha": args.alpha,
        "n_max": args.n_max,
    }
    if args.indices is not None:
        params["indices"] = parse_ints(args.indices)
    return params


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = InvertParams(**params)
    report = recover_coefficients(
        config.evaluator(),
        config.method,
        config.variant,
        config.n_max,
        config.alpha,
        tol,
        indices=config.indices,
    )
    rows = [{"n": row.pop("index"), **row} for row in report.rows()]
    return CommandOutput(results=rows, warnings=report.warnings)

"""
Kernel Command

Evaluates one kernel family on a grid of tau and x values.

Example:
    lstransforms kernel --alpha 0.5 --tau 0 --x 1.0
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from lstransforms.params import add_output_arguments, add_tolerance_arguments, map_ordered, parse_floats
from lstransforms.schemas import CommandOutput, Tolerance
from lstransforms.services.kernels import bessel_k_values, kernel_bound_values, kernel_values


class KernelParams(BaseModel):
    alpha: float = Field(gt=-1, lt=1)
    tau: list[float] = Field(default_factory=lambda: [0.0])
    x: list[float] = Field(min_length=1)
    kind: Literal["re_k", "im_k", "re_j", "im_j", "bessel_k"] = "re_k"
    delta: Optional[float] = Field(default=None, ge=0, lt=1.5707963267948966)

    @field_validator("x")
    @classmethod
    def _positive(cls, values: list[float]) -> list[float]:
        if any(not v > 0 for v in values):
            raise ValueError("x must be positive")
        return values


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("kernel", help="evaluate Re/Im K, Re/Im J or K_alpha on a grid")
    parser.add_argument("--alpha", type=float, required=True)
    parser.add_argument("--tau", default="0", help="comma-separated imaginary parts of the order")
    parser.add_argument("--x", required=True, help="comma-separated arguments (> 0)")
    parser.add_argument("--kind", choices=("re_k", "im_k", "re_j", "im_j", "bessel_k"), default="re_k")
    parser.add_argument("--delta", type=float, default=None, help="also report the bound exp(-delta tau) K_alpha(x cos delta)")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    params = {"alpha": args.alpha, "tau": parse_floats(args.tau), "x": parse_floats(args.x), "kind": args.kind}
    if args.delta is not None:
        params["delta"] = args.delta
    return params


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = KernelParams(**params)

    def evaluate(x: float) -> list[dict[str, Any]]:
        if config.kind == "bessel_k":
            values = [float(bessel_k_values(config.alpha, x, tol))] * len(config.tau)
            errors = [0.0] * len(config.tau)
        else:
            result = kernel_values(config.kind, config.alpha, config.tau, x, tol)
            values, errors = result.values.tolist(), result.errors.tolist()
        rows = []
        for tau, value, error in zip(config.tau, values, errors):
            row = {"kind": config.kind, "alpha": config.alpha, "tau": tau, "x": x, "value": value, "error_estimate": error}
            if config.delta is not None:
                row["bound"] = float(kernel_bound_values(config.alpha, tau, x, config.delta, tol))
            rows.append(row)
        return rows

    return CommandOutput(results=[row for rows in map_ordered(evaluate, config.x) for row in rows])

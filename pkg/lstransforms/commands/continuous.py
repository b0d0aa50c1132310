"""
Continuous Command

Round trip of the continuous pair for f(x) = exp(-x cosh u0).

- forward: numerical F(tau) against its closed form
- inverse: truncated inversion of the closed-form F(tau) against f(x)

Example:
    lstransforms continuous --mode inverse --u0 0.7 --x 0.5,1,2 --tau-max 12
"""

import math
from typing import Any, Literal

from pydantic import BaseModel, Field

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_floats
from lstransforms.schemas import CommandOutput, Tolerance, Variant
from lstransforms.services.continuous import (
    laplace_spectrum_decay,
    laplace_spectrum_im,
    laplace_spectrum_re,
    ls_forward,
    ls_inverse,
)
from lstransforms.services.transforms import laplace_kernel_function


class ContinuousParams(BaseModel):
    mode: Literal["forward", "inverse"] = "inverse"
    variant: Literal["re", "im"] = "re"
    u0: float = 0.7
    tau: list[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    x: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    tau_max: float = Field(default=12.0, gt=0)


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("continuous", help="continuous pair round trip for exp(-x cosh u0)")
    parser.add_argument("--mode", choices=("forward", "inverse"), default="inverse")
    parser.add_argument("--variant", choices=("re", "im"), default="re")
    parser.add_argument("--u0", type=float, default=0.7)
    parser.add_argument("--tau", default="0,0.5,1,2", help="orders for the forward mode")
    parser.add_argument("--x", default="0.5,1,2", help="points for the inverse mode")
    parser.add_argument("--tau-max", type=float, default=12.0)
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    return {
        "mode": args.mode,
        "variant": args.variant,
        "u0": args.u0,
        "tau": parse_floats(args.tau),
        "x": parse_floats(args.x),
        "tau_max": args.tau_max,
    }


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = ContinuousParams(**params)
    spectrum = laplace_spectrum_re if config.variant == Variant.RE else laplace_spectrum_im

    if config.mode == "forward":
        values = ls_forward(laplace_kernel_function(config.u0), config.tau, config.variant, tol)
        rows = []
        for tau, value in zip(config.tau, values.tolist()):
            closed = spectrum(config.u0, tau)
            rows.append({"tau": tau, "value": value, "closed_form": closed, "abs_error": abs(value - closed)})
        return CommandOutput(results=rows)

    decay = laplace_spectrum_decay(config.u0, config.variant)
    rows = []
    for x in config.x:
        estimate = ls_inverse(lambda tau: spectrum(config.u0, tau), x, config.tau_max, decay, config.variant, tol)
        reference = math.exp(-x * math.cosh(config.u0))
        rows.append({
            "x": x,
            "value": estimate.value,
            "reference": reference,
            "abs_error": abs(estimate.value - reference),
            "error_estimate": estimate.error_estimate,
            "tail_bound": estimate.tail_bound,
        })
    return CommandOutput(results=rows)

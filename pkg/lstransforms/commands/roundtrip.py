"""
Roundtrip Command

Pushes a coefficient sequence through a forward series and recovers it with
the matching inversion formula.

- theorem 2: forward_re/im with complete kernels, inversion with incomplete kernels
- theorem 3: forward with incomplete kernels, inversion with complete kernels
- theorem 5: forward with complete kernels, recovery of a_n = b_n / cosh(pi n);
  the report compares cosh(pi n) a_n with b_n

Example:
    lstransforms roundtrip --theorem 2 --variant re --seq 0,1,0
"""

import math
from typing import Any, Literal

from pydantic import BaseModel, Field

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_sequence
from lstransforms.schemas import CoefficientSequence, CommandOutput, Tolerance, Variant
from lstransforms.services.transforms import recover_coefficients, series_function


class RoundtripParams(BaseModel):
    theorem: Literal[2, 3, 5] = 2
    variant: Literal["re", "im"] = "re"
    seq: list[float] = Field(min_length=1)
    delta: float = Field(default=0.0, ge=0, lt=1.5707963267948966)
    alpha: float = 0.5


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("roundtrip", help="forward series followed by its inversion")
    parser.add_argument("--theorem", type=int, choices=(2, 3, 5), default=2)
    parser.add_argument("--variant", choices=("re", "im"), default="re")
    parser.add_argument("--seq", required=True, help="coefficients a_0,a_1,...")
    parser.add_argument("--delta", type=float, default=0.0)
    parser.add_argument("--alpha", type=float, default=0.5, help="+-1/2 (theorem 5 uses 1/2)")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    return {
        "theorem": args.theorem,
        "variant": args.variant,
        "seq": parse_sequence(args.seq, args.delta).values,
        "delta": args.delta,
        "alpha": args.alpha,
    }


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = RoundtripParams(**params)
    seq = CoefficientSequence.from_values(config.seq, config.delta)
    f = series_function(seq, config.alpha, config.variant, incomplete=config.theorem == 3)
    report = recover_coefficients(f, f"theorem{config.theorem}", config.variant, seq.order, config.alpha, tol)

    rows = []
    for n, value, error, converged in zip(report.indices, report.values, report.error_estimates, report.converged):
        n = int(n)
        expected = 0.0 if (config.variant == Variant.IM and n == 0) else seq.coefficient(n)
        recovered = value * math.cosh(math.pi * n) if config.theorem == 5 else value
        rows.append({
            "n": n,
            "input": expected,
            "recovered": recovered,
            "coefficient": value,
            "abs_error": abs(recovered - expected),
            "error_estimate": error,
            "converged": converged,
        })
    return CommandOutput(results=rows, warnings=report.warnings)

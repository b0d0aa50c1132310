"""
Oracle Command

Compares the quadrature left-hand side of a Laplace-composition identity with
its closed form on a grid of u (and n or tau) values.

Example:
    lstransforms oracle --identity eq113 --alpha 0.5 --tau 0 --u 0
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from lstransforms.params import add_output_arguments, add_tolerance_arguments, map_ordered, parse_floats
from lstransforms.schemas import CommandOutput, Tolerance
from lstransforms.services.identities import IDENTITIES, check_identity


class OracleParams(BaseModel):
    identity: Literal["eq113", "eq114", "eq115", "eq27", "eq28"]
    alpha: float = Field(default=0.5, gt=-1, lt=1)
    tau: list[float] = Field(default_factory=lambda: [0.0])
    u: list[float] = Field(default_factory=lambda: [0.0], min_length=1)


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("oracle", help="residuals of the closed-form Laplace identities")
    parser.add_argument("--identity", choices=IDENTITIES, required=True)
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--tau", default=None, help="comma-separated orders (tau for eq113)")
    parser.add_argument("--n", default=None, help="comma-separated integer indices (eq114, eq115, eq27, eq28)")
    parser.add_argument("--u", default="0", help="comma-separated u values")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    orders = args.n if args.n is not None else args.tau
    return {
        "identity": args.identity,
        "alpha": args.alpha,
        "tau": parse_floats(orders if orders is not None else "0"),
        "u": parse_floats(args.u),
    }


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    config = OracleParams(**params)
    key = "tau" if config.identity == "eq113" else "n"
    grid = [(order, u) for order in config.tau for u in config.u]

    def evaluate(point: tuple[float, float]) -> dict[str, Any]:
        order, u = point
        residual = check_identity(config.identity, {"alpha": config.alpha, key: order, "u": u}, tol)
        return residual.model_dump()

    return CommandOutput(results=map_ordered(evaluate, grid))

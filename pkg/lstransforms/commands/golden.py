"""
Golden Command

Writes a deterministic golden table of kernel values and identity residuals.

Example:
    lstransforms golden --alphas 0,-0.5,0.5 --ns 0,1,2,3,4,5,6,7,8 --xs 0.5,1,2 --output golden.json
"""

from typing import Any

from lstransforms.params import add_output_arguments, add_tolerance_arguments, parse_floats, parse_ints
from lstransforms.schemas import CommandOutput, Tolerance
from lstransforms.services.golden import GoldenGrid, IdentityGrid, KernelGrid, emit_golden


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("golden", help="emit a golden table")
    parser.add_argument("--alphas", default="", help="kernel grid: alpha values")
    parser.add_argument("--ns", default="", help="kernel grid: indices n")
    parser.add_argument("--xs", default="", help="kernel grid: arguments x")
    parser.add_argument("--kinds", default="re_k,im_k", help="kernel grid: kernel kinds")
    parser.add_argument("--identity", default=None, help="identity grid: eq113, eq114, eq115, eq27 or eq28")
    parser.add_argument("--identity-alphas", default="0.5")
    parser.add_argument("--identity-ns", default="")
    parser.add_argument("--us", default="")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)


def collect(args: Any) -> dict[str, Any]:
    params: dict[str, Any] = {}
    if args.alphas or args.ns or args.xs:
        params["kernels"] = {
            "alphas": parse_floats(args.alphas),
            "ns": parse_ints(args.ns),
            "xs": parse_floats(args.xs),
            "kinds": [kind.strip() for kind in args.kinds.split(",") if kind.strip()],
        }
    if args.identity:
        params["identities"] = {
            "identity": args.identity,
            "alphas": parse_floats(args.identity_alphas),
            "ns": parse_ints(args.identity_ns),
            "us": parse_floats(args.us),
        }
    return params


def handle(params: dict[str, Any], tol: Tolerance) -> CommandOutput:
    grid = GoldenGrid(
        kernels=KernelGrid(**params["kernels"]) if "kernels" in params else None,
        identities=IdentityGrid(**params["identities"]) if "identities" in params else None,
    )
    table = emit_golden(grid, tol)
    rows = [
        {"inputs": list(row.inputs), "value": row.value, "value_imag": row.value_imag, "error_estimate": row.error_estimate, "provenance": row.provenance}
        for row in table.rows
    ]
    return CommandOutput(results=rows, document=table)

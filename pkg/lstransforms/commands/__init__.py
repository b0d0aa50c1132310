"""
CLI Commands

One module per command. Each module exposes:

- ``register(subparsers)``: adds its subparser and arguments
- ``collect(args)``: turns parsed arguments into the RunConfig params dict
- ``handle(params, tol)``: validates params and returns a CommandOutput

``COMMANDS`` maps command names to modules; ``main`` includes them the way
an application includes its routers.
"""

from lstransforms.commands import continuous, forward, golden, invert, kernel, oracle, reconstruct, roundtrip

COMMANDS = {
    "kernel": kernel,
    "oracle": oracle,
    "forward": forward,
    "invert": invert,
    "roundtrip": roundtrip,
    "reconstruct": reconstruct,
    "continuous": continuous,
    "golden": golden,
}

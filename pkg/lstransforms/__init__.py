"""
lstransforms

Discrete Lebedev-Skalskaya index transforms: kernels, coefficient recovery,
partial-sum reconstruction and the continuous pair, with a JSON/CSV CLI.
"""

__version__ = "0.1.0"

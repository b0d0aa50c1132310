"""
Golden Tables

Deterministic tables of kernel values and identity residuals for regression
tests. A table records the grid it was generated from and one row per grid
point: (inputs, value, error estimate, provenance).

Grids are refused when they reach past the precision envelope (n > N_max).
"""

import logging
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from lstransforms.config import settings
from lstransforms.errors import DomainError
from lstransforms.schemas import GoldenRow, GoldenTable, Tolerance
from lstransforms.services.identities import check_identity
from lstransforms.services.kernels import kernel_values

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


class KernelGrid(BaseModel):
    """Cartesian grid of Re K / Im K evaluations."""

    alphas: list[float] = Field(default_factory=list)
    ns: list[int] = Field(default_factory=list)
    xs: list[float] = Field(default_factory=list)
    kinds: list[str] = Field(default_factory=lambda: ["re_k", "im_k"])


class IdentityGrid(BaseModel):
    """Cartesian grid of identity residual checks."""

    identity: str = "eq114"
    alphas: list[float] = Field(default_factory=lambda: [0.5])
    ns: list[int] = Field(default_factory=list)
    us: list[float] = Field(default_factory=list)


class GoldenGrid(BaseModel):
    kernels: Optional[KernelGrid] = None
    identities: Optional[IdentityGrid] = None


def _check_envelope(ns: Sequence[int]) -> None:
    too_large = [n for n in ns if n > settings.max_n]
    if too_large:
        raise DomainError(
            f"golden grid reaches n={max(too_large)} beyond the precision envelope N_max={settings.max_n}",
            n=max(too_large),
            max_n=settings.max_n,
        )


def kernel_rows(grid: KernelGrid, tol: Optional[Tolerance] = None) -> list[GoldenRow]:
    rows = []
    if not (grid.alphas and grid.ns and grid.xs):
        return rows
    ns = np.array(grid.ns, dtype=float)
    xs = np.array(grid.xs, dtype=float)
    for kind in grid.kinds:
        for alpha in grid.alphas:
            result = kernel_values(kind, alpha, ns[:, None], xs[None, :], tol)
            for i, n in enumerate(grid.ns):
                for j, x in enumerate(grid.xs):
                    rows.append(
                        GoldenRow(
                            inputs=(kind, float(alpha), int(n), float(x)),
                            value=float(result.values[i, j]),
                            error_estimate=float(result.errors[i, j]),
                            provenance=f"gauss-kronrod {kind}",
                        )
                    )
    return rows


def identity_rows(grid: IdentityGrid, tol: Optional[Tolerance] = None) -> list[GoldenRow]:
    """
    One row per (alpha, n, u). The index is the order tau for eq113, whose
    closed form is complex; its imaginary part goes to ``value_imag``.
    """
    rows = []
    order = "tau" if grid.identity == "eq113" else "n"
    for alpha in grid.alphas:
        for n in grid.ns:
            for u in grid.us:
                residual = check_identity(grid.identity, {"alpha": alpha, order: n, "u": u}, tol)
                rows.append(
                    GoldenRow(
                        inputs=(grid.identity, float(alpha), int(n), float(u)),
                        value=residual.rhs,
                        value_imag=residual.rhs_imag,
                        error_estimate=residual.residual,
                        provenance=f"closed form {grid.identity}; error column is the quadrature residual",
                    )
                )
    return rows


def emit_golden(grid: GoldenGrid, tol: Optional[Tolerance] = None) -> GoldenTable:
    """
    Build the golden table of a grid.

    Raises:
        DomainError: a grid index exceeds N_max
    """
    tol = tol or Tolerance()
    if grid.kernels is not None:
        _check_envelope(grid.kernels.ns)
    if grid.identities is not None:
        _check_envelope(grid.identities.ns)

    rows: list[GoldenRow] = []
    if grid.kernels is not None:
        rows.extend(kernel_rows(grid.kernels, tol))
    if grid.identities is not None:
        rows.extend(identity_rows(grid.identities, tol))
    logger.info("golden table with %d rows", len(rows))

    generation: dict[str, Any] = {
        "grid": grid.model_dump(),
        "tolerance": tol.model_dump(),
        "max_n": settings.max_n,
    }
    return GoldenTable(schema_version=SCHEMA_VERSION, generation=generation, rows=rows)

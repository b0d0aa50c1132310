"""
Domain Schemas

Pydantic models for every value that crosses a module boundary: quadrature
tolerances and estimates, kernel orders and points, coefficient sequences,
function evaluators, periodic profiles, transform reports and the CLI run
configuration.

Field constraints carry the invariants, so an invalid object cannot be built:
construction raises ``pydantic.ValidationError`` (a ``ValueError``).
"""

import math
from typing import Any, Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lstransforms.config import settings

HALF_PI = math.pi / 2


# Variant constants
class Variant:
    """Real or imaginary flavor of a kernel, transform or identity."""
    RE = "re"
    IM = "im"


class ProfileFlavor:
    """How a periodic profile psi is weighted into phi (Theorem 4)."""
    COSH_HALF = "cosh_half"  # phi(u) = psi(u) cosh(u/2)
    SINH_HALF = "sinh_half"  # phi(u) = psi(u) sinh(u/2)


VariantName = Literal["re", "im"]
FlavorName = Literal["cosh_half", "sinh_half"]


# Quadrature
class Tolerance(BaseModel):
    """Error targets and panel budget of the adaptive integrator."""
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default_factory=lambda: settings.abs_tol, gt=0, description="Absolute error target")
    rel_tol: float = Field(default_factory=lambda: settings.rel_tol, gt=0, description="Relative error target")
    max_subdivisions: int = Field(
        default_factory=lambda: settings.max_subdivisions,
        ge=1,
        description="Maximum number of panels",
    )

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_abs_tol(self, abs_tol: float) -> "Tolerance":
        return self.model_copy(update={"abs_tol": max(abs_tol, 1e-300)})


class IntegralEstimate(BaseModel):
    """Result of one numerical integration."""
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(ge=0)
    evaluations: int = Field(ge=0)
    converged: bool
    subdivisions: int = Field(default=1, ge=0)
    roundoff_limited: bool = False


class DecayHint(BaseModel):
    """Exponential decay rate lambda of an integrand, f(u) = O(exp(-lambda u))."""
    model_config = ConfigDict(frozen=True)

    rate: float = Field(gt=0)


# Kernels
class KernelOrder(BaseModel):
    """Order alpha + i tau of the Lebedev-Skalskaya kernels."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=-1, lt=1, description="Real part of the order, |alpha| < 1")
    tau: float = Field(default=0.0, description="Imaginary part; a discrete index n in series usage")

    @field_validator("alpha", "tau")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("order components must be finite")
        return value


class KernelPoint(BaseModel):
    """A kernel order together with the argument x > 0."""
    model_config = ConfigDict(frozen=True)

    order: KernelOrder
    x: float = Field(gt=0, description="Argument of the kernel")

    @classmethod
    def of(cls, alpha: float, tau: float, x: float) -> "KernelPoint":
        return cls(order=KernelOrder(alpha=alpha, tau=tau), x=x)

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def tau(self) -> float:
        return self.order.tau


# Identities
class IdentityResidual(BaseModel):
    """Quadrature left-hand side against closed-form right-hand side."""

    identity: str
    params: dict[str, Any] = Field(default_factory=dict)
    lhs: float
    rhs: float
    lhs_imag: float = 0.0
    rhs_imag: float = 0.0
    residual: float = Field(ge=0)
    rel_residual: float = Field(ge=0)
    lhs_error_estimate: float = Field(default=0.0, ge=0)

    @classmethod
    def compare(
        cls,
        identity: str,
        lhs: complex,
        rhs: complex,
        params: Optional[dict[str, Any]] = None,
        lhs_error_estimate: float = 0.0,
    ) -> "IdentityResidual":
        lhs_c, rhs_c = complex(lhs), complex(rhs)
        residual = abs(lhs_c - rhs_c)
        return cls(
            identity=identity,
            params=params or {},
            lhs=lhs_c.real,
            rhs=rhs_c.real,
            lhs_imag=lhs_c.imag,
            rhs_imag=rhs_c.imag,
            residual=residual,
            rel_residual=residual / max(abs(rhs_c), 1e-300),
            lhs_error_estimate=lhs_error_estimate,
        )


# Sequences and functions
class DecayCertificate(BaseModel):
    """
    Witness of the summability condition on a coefficient sequence.

    States |a_n| <= bound * exp(-delta * n); for finite data the bound is
    read off the values.
    """
    model_config = ConfigDict(frozen=True)

    delta: float = Field(default=0.0, ge=0, lt=HALF_PI)
    bound: float = Field(default=1.0, gt=0)

    @classmethod
    def from_values(cls, values: list[float], delta: float = 0.0) -> "DecayCertificate":
        if not 0 <= delta < HALF_PI:
            raise ValueError(f"delta must lie in [0, pi/2), got {delta}")
        bound = max((abs(a) * math.exp(delta * n) for n, a in enumerate(values)), default=0.0)
        return cls(delta=delta, bound=max(bound, np.finfo(float).tiny))


class CoefficientSequence(BaseModel):
    """Coefficients a_0..a_N with a decay certificate; a_n = 0 beyond N unless ``term`` extends it."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: list[float] = Field(default_factory=list)
    decay: DecayCertificate = Field(default_factory=DecayCertificate)
    term: Optional[Callable[[int], float]] = Field(default=None, exclude=True)

    @field_validator("values")
    @classmethod
    def _finite_values(cls, values: list[float]) -> list[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("coefficients must be finite")
        return values

    @classmethod
    def from_values(cls, values: list[float], delta: float = 0.0) -> "CoefficientSequence":
        values = [float(v) for v in values]
        return cls(values=values, decay=DecayCertificate.from_values(values, delta))

    @classmethod
    def unit(cls, n: int, length: Optional[int] = None) -> "CoefficientSequence":
        """The sequence with a single 1 at index n."""
        values = [0.0] * max(length or 0, n + 1)
        values[n] = 1.0
        return cls.from_values(values)

    @property
    def order(self) -> int:
        """Index N of the last stored coefficient (-1 for an empty sequence)."""
        return len(self.values) - 1

    def coefficient(self, n: int) -> float:
        if n < len(self.values):
            return self.values[n]
        if self.term is not None:
            return float(self.term(n))
        return 0.0

    def extended(self, n_max: int) -> np.ndarray:
        """Coefficients a_0..a_{n_max} as an array (zeros or ``term`` values past N)."""
        return np.array([self.coefficient(n) for n in range(n_max + 1)], dtype=float)

    def __add__(self, other: "CoefficientSequence") -> "CoefficientSequence":
        n_max = max(self.order, other.order)
        return CoefficientSequence.from_values(list(self.extended(n_max) + other.extended(n_max)))


class FunctionEvaluator(BaseModel):
    """
    A function f(x) on x > 0 together with its integrability statement.

    ``gamma`` is the power of the endpoint singularity at x -> 0 (f = O(x^-gamma)),
    ``decay_rate`` the exponential rate at x -> infinity.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    evaluate: Callable[[np.ndarray], Any]
    gamma: float = Field(default=0.0, ge=0, lt=1)
    decay_rate: float = Field(default=1.0, gt=0)
    label: str = "f"

    def __call__(self, x: Any) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.evaluate(xs), dtype=float), xs.shape).copy()


class PeriodicProfile(BaseModel):
    """
    A 2pi-periodic Lipschitz profile psi on [-pi, pi] with its weighting flavor.

    The Lipschitz constant and the seam condition psi(-pi) = psi(pi) are
    spot-checked on a sample grid at construction.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    psi: Callable[[np.ndarray], Any]
    lipschitz_C: float = Field(gt=0)
    flavor: FlavorName = ProfileFlavor.COSH_HALF
    label: str = "psi"

    @model_validator(mode="after")
    def _check_lipschitz(self) -> "PeriodicProfile":
        grid = np.linspace(-math.pi, math.pi, 513)
        values = self.values(grid)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"profile {self.label} is not finite on [-pi, pi]")
        slopes = np.abs(np.diff(values)) / np.diff(grid)
        if np.max(slopes) > self.lipschitz_C * (1 + 1e-9) + 1e-9:
            raise ValueError(
                f"profile {self.label} violates the Lipschitz bound C={self.lipschitz_C} "
                f"(observed slope {np.max(slopes):.6g})"
            )
        if abs(values[0] - values[-1]) > 1e-10 * max(1.0, abs(values[0])):
            raise ValueError(f"profile {self.label} is not periodic: psi(-pi) != psi(pi)")
        return self

    def values(self, u: Any) -> np.ndarray:
        us = np.asarray(u, dtype=float)
        return np.broadcast_to(np.asarray(self.psi(us), dtype=float), us.shape).copy()

    def phi(self, u: Any) -> np.ndarray:
        us = np.asarray(u, dtype=float)
        weight = np.cosh(us / 2) if self.flavor == ProfileFlavor.COSH_HALF else np.sinh(us / 2)
        return self.values(us) * weight


# Reports
class TransformReport(BaseModel):
    """
    Per-coefficient or per-point results of a transform with diagnostics.

    ``amplification`` holds cosh(pi n) for coefficient entries (1 for point
    values); ``warnings`` collects precision and input warnings.
    """

    kind: str
    indices: list[float] = Field(default_factory=list)
    values: list[float] = Field(default_factory=list)
    error_estimates: list[float] = Field(default_factory=list)
    truncation: list[Optional[int]] = Field(default_factory=list)
    amplification: list[float] = Field(default_factory=list)
    converged: list[bool] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    params: dict[str, Any] = Field(default_factory=dict)

    def value(self, index: float) -> float:
        return self.values[self.indices.index(index)]

    def as_sequence(self) -> CoefficientSequence:
        return CoefficientSequence.from_values(self.values)

    def rows(self) -> list[dict[str, Any]]:
        return [
            {
                "index": index,
                "value": value,
                "error_estimate": error,
                "truncation": truncation,
                "amplification": amplification,
                "converged": converged,
            }
            for index, value, error, truncation, amplification, converged in zip(
                self.indices,
                self.values,
                self.error_estimates,
                self.truncation,
                self.amplification,
                self.converged,
            )
        ]


# CLI
CommandName = Literal["kernel", "oracle", "forward", "invert", "roundtrip", "reconstruct", "continuous", "golden"]


class RunConfig(BaseModel):
    """One CLI invocation: the command, its parameters and output options."""

    command: CommandName
    params: dict[str, Any] = Field(default_factory=dict)
    abs_tol: Optional[float] = Field(default=None, gt=0)
    rel_tol: Optional[float] = Field(default=None, gt=0)
    max_subdivisions: Optional[int] = Field(default=None, ge=1)
    output_format: Literal["json", "csv"] = "json"
    output: Optional[str] = None

    def tolerance(self) -> Tolerance:
        overrides = {
            key: value
            for key, value in (
                ("abs_tol", self.abs_tol),
                ("rel_tol", self.rel_tol),
                ("max_subdivisions", self.max_subdivisions),
            )
            if value is not None
        }
        return Tolerance(**overrides)


class CommandReport(BaseModel):
    """Top-level report body written by every command."""

    command: str
    params: dict[str, Any] = Field(default_factory=dict)
    results: list[dict[str, Any]] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    timing: dict[str, Any] = Field(default_factory=dict)


class GoldenRow(BaseModel):
    inputs: tuple[Any, ...]
    value: float
    value_imag: float = 0.0
    error_estimate: float = Field(ge=0)
    provenance: str


class GoldenTable(BaseModel):
    """Deterministic table of reference values for regression tests."""

    schema_version: str = "1"
    generation: dict[str, Any] = Field(default_factory=dict)
    rows: list[GoldenRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def _sort_rows(self) -> "GoldenTable":
        self.rows.sort(key=lambda row: tuple(str(v) if isinstance(v, str) else float(v) for v in row.inputs))
        return self


# Continuous pair
class SpectralDecay(BaseModel):
    """Decay statement |cosh(pi tau) F(tau)| <= bound * exp(-rate * tau) for tau >= 0."""
    model_config = ConfigDict(frozen=True)

    bound: float = Field(gt=0)
    rate: float = Field(default=0.0, ge=0)


class InverseEstimate(BaseModel):
    """Truncated continuous inversion: quadrature value plus the bound on the discarded tail."""
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(ge=0)
    tail_bound: float = Field(ge=0)
    tau_max: float = Field(gt=0)
    converged: bool = True

    @property
    def total_error(self) -> float:
        return self.error_estimate + self.tail_bound


class CommandOutput(BaseModel):
    """Results and warnings of one command; ``document`` replaces the report body when set."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    results: list[dict[str, Any]] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    document: Optional[BaseModel] = None

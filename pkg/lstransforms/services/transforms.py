"""
Transform Service

Discrete Lebedev-Skalskaya transforms and their inversions.

Forward series (x > 0):
- forward_re / forward_im:                      sum a_n {Re, Im} K_{alpha+in}(x)
- forward_incomplete_re / forward_incomplete_im: sum a_n {Re, Im} J(x, 1/2+in, pi)
- theorem5_reconstruct:                         sum a_n cosh(pi n) {Re, Im} K_{1/2+in}(x)

Coefficient recovery (x-integrals against a kernel family):
- coeff_*:            (4/pi^2) int K_{alpha+in} f dx
- invert_*:           (4/pi^2) cosh(pi n) int J(x, +-1/2+in, pi) f dx
- invert_incomplete_*: (4/pi^2) cosh(pi n) int K_{1/2+in} f dx
- theorem5_forward:   (4/pi^2) int J(x, 1/2+in, pi) f dx with f = forward_re(b)

Every recovery goes through ``recover_coefficients``: one vector-valued
x-integration for all requested indices, each component held to the
coefficient accuracy divided by its amplification. The constant mode of the
three cosh-weighted inversions comes out doubled and is halved, so recovered
coefficients equal the input coefficients uniformly in n.
"""

import logging
import math
from typing import Any, Literal, Optional, Sequence

import numpy as np

from lstransforms.config import settings
from lstransforms.errors import ConvergenceError, DomainError
from lstransforms.schemas import (
    CoefficientSequence,
    DecayCertificate,
    FunctionEvaluator,
    IdentityResidual,
    IntegralEstimate,
    Tolerance,
    TransformReport,
    Variant,
    VariantName,
)
from lstransforms.services.identities import kernel_singularity, laplace_series_closed
from lstransforms.services.kernels import bessel_k_real, is_half_order, kernel_values
from lstransforms.services.quadrature import BatchEstimate, integrate_half_line, integrate_half_line_batch

logger = logging.getLogger(__name__)

FOUR_OVER_PI2 = 4.0 / math.pi**2

Method = Literal["coeff", "theorem2", "theorem3", "theorem5"]
METHODS = ("coeff", "theorem2", "theorem3", "theorem5")

# Kernel accuracy used inside x-integrals; refinement stops at the roundoff floor
KERNEL_TOLERANCE = Tolerance(abs_tol=1e-20, rel_tol=1e-14)

# delta' of the series truncation rule (just below pi/2)
_TRUNCATION_DELTA = 1.5
_TRUNCATION_LIMIT = 400


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not abs(alpha) < 1:
        raise DomainError(f"alpha must satisfy |alpha| < 1, got {alpha}", alpha=alpha)
    return alpha


def _check_variant(variant: str) -> str:
    if variant not in (Variant.RE, Variant.IM):
        raise DomainError(f"variant must be 're' or 'im', got {variant!r}", variant=variant)
    return variant


def _check_points(x: Any) -> np.ndarray:
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)) or np.any(xs <= 0):
        raise DomainError("x must be positive and finite", x=np.atleast_1d(xs).tolist())
    return xs


def _check_incomplete_alpha(alpha: float, what: str = "incomplete-kernel series") -> None:
    if abs(alpha - 0.5) > 1e-15:
        raise DomainError(f"{what} is defined for alpha = 1/2 only, got alpha={alpha}", alpha=alpha)


def amplification(n: int) -> float:
    return math.cosh(math.pi * n)


def certify(values: Sequence[float], delta: float = 0.0) -> DecayCertificate:
    """Decay certificate of a finite sequence: bound = max |a_n| exp(delta n)."""
    if not 0 <= delta < math.pi / 2:
        raise DomainError(f"delta must lie in [0, pi/2), got {delta}", delta=delta)
    return DecayCertificate.from_values(list(values), delta)


def truncation_index(seq: CoefficientSequence, alpha: float, x: float, eps: float) -> int:
    """
    Number of terms a forward series needs at x.

    Finite sequences use their support. Sequences with a ``term`` generator
    stop at the smallest N whose tail bound

        bound K_alpha(x cos d') exp(-(delta + d')(N + 1)) / (1 - exp(-(delta + d')))

    is below eps, with d' just below pi/2.
    """
    if seq.term is None:
        return max(seq.order, 0)
    rate = seq.decay.delta + _TRUNCATION_DELTA
    scale = seq.decay.bound * bessel_k_real(alpha, x * math.cos(_TRUNCATION_DELTA)) / (1.0 - math.exp(-rate))
    n = max(seq.order, 0)
    while n < _TRUNCATION_LIMIT and scale * math.exp(-rate * (n + 1)) >= eps:
        n += 1
    return n


# Forward series
def _series(
    seq: CoefficientSequence,
    kind: str,
    alpha: float,
    x: Any,
    tol: Optional[Tolerance],
    weights: Optional[np.ndarray] = None,
    strict: bool = True,
):
    """Sum a_n w_n kernel_n(x); returns (values, errors, N)."""
    tol = tol or Tolerance()
    xs = _check_points(x)
    flat = np.atleast_1d(xs).ravel()
    n_max = truncation_index(seq, alpha, float(flat.min()), tol.abs_tol)
    coefficients = seq.extended(n_max)
    if weights is not None:
        coefficients = coefficients * weights[: n_max + 1]
    if kind.startswith("im") and coefficients.size and coefficients[0] != 0:
        logger.debug("a_0 = %g ignored by the Im series", coefficients[0])
        coefficients[0] = 0.0

    indices = np.flatnonzero(coefficients)
    if indices.size == 0:
        zeros = np.zeros(xs.shape)
        return (zeros if xs.ndim else 0.0), (zeros.copy() if xs.ndim else 0.0), n_max

    kernels = kernel_values(kind, alpha, indices[:, None], flat[None, :], tol, strict=strict)
    values = coefficients[indices] @ kernels.values
    errors = np.abs(coefficients[indices]) @ kernels.errors
    if xs.ndim == 0:
        return float(values[0]), float(errors[0]), n_max
    return values.reshape(xs.shape), errors.reshape(xs.shape), n_max


def forward_re(seq: CoefficientSequence, alpha: float, x: Any, tol: Optional[Tolerance] = None):
    """
    sum_n a_n Re K_{alpha+in}(x).

    Accepts a float or an array of x; returns the same shape.
    """
    return _series(seq, "re_k", _check_alpha(alpha), x, tol)[0]


def forward_im(seq: CoefficientSequence, alpha: float, x: Any, tol: Optional[Tolerance] = None):
    """sum_{n>=1} a_n Im K_{alpha+in}(x) (a_0 is ignored with a warning)."""
    if seq.coefficient(0) != 0:
        logger.warning("a_0 = %g ignored by the Im series (Im kernels vanish at n = 0)", seq.coefficient(0))
    return _series(seq, "im_k", _check_alpha(alpha), x, tol)[0]


def forward_incomplete_re(seq: CoefficientSequence, x: Any, tol: Optional[Tolerance] = None):
    """sum_n a_n Re J(x, 1/2+in, pi)."""
    return _series(seq, "re_j", 0.5, x, tol)[0]


def forward_incomplete_im(seq: CoefficientSequence, x: Any, tol: Optional[Tolerance] = None):
    """sum_{n>=1} a_n Im J(x, 1/2+in, pi)."""
    return _series(seq, "im_j", 0.5, x, tol)[0]


def theorem5_reconstruct(a: CoefficientSequence, x: Any, variant: VariantName = Variant.RE, tol: Optional[Tolerance] = None):
    """sum_n a_n cosh(pi n) {Re, Im} K_{1/2+in}(x)."""
    _check_variant(variant)
    n_max = max(a.order, 0)
    weights = np.array([amplification(n) for n in range(n_max + 1)])
    kind = "re_k" if variant == Variant.RE else "im_k"
    if a.term is not None:
        a = CoefficientSequence.from_values(list(a.extended(n_max)), a.decay.delta)
    return _series(a, kind, 0.5, x, tol, weights=weights)[0]


def forward_report(
    seq: CoefficientSequence,
    alpha: float,
    xs: Sequence[float],
    variant: VariantName = Variant.RE,
    tol: Optional[Tolerance] = None,
    incomplete: bool = False,
) -> TransformReport:
    """Forward series on a grid of x with per-point error estimates and the truncation used."""
    _check_variant(variant)
    alpha = _check_alpha(alpha)
    if incomplete:
        _check_incomplete_alpha(alpha)
    kind = ("re_" if variant == Variant.RE else "im_") + ("j" if incomplete else "k")
    points = np.asarray(list(xs), dtype=float)
    values, errors, n_max = _series(seq, kind, alpha, points, tol)

    warnings = []
    if variant == Variant.IM and seq.coefficient(0) != 0:
        warnings.append(f"a_0 = {seq.coefficient(0):g} ignored: Im kernels vanish at n = 0")
    return TransformReport(
        kind=f"forward_{kind}",
        indices=points.tolist(),
        values=np.atleast_1d(values).tolist(),
        error_estimates=np.atleast_1d(errors).tolist(),
        truncation=[n_max] * points.size,
        amplification=[1.0] * points.size,
        converged=[True] * points.size,
        warnings=warnings,
        params={"alpha": alpha, "variant": variant, "incomplete": incomplete},
    )


# Function evaluators
def laplace_kernel_function(u0: float) -> FunctionEvaluator:
    """f(x) = exp(-x cosh u0), whose transforms have closed forms."""
    rate = math.cosh(u0)
    return FunctionEvaluator(
        evaluate=lambda x: np.exp(-x * rate),
        gamma=0.0,
        decay_rate=rate,
        label=f"exp(-x cosh {u0:g})",
    )


def series_function(
    seq: CoefficientSequence,
    alpha: float = 0.5,
    variant: VariantName = Variant.RE,
    incomplete: bool = False,
    tol: Optional[Tolerance] = None,
) -> FunctionEvaluator:
    """The forward series of seq as a function of x, with its integrability statement."""
    _check_variant(variant)
    alpha = _check_alpha(alpha)
    if incomplete:
        _check_incomplete_alpha(alpha)
    kind = ("re_" if variant == Variant.RE else "im_") + ("j" if incomplete else "k")
    tol = tol or KERNEL_TOLERANCE
    return FunctionEvaluator(
        evaluate=lambda x: _series(seq, kind, alpha, x, tol, strict=False)[0],
        gamma=0.0 if incomplete else kernel_singularity(alpha),
        decay_rate=1.0,
        label=f"{kind} series",
    )


def zero_function() -> FunctionEvaluator:
    return FunctionEvaluator(evaluate=lambda x: np.zeros_like(x), label="0")


# Coefficient recovery
def kernel_moments(
    f: FunctionEvaluator,
    kind: str,
    alpha: float,
    orders: np.ndarray,
    tol: Optional[Tolerance] = None,
    weights: Optional[np.ndarray] = None,
    context: str = "kernel moment",
) -> BatchEstimate:
    """
    int_0^inf kernel_{alpha+i tau}(x) f(x) dx for every tau in ``orders``.

    One vector-valued half-line integration; component b is held to
    abs_tol / weights[b]. The singular power at x -> 0 adds the kernel's to
    the one f declares.

    Raises:
        ConvergenceError: the x-integration exhausted its subdivision budget
    """
    tol = tol or Tolerance()
    inner = KERNEL_TOLERANCE.model_copy(update={"max_subdivisions": tol.max_subdivisions})
    orders = np.asarray(orders, dtype=float)

    def integrand(x: np.ndarray) -> np.ndarray:
        kernels = kernel_values(kind, alpha, orders[:, None], x[None, :], inner, strict=False)
        return kernels.values * f(x)[None, :]

    gamma = f.gamma + (kernel_singularity(alpha) if kind.endswith("k") else 0.0)
    estimate = integrate_half_line_batch(integrand, f.decay_rate + 1.0, gamma, tol, weights=weights)
    if not estimate.all_converged and not estimate.roundoff_limited:
        scale = np.abs(weights) if weights is not None else np.ones(orders.size)
        worst = int(np.argmax(estimate.errors * scale))
        raise ConvergenceError(
            f"{context} did not converge",
            kind=kind,
            alpha=alpha,
            order=float(orders[worst]),
            error_estimate=float(estimate.errors[worst] * scale[worst]),
        )
    return estimate


def _method_setup(method: str, variant: str, alpha: float) -> tuple[str, float, bool, bool]:
    """Kernel kind, kernel alpha, cosh weighting and n = 0 halving of a recovery method."""
    prefix = "re_" if variant == Variant.RE else "im_"
    if method == "coeff":
        return prefix + "k", alpha, False, False
    if method == "theorem5":
        _check_incomplete_alpha(alpha, "theorem5 recovery")
        return prefix + "j", 0.5, False, True
    if method == "theorem3":
        _check_incomplete_alpha(alpha, "theorem3 inversion")
        return prefix + "k", 0.5, True, True
    if not is_half_order(alpha):
        raise DomainError(
            f"{method} inversion holds for alpha = +-1/2 only, got alpha={alpha}",
            alpha=alpha,
        )
    return prefix + "j", alpha, True, True


def recover_coefficients(
    f: FunctionEvaluator,
    method: Method = "theorem2",
    variant: VariantName = Variant.RE,
    n_max: int = 8,
    alpha: float = 0.5,
    tol: Optional[Tolerance] = None,
    indices: Optional[Sequence[int]] = None,
    raw: bool = False,
) -> TransformReport:
    """
    Recover coefficients a_0..a_{n_max} of f in one x-integration.

    Args:
        f: function with its integrability statement
        method: "coeff", "theorem2", "theorem3" or "theorem5"
        variant: "re" or "im"
        n_max: largest index when ``indices`` is not given
        alpha: real part of the kernel order
        tol: abs_tol is the target accuracy of each coefficient
        indices: explicit index list (overrides n_max)
        raw: keep the doubled constant mode of the cosh-weighted inversions

    Returns:
        TransformReport with one entry per index; Im variants report a_0 = 0
    """
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}", method=method)
    _check_variant(variant)
    alpha = _check_alpha(alpha)
    tol = tol or Tolerance()
    kind, kernel_alpha, weighted, halve = _method_setup(method, variant, alpha)

    wanted = list(range(n_max + 1)) if indices is None else [int(n) for n in indices]
    if any(n < 0 for n in wanted):
        raise DomainError("coefficient indices must be non-negative", indices=wanted)
    computed = [n for n in wanted if not (variant == Variant.IM and n == 0)]

    factors = np.array([
        FOUR_OVER_PI2 * (amplification(n) if weighted else 1.0) * (0.5 if (halve and not raw and n == 0) else 1.0)
        for n in computed
    ])
    orders = np.array(computed, dtype=float)

    values = np.zeros(len(computed))
    errors = np.zeros(len(computed))
    converged = np.ones(len(computed), dtype=bool)
    roundoff_limited = False
    if computed:
        estimate = kernel_moments(f, kind, kernel_alpha, orders, tol, weights=factors, context=f"{method} recovery")
        values = estimate.values * factors
        errors = estimate.errors * factors
        converged = estimate.converged
        roundoff_limited = estimate.roundoff_limited

    by_index = {n: (float(v), float(e), bool(c)) for n, v, e, c in zip(computed, values, errors, converged)}
    report = TransformReport(kind=f"{method}_{variant}", params={"method": method, "variant": variant, "alpha": alpha, "raw": raw})
    for n in wanted:
        value, error, ok = by_index.get(n, (0.0, 0.0, True))
        report.indices.append(n)
        report.values.append(value)
        report.error_estimates.append(error)
        report.truncation.append(None)
        report.amplification.append(amplification(n) if weighted else 1.0)
        report.converged.append(ok)
    report.warnings.extend(_precision_warnings(report, variant, roundoff_limited, tol))
    for message in report.warnings:
        logger.warning(message)
    return report


def _precision_warnings(report: TransformReport, variant: str, roundoff_limited: bool, tol: Tolerance) -> list[str]:
    warnings = []
    if variant == Variant.IM and 0 in report.indices:
        warnings.append("a_0 is fixed to 0 for Im series (Im kernels vanish at n = 0)")
    for n, error, ok in zip(report.indices, report.error_estimates, report.converged):
        n = int(n)
        if variant == Variant.IM and n == 0:
            continue
        floor = amplification(n) * tol.abs_tol
        if floor > settings.coefficient_tol:
            warnings.append(
                f"n={n}: cosh(pi n) * abs_tol = {floor:.3e} exceeds the coefficient tolerance {settings.coefficient_tol:g}"
            )
        if n > settings.max_n:
            warnings.append(
                f"n={n} exceeds N_max={settings.max_n}: cosh(pi n) = {amplification(n):.3e} "
                "amplifies quadrature error beyond double precision"
            )
        if error > settings.coefficient_tol:
            warnings.append(
                f"n={n}: amplified error estimate {error:.3e} exceeds the coefficient tolerance {settings.coefficient_tol:g}"
            )
        if not ok and roundoff_limited:
            warnings.append(f"n={n}: quadrature stopped at the roundoff floor above its target")
    return warnings


def _single(
    f: FunctionEvaluator,
    method: Method,
    variant: VariantName,
    n: int,
    alpha: float,
    tol: Optional[Tolerance],
) -> float:
    if n < 0:
        raise DomainError(f"coefficient index must be non-negative, got {n}", n=n)
    if variant == Variant.IM and n == 0 and method != "coeff":
        raise DomainError("n = 0 is excluded for Im inversions (the Im series sets a_0 = 0)", n=n)
    return recover_coefficients(f, method, variant, alpha=alpha, tol=tol, indices=[n]).value(n)


def coeff_re(f: FunctionEvaluator, alpha: float, n: int, tol: Optional[Tolerance] = None) -> float:
    """(4/pi^2) int_0^inf Re K_{alpha+in}(x) f(x) dx."""
    return _single(f, "coeff", Variant.RE, n, alpha, tol)


def coeff_im(f: FunctionEvaluator, alpha: float, n: int, tol: Optional[Tolerance] = None) -> float:
    """(4/pi^2) int_0^inf Im K_{alpha+in}(x) f(x) dx (0 at n = 0)."""
    return _single(f, "coeff", Variant.IM, n, alpha, tol)


def invert_re(f: FunctionEvaluator, n: int, tol: Optional[Tolerance] = None, alpha: float = 0.5) -> float:
    """
    a_n of f = forward_re(a, +-1/2, .), from the incomplete kernel Re J(x, 1/2+in, pi).

    The n = 0 value is halved.
    """
    return _single(f, "theorem2", Variant.RE, n, alpha, tol)


def invert_im(f: FunctionEvaluator, n: int, tol: Optional[Tolerance] = None, alpha: float = 0.5) -> float:
    """
    a_n of f = forward_im(a, +-1/2, .) for n >= 1.

    Raises:
        DomainError: n = 0
    """
    return _single(f, "theorem2", Variant.IM, n, alpha, tol)


def invert_incomplete_re(f: FunctionEvaluator, n: int, tol: Optional[Tolerance] = None, alpha: float = 0.5) -> float:
    """a_n of f = forward_incomplete_re(a, .); the n = 0 value is halved."""
    return _single(f, "theorem3", Variant.RE, n, alpha, tol)


def invert_incomplete_im(f: FunctionEvaluator, n: int, tol: Optional[Tolerance] = None, alpha: float = 0.5) -> float:
    """a_n of f = forward_incomplete_im(a, .) for n >= 1."""
    return _single(f, "theorem3", Variant.IM, n, alpha, tol)


def theorem5_coefficients(
    b: CoefficientSequence,
    n_max: int,
    variant: VariantName = Variant.RE,
    tol: Optional[Tolerance] = None,
) -> TransformReport:
    """a_n = b_n / cosh(pi n) computed from f = forward(b, 1/2, .) through the incomplete kernel."""
    return recover_coefficients(series_function(b, 0.5, variant), "theorem5", variant, n_max, 0.5, tol)


def theorem5_forward(b: CoefficientSequence, n: int, tol: Optional[Tolerance] = None, variant: VariantName = Variant.RE) -> float:
    """
    a_n = (4/pi^2) int_0^inf {Re, Im} J(x, 1/2+in, pi) f(x) dx with f = forward(b, 1/2, .).

    The n = 0 value is halved.
    """
    return _single(series_function(b, 0.5, variant), "theorem5", variant, n, 0.5, tol)


def biorthogonality_matrix(
    variant: VariantName = Variant.RE,
    n_max: int = 8,
    tol: Optional[Tolerance] = None,
    raw: bool = False,
) -> np.ndarray:
    """
    G[n, m] = (4/pi^2) cosh(pi n) int_0^inf J(x, 1/2+in, pi) K_{1/2+im}(x) dx.

    With raw=False the constant mode is halved, so G is the identity on
    {0..n_max}^2 (Re) or {1..n_max}^2 (Im, row and column 0 are zero).
    """
    _check_variant(variant)
    matrix = np.zeros((n_max + 1, n_max + 1))
    for m in range(n_max + 1):
        if variant == Variant.IM and m == 0:
            continue
        f = series_function(CoefficientSequence.unit(m), 0.5, variant)
        report = recover_coefficients(f, "theorem2", variant, n_max, 0.5, tol, raw=raw)
        matrix[:, m] = report.values
    return matrix


# Composition with the Laplace kernel
def laplace_composition(
    seq: CoefficientSequence,
    alpha: float,
    u: float,
    variant: VariantName = Variant.RE,
    tol: Optional[Tolerance] = None,
) -> IntegralEstimate:
    """int_0^inf exp(-x cosh u) forward(seq, alpha, x) dx."""
    _check_variant(variant)
    alpha = _check_alpha(alpha)
    kind = "re_k" if variant == Variant.RE else "im_k"
    damping = math.cosh(u)

    def integrand(x: np.ndarray) -> np.ndarray:
        return np.exp(-x * damping) * _series(seq, kind, alpha, x, KERNEL_TOLERANCE, strict=False)[0]

    estimate = integrate_half_line(integrand, damping + 1.0, kernel_singularity(alpha), tol)
    if not estimate.converged and not estimate.roundoff_limited:
        raise ConvergenceError("Laplace composition did not converge", alpha=alpha, u=u, estimate=estimate.model_dump())
    return estimate


def check_theorem1(
    seq: CoefficientSequence,
    alpha: float,
    u: float,
    variant: VariantName = Variant.RE,
    tol: Optional[Tolerance] = None,
) -> IdentityResidual:
    """Laplace composition of a forward series against the term-by-term closed form."""
    estimate = laplace_composition(seq, alpha, u, variant, tol)
    return IdentityResidual.compare(
        f"theorem1_{variant}",
        estimate.value,
        laplace_series_closed(seq, alpha, u, variant),
        params={"alpha": alpha, "u": u, "values": list(seq.values)},
        lhs_error_estimate=estimate.error_estimate,
    )

"""
Kernel Service

Integral representations of the Macdonald function of real order, the
Lebedev-Skalskaya kernels and the incomplete modified Bessel functions:

- bessel_k_real:   int_0^inf exp(-x cosh u) cosh(alpha u) du
- re_k / im_k:     int_0^inf exp(-x cosh u) {cosh(alpha u) cos(tau u), sinh(alpha u) sin(tau u)} du
- re_j / im_j:     the same integrands over [0, pi]
- kernel_bound:    exp(-delta |tau|) K_alpha(x cos delta)

All evaluators go through ``kernel_values``, which batches a grid of (tau, x)
pairs into vector-valued integrations. Negative tau is folded by parity
(Re kernels even in tau, Im kernels odd).
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Literal, Optional

import numpy as np

from lstransforms.errors import ConvergenceError, DomainError
from lstransforms.schemas import HALF_PI, IntegralEstimate, KernelPoint, Tolerance
from lstransforms.services.quadrature import integrate_finite_batch

logger = logging.getLogger(__name__)

KernelKind = Literal["re_k", "im_k", "re_j", "im_j"]
KERNEL_KINDS = ("re_k", "im_k", "re_j", "im_j")

# Components integrated together on shared panels
_CHUNK = 32


@dataclass(frozen=True)
class KernelValues:
    """Kernel values on a grid with the quadrature diagnostics of the batch."""

    values: np.ndarray
    errors: np.ndarray
    converged: bool
    roundoff_limited: bool
    evaluations: int = 0


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or not abs(alpha) < 1:
        raise DomainError(f"alpha must satisfy |alpha| < 1, got {alpha}", alpha=alpha)
    return alpha


def _check_arguments(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        bad = x[~(np.isfinite(x) & (x > 0))]
        raise DomainError(f"kernel argument must be positive, got x={float(bad[0])}", x=float(bad[0]))


def truncation_point(alpha: float, x: float, abs_tol: float) -> float:
    """
    Upper limit of the u-integral for kernels at argument x.

    Smallest u with x cosh(u) - |alpha| u >= x + ln(10/abs_tol), found by the
    fixed-point iteration u <- acosh((x + ln(10/abs_tol) + |alpha| u) / x).
    The integrand is bounded by exp(-x cosh u + |alpha| u), so the discarded
    tail stays below abs_tol/10.
    """
    level = x + max(math.log(10.0 / abs_tol), 1.0)
    slope = abs(alpha)
    u = math.acosh(level / x)
    for _ in range(200):
        following = math.acosh((level + slope * u) / x)
        if abs(following - u) <= 1e-12 * max(1.0, u):
            return following
        u = following
    return u


def _integrand(kind: str, alpha: float, taus: np.ndarray, xs: np.ndarray):
    """
    Integrand of a chunk of (tau, x) pairs.

    exp(-x cosh u) is computed once per distinct x and the trigonometric
    factor once per distinct tau; the pairs only multiply the two.
    """
    even = kind in ("re_k", "re_j")
    unique_x, x_index = np.unique(xs, return_inverse=True)
    unique_tau, tau_index = np.unique(taus, return_inverse=True)

    def integrand(u: np.ndarray) -> np.ndarray:
        damping = np.exp(-np.outer(unique_x, np.cosh(u)))
        phase = np.outer(unique_tau, u)
        if even:
            factor = np.cosh(alpha * u) * np.cos(phase)
        else:
            factor = np.sinh(alpha * u) * np.sin(phase)
        return damping[x_index] * factor[tau_index]

    return integrand


def _chunks(xs: np.ndarray) -> list[np.ndarray]:
    """Group pair indices so that every chunk holds at most _CHUNK distinct arguments."""
    _, rank = np.unique(xs, return_inverse=True)
    group = rank // _CHUNK
    order = np.argsort(group, kind="stable")
    bounds = np.flatnonzero(np.diff(group[order])) + 1
    return np.split(order, bounds)


def kernel_values(
    kind: KernelKind,
    alpha: float,
    tau: Any,
    x: Any,
    tol: Optional[Tolerance] = None,
    strict: bool = True,
) -> KernelValues:
    """
    Evaluate one kernel family on a broadcast grid of tau and x.

    Args:
        kind: "re_k", "im_k", "re_j" or "im_j"
        alpha: real part of the order, |alpha| < 1
        tau: imaginary parts (array-like, broadcast against x)
        x: arguments, all > 0
        tol: quadrature tolerance per value
        strict: raise ConvergenceError when a chunk exhausts its subdivision
            budget (roundoff-limited chunks never raise); otherwise log one
            warning for the call and report ``converged=False``

    Returns:
        KernelValues with arrays of the broadcast shape
    """
    if kind not in KERNEL_KINDS:
        raise DomainError(f"unknown kernel kind {kind!r}", kind=kind)
    alpha = _check_alpha(alpha)
    tol = tol or Tolerance()
    taus, xs = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(x, dtype=float))
    shape = taus.shape
    taus, xs = taus.ravel(), xs.ravel()
    _check_arguments(xs)
    if not np.all(np.isfinite(taus)):
        raise DomainError("tau must be finite")

    sign = np.ones_like(taus)
    if kind in ("im_k", "im_j"):
        sign = np.where(taus < 0, -1.0, 1.0)
    taus = np.abs(taus)
    incomplete = kind in ("re_j", "im_j")

    values = np.zeros(taus.size)
    errors = np.zeros(taus.size)
    roundoff_limited = False
    exhausted = 0
    evaluations = 0

    for chunk in (_chunks(xs) if xs.size else []):
        upper = math.pi if incomplete else truncation_point(alpha, float(xs[chunk].min()), tol.abs_tol)
        estimate = integrate_finite_batch(
            _integrand(kind, alpha, taus[chunk], xs[chunk]),
            (0.0, upper),
            tol,
            frequency=max(float(taus[chunk].max()), 1.0),
        )
        values[chunk] = estimate.values
        errors[chunk] = estimate.errors
        evaluations += estimate.evaluations
        if estimate.all_converged:
            continue
        if estimate.roundoff_limited:
            roundoff_limited = True
            continue
        if strict:
            worst = chunk[int(np.argmax(estimate.errors))]
            raise ConvergenceError(
                f"{kind} did not converge within {tol.max_subdivisions} subdivisions",
                kind=kind,
                alpha=alpha,
                tau=float(taus[worst]),
                x=float(xs[worst]),
                error_estimate=float(errors[worst]),
            )
        exhausted += 1

    if exhausted:
        logger.warning("%s: subdivision budget exhausted on %d chunk(s) of arguments", kind, exhausted)
    return KernelValues(
        values=(values * sign).reshape(shape),
        errors=errors.reshape(shape),
        converged=exhausted == 0,
        roundoff_limited=roundoff_limited,
        evaluations=evaluations,
    )


def kernel_estimate(kind: KernelKind, point: KernelPoint, tol: Optional[Tolerance] = None) -> IntegralEstimate:
    """Single kernel value with its quadrature diagnostics."""
    tol = tol or Tolerance()
    result = kernel_values(kind, point.alpha, point.tau, point.x, tol)
    value = float(result.values)
    error = float(result.errors)
    return IntegralEstimate(
        value=value,
        error_estimate=error,
        evaluations=result.evaluations,
        converged=error <= tol.target(value),
        roundoff_limited=result.roundoff_limited,
    )


def re_k(point: KernelPoint, tol: Optional[Tolerance] = None) -> float:
    """Re K_{alpha+i tau}(x)."""
    return kernel_estimate("re_k", point, tol).value


def im_k(point: KernelPoint, tol: Optional[Tolerance] = None) -> float:
    """Im K_{alpha+i tau}(x)."""
    return kernel_estimate("im_k", point, tol).value


def re_j_incomplete(point: KernelPoint, tol: Optional[Tolerance] = None) -> float:
    """Re J(x, alpha+i tau, pi)."""
    return kernel_estimate("re_j", point, tol).value


def im_j_incomplete(point: KernelPoint, tol: Optional[Tolerance] = None) -> float:
    """Im J(x, alpha+i tau, pi)."""
    return kernel_estimate("im_j", point, tol).value


def is_half_order(alpha: float) -> bool:
    return abs(abs(alpha) - 0.5) < 1e-15


def bessel_k_half(x: Any) -> np.ndarray:
    """K_{1/2}(x) = sqrt(pi/(2x)) exp(-x)."""
    xs = np.asarray(x, dtype=float)
    return np.sqrt(math.pi / (2.0 * xs)) * np.exp(-xs)


def bessel_k_values(alpha: float, x: Any, tol: Optional[Tolerance] = None) -> np.ndarray:
    """K_alpha on an array of arguments; closed form for alpha = +-1/2."""
    alpha = _check_alpha(alpha)
    xs = np.asarray(x, dtype=float)
    _check_arguments(xs.ravel())
    if is_half_order(alpha):
        return bessel_k_half(xs)
    return kernel_values("re_k", alpha, 0.0, xs, tol).values


def bessel_k_real(alpha: float, x: float, tol: Optional[Tolerance] = None) -> float:
    """
    Modified Bessel function of the second kind K_alpha(x), |alpha| < 1.

    Example:
        >>> bessel_k_real(0.5, 1.0)
        0.4610685044478945
    """
    return float(bessel_k_values(alpha, x, tol))


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0 <= delta < HALF_PI:
        raise DomainError(f"delta must lie in [0, pi/2), got {delta}", delta=delta)
    return delta


def kernel_bound_values(alpha: float, tau: Any, x: Any, delta: float, tol: Optional[Tolerance] = None) -> np.ndarray:
    """exp(-delta |tau|) K_alpha(x cos delta) on a broadcast grid."""
    delta = _check_delta(delta)
    taus, xs = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(x, dtype=float))
    return np.exp(-delta * np.abs(taus)) * bessel_k_values(alpha, xs * math.cos(delta), tol)


def kernel_bound(point: KernelPoint, delta: float, tol: Optional[Tolerance] = None) -> float:
    """
    Upper bound of |Re K| and |Im K| at a point.

    Raises:
        DomainError: delta outside [0, pi/2)
    """
    return float(kernel_bound_values(point.alpha, point.tau, point.x, delta, tol))

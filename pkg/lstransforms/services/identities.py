"""
Identity Oracles

Closed forms of the Laplace compositions

    int_0^inf exp(-x cosh u) K_{alpha+i tau}(x) dx = pi sinh(nu u) / (sinh(u) sin(nu pi)),  nu = alpha + i tau

together with their real and imaginary parts for an integer index n, the
alpha = 1/2 specializations, and ``check_identity``, which compares each
closed form with the quadrature left-hand side.

All closed forms accept scalar or array u and apply the analytic u = 0 limit
elementwise.
"""

import logging
import math
from typing import Any, Literal, Optional, Union

import numpy as np

from lstransforms.errors import ConvergenceError, DomainError, SingularIdentityError
from lstransforms.schemas import CoefficientSequence, IdentityResidual, Tolerance, Variant, VariantName
from lstransforms.services.kernels import kernel_values
from lstransforms.services.quadrature import integrate_half_line_batch

logger = logging.getLogger(__name__)

IdentityName = Literal["eq113", "eq114", "eq115", "eq27", "eq28"]
IDENTITIES = ("eq113", "eq114", "eq115", "eq27", "eq28")

ArrayOrFloat = Union[float, np.ndarray]


def _as_array(u: Any) -> tuple[np.ndarray, bool]:
    us = np.asarray(u, dtype=float)
    return us, us.ndim == 0


def _finish(values: np.ndarray, scalar: bool):
    if scalar:
        return values.item()
    return values


def _check_alpha(alpha: float) -> None:
    if not abs(alpha) < 1:
        raise DomainError(f"alpha must satisfy |alpha| < 1, got {alpha}", alpha=alpha)


def laplace_k_closed(alpha: float, tau: float, u: Any) -> Union[complex, np.ndarray]:
    """
    pi sinh(nu u) / (sinh(u) sin(nu pi)) with nu = alpha + i tau.

    At u = 0 returns pi nu / sin(nu pi); for alpha = tau = 0 the ratio reduces
    to u / sinh(u) (limit 1).
    """
    _check_alpha(alpha)
    us, scalar = _as_array(u)
    nonzero = us != 0
    safe = np.where(nonzero, us, 1.0)
    if alpha == 0 and tau == 0:
        values = np.where(nonzero, safe / np.sinh(safe), 1.0).astype(complex)
        return _finish(values, scalar)
    nu = complex(alpha, tau)
    denominator = np.sin(nu * math.pi)
    limit = math.pi * nu / denominator
    values = np.where(nonzero, math.pi * np.sinh(nu * safe) / (np.sinh(safe) * denominator), limit)
    return _finish(values, scalar)


def _denominator(alpha: float, n: float) -> float:
    _check_alpha(alpha)
    value = math.sinh(math.pi * n) ** 2 + math.sin(math.pi * alpha) ** 2
    if value == 0:
        raise SingularIdentityError(
            "closed form is singular at alpha = 0, n = 0 (sinh^2(pi n) + sin^2(pi alpha) = 0)",
            alpha=alpha,
            n=n,
        )
    return value


def laplace_re_k_closed(alpha: float, n: float, u: Any) -> ArrayOrFloat:
    """
    Closed form of int_0^inf exp(-x cosh u) Re K_{alpha+in}(x) dx.

    Raises:
        SingularIdentityError: alpha = 0 together with n = 0
    """
    denominator = _denominator(alpha, n)
    us, scalar = _as_array(u)
    s_a, c_a = math.sin(alpha * math.pi), math.cos(alpha * math.pi)
    ch_n, sh_n = math.cosh(math.pi * n), math.sinh(math.pi * n)
    nonzero = us != 0
    safe = np.where(nonzero, us, 1.0)
    numerator = (
        np.sinh(alpha * safe) * s_a * ch_n * np.cos(n * safe)
        + np.cosh(alpha * safe) * c_a * sh_n * np.sin(n * safe)
    )
    limit = math.pi * (alpha * s_a * ch_n + n * c_a * sh_n) / denominator
    values = np.where(nonzero, math.pi * numerator / (np.sinh(safe) * denominator), limit)
    return _finish(values, scalar)


def laplace_im_k_closed(alpha: float, n: float, u: Any) -> ArrayOrFloat:
    """
    Closed form of int_0^inf exp(-x cosh u) Im K_{alpha+in}(x) dx.

    Raises:
        SingularIdentityError: alpha = 0 together with n = 0
    """
    denominator = _denominator(alpha, n)
    us, scalar = _as_array(u)
    s_a, c_a = math.sin(alpha * math.pi), math.cos(alpha * math.pi)
    ch_n, sh_n = math.cosh(math.pi * n), math.sinh(math.pi * n)
    nonzero = us != 0
    safe = np.where(nonzero, us, 1.0)
    numerator = (
        np.cosh(alpha * safe) * s_a * ch_n * np.sin(n * safe)
        - np.sinh(alpha * safe) * c_a * sh_n * np.cos(n * safe)
    )
    limit = math.pi * (n * s_a * ch_n - alpha * c_a * sh_n) / denominator
    values = np.where(nonzero, math.pi * numerator / (np.sinh(safe) * denominator), limit)
    return _finish(values, scalar)


def laplace_re_half(n: float, u: Any, scaled: bool = False) -> ArrayOrFloat:
    """
    pi cos(nu) / (2 cosh(u/2) cosh(pi n)): the Re closed form at alpha = 1/2.

    With scaled=True the factor 1/cosh(pi n) is left out.
    """
    us, scalar = _as_array(u)
    amplitude = 1.0 if scaled else math.cosh(math.pi * n)
    values = math.pi * np.cos(n * us) / (2.0 * np.cosh(us / 2) * amplitude)
    return _finish(values, scalar)


def laplace_im_half(n: float, u: Any, scaled: bool = False) -> ArrayOrFloat:
    """pi sin(nu) / (2 sinh(u/2) cosh(pi n)): the Im closed form at alpha = 1/2 (limit pi n / cosh(pi n) at u = 0)."""
    us, scalar = _as_array(u)
    amplitude = 1.0 if scaled else math.cosh(math.pi * n)
    nonzero = us != 0
    safe = np.where(nonzero, us, 1.0)
    values = np.where(
        nonzero,
        math.pi * np.sin(n * safe) / (2.0 * np.sinh(safe / 2) * amplitude),
        math.pi * n / amplitude,
    )
    return _finish(values, scalar)


def laplace_series_closed(seq: CoefficientSequence, alpha: float, u: Any, variant: VariantName = Variant.RE) -> ArrayOrFloat:
    """
    Sum of a_n times the closed-form Laplace composition of each kernel.

    The Im variant drops a_0 (Im K_alpha vanishes at n = 0).
    """
    us, scalar = _as_array(u)
    total = np.zeros(us.shape)
    for n, a_n in enumerate(seq.values):
        if a_n == 0 or (variant == Variant.IM and n == 0):
            continue
        term = np.asarray(laplace_k_closed(alpha, n, us))
        total = total + a_n * (term.real if variant == Variant.RE else term.imag)
    return _finish(total, scalar)


def kernel_singularity(alpha: float) -> float:
    """Declared power of the x -> 0 singularity of K_{alpha+i tau}(x) (log for alpha = 0)."""
    return max(abs(alpha), 0.25)


def laplace_lhs(
    kinds: tuple[str, ...],
    alpha: float,
    tau: float,
    u: float,
    tol: Optional[Tolerance] = None,
):
    """
    int_0^inf exp(-x cosh u) K(x) dx for each kernel kind, on shared panels.

    Returns the BatchEstimate of the x-integration (one component per kind).
    """
    tol = tol or Tolerance()
    inner = tol.with_abs_tol(tol.abs_tol * 1e-3)
    damping_rate = math.cosh(u)

    def integrand(x: np.ndarray) -> np.ndarray:
        damping = np.exp(-x * damping_rate)
        return np.stack([kernel_values(kind, alpha, tau, x, inner, strict=False).values * damping for kind in kinds])

    estimate = integrate_half_line_batch(integrand, damping_rate + 1.0, kernel_singularity(alpha), tol)
    if not estimate.all_converged and not estimate.roundoff_limited:
        raise ConvergenceError(
            "Laplace composition did not converge",
            alpha=alpha,
            tau=tau,
            u=u,
            error_estimate=float(np.max(estimate.errors)),
        )
    return estimate


def check_identity(which: IdentityName, params: dict[str, Any], tol: Optional[Tolerance] = None) -> IdentityResidual:
    """
    Compare the quadrature left-hand side of an identity with its closed form.

    Args:
        which: eq113 (complex order, params alpha/tau/u), eq114 / eq115 (Re / Im
            with integer index, params alpha/n/u), eq27 / eq28 (alpha = 1/2
            forms, params n/u)
        params: parameter dictionary
        tol: x-quadrature tolerance

    Returns:
        IdentityResidual with lhs, rhs and residuals
    """
    if which not in IDENTITIES:
        raise DomainError(f"unknown identity {which!r}; expected one of {', '.join(IDENTITIES)}", identity=which)
    u = float(params.get("u", 0.0))
    if which in ("eq27", "eq28"):
        alpha = 0.5
    else:
        alpha = float(params.get("alpha", 0.5))
    _check_alpha(alpha)

    if which == "eq113":
        tau = float(params.get("tau", 0.0))
        rhs = complex(laplace_k_closed(alpha, tau, u))
        estimate = laplace_lhs(("re_k", "im_k"), alpha, tau, u, tol)
        lhs = complex(estimate.values[0], estimate.values[1])
        used = {"alpha": alpha, "tau": tau, "u": u}
    else:
        n = float(params.get("n", 0))
        if which == "eq114":
            rhs = laplace_re_k_closed(alpha, n, u)
        elif which == "eq115":
            rhs = laplace_im_k_closed(alpha, n, u)
        elif which == "eq27":
            rhs = laplace_re_half(n, u)
        else:
            rhs = laplace_im_half(n, u)
        kind = "re_k" if which in ("eq114", "eq27") else "im_k"
        estimate = laplace_lhs((kind,), alpha, n, u, tol)
        lhs = float(estimate.values[0])
        used = {"alpha": alpha, "n": n, "u": u}

    residual = IdentityResidual.compare(
        which,
        lhs,
        rhs,
        params=used,
        lhs_error_estimate=float(np.max(estimate.errors)),
    )
    logger.debug("identity %s %s: residual %.3e", which, used, residual.residual)
    return residual

"""
Profile Service

Functions represented by a 2pi-periodic Lipschitz profile,

    f(x) = int_{-pi}^{pi} exp(-x cosh u) phi(u) du,   phi = psi cosh(u/2) or psi sinh(u/2),

their coefficients and the reconstruction by partial sums of the incomplete
kernel series:

- cosh_half:  f = (a_0/2) Re J_0 + sum_{n>=1} cosh(pi n) Re J(x, 1/2+in, pi) a_n
- sinh_half:  f = sum_{n>=1} cosh(pi n) Im J(x, 1/2+in, pi) a_n

Coefficients are computed through the Laplace composition of the kernels,
a_n = (4/pi^2) int phi(u) L_n(u) du, which is a smooth u-integral and avoids
the cosh(pi n) loss of the x-integral. Only b_n = cosh(pi n) a_n (the Fourier
coefficient of psi) is integrated; a_n is formed by a single division.
"""

import logging
import math
from typing import Any, Optional, Union

import numpy as np

from lstransforms.config import settings
from lstransforms.errors import DomainError
from lstransforms.schemas import CoefficientSequence, PeriodicProfile, ProfileFlavor, Tolerance, TransformReport, Variant, VariantName
from lstransforms.services.identities import laplace_im_half, laplace_re_half
from lstransforms.services.kernels import kernel_values
from lstransforms.services.quadrature import integrate_finite_batch
from lstransforms.services.transforms import FOUR_OVER_PI2, KERNEL_TOLERANCE, amplification

logger = logging.getLogger(__name__)

# Partial sums closer than this are taken as converged
STABLE_THRESHOLD = 1e-8


# Built-in profiles
def cosine_profile(k: int = 1) -> PeriodicProfile:
    return PeriodicProfile(psi=lambda u: np.cos(k * u), lipschitz_C=max(k, 1), flavor=ProfileFlavor.COSH_HALF, label=f"cos({k}u)")


def sine_profile(k: int = 1) -> PeriodicProfile:
    return PeriodicProfile(psi=lambda u: np.sin(k * u), lipschitz_C=max(k, 1), flavor=ProfileFlavor.SINH_HALF, label=f"sin({k}u)")


def triangle_profile() -> PeriodicProfile:
    """Even triangle wave psi(u) = |u| on [-pi, pi]."""
    return PeriodicProfile(psi=np.abs, lipschitz_C=1.0, flavor=ProfileFlavor.COSH_HALF, label="|u|")


def odd_triangle_profile() -> PeriodicProfile:
    """Odd triangle wave: u on [-pi/2, pi/2], reflected to 0 at +-pi."""

    def psi(u: np.ndarray) -> np.ndarray:
        return np.where(np.abs(u) <= math.pi / 2, u, np.sign(u) * math.pi - u)

    return PeriodicProfile(psi=psi, lipschitz_C=1.0, flavor=ProfileFlavor.SINH_HALF, label="odd triangle")


BUILTIN_PROFILES = {
    "cos": cosine_profile,
    "sin": sine_profile,
    "triangle": triangle_profile,
    "odd_triangle": odd_triangle_profile,
}


def builtin_profile(name: str) -> PeriodicProfile:
    try:
        return BUILTIN_PROFILES[name]()
    except KeyError:
        raise DomainError(f"unknown profile {name!r}; expected one of {', '.join(BUILTIN_PROFILES)}", profile=name)


def profile_variant(profile: PeriodicProfile) -> VariantName:
    return Variant.RE if profile.flavor == ProfileFlavor.COSH_HALF else Variant.IM


def _check_points(x: Any) -> np.ndarray:
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)) or np.any(xs <= 0):
        raise DomainError("x must be positive and finite", x=np.atleast_1d(xs).tolist())
    return xs


def represent_from_profile(profile: PeriodicProfile, x: Any, tol: Optional[Tolerance] = None) -> Union[float, np.ndarray]:
    """int_{-pi}^{pi} exp(-x cosh u) phi(u) du for a float or an array of x."""
    tol = tol or Tolerance()
    xs = _check_points(x)
    flat = np.atleast_1d(xs).ravel()

    def integrand(u: np.ndarray) -> np.ndarray:
        return np.exp(-np.outer(flat, np.cosh(u))) * profile.phi(u)[None, :]

    estimate = integrate_finite_batch(integrand, (-math.pi, math.pi), tol, frequency=1.0, points=(0.0,))
    if xs.ndim == 0:
        return float(estimate.values[0])
    return estimate.values.reshape(xs.shape)


def profile_coefficients(profile: PeriodicProfile, n_max: int, tol: Optional[Tolerance] = None) -> TransformReport:
    """
    Coefficients a_0..a_{n_max} of the function represented by a profile.

    Re coefficients for cosh_half profiles, Im coefficients (a_0 = 0) for
    sinh_half profiles.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}", n_max=n_max)
    tol = tol or Tolerance()
    variant = profile_variant(profile)
    orders = np.arange(n_max + 1, dtype=float)
    composition = laplace_re_half if variant == Variant.RE else laplace_im_half

    def integrand(u: np.ndarray) -> np.ndarray:
        scaled = np.stack([composition(n, u, scaled=True) for n in orders])
        return FOUR_OVER_PI2 * scaled * profile.phi(u)[None, :]

    estimate = integrate_finite_batch(
        integrand,
        (-math.pi, math.pi),
        tol,
        frequency=max(float(n_max), 1.0),
        points=(0.0,),
    )
    factors = np.array([amplification(int(n)) for n in orders])
    values = estimate.values / factors
    errors = estimate.errors / factors
    if variant == Variant.IM:
        values[0] = errors[0] = 0.0

    report = TransformReport(
        kind=f"profile_{variant}",
        indices=[int(n) for n in orders],
        values=values.tolist(),
        error_estimates=errors.tolist(),
        truncation=[None] * orders.size,
        amplification=factors.tolist(),
        converged=estimate.converged.tolist(),
        params={"profile": profile.label, "flavor": profile.flavor, "n_max": n_max},
    )
    if variant == Variant.IM:
        report.warnings.append("a_0 is fixed to 0 for Im series (Im kernels vanish at n = 0)")
    return report


def _terms(coeffs: CoefficientSequence, x: Any, n_max: int, variant: str, tol: Optional[Tolerance]) -> np.ndarray:
    """Series terms t_0..t_{n_max} at each x, shape (n_max + 1,) + x.shape."""
    xs = _check_points(x)
    orders = np.arange(n_max + 1, dtype=float)
    kind = "re_j" if variant == Variant.RE else "im_j"
    kernels = kernel_values(kind, 0.5, orders.reshape((-1,) + (1,) * xs.ndim), xs[None, ...], tol or KERNEL_TOLERANCE)
    weights = np.array([amplification(n) for n in range(n_max + 1)]) * coeffs.extended(n_max)
    if variant == Variant.RE:
        weights[0] = coeffs.coefficient(0) / 2.0
    else:
        weights[0] = 0.0
    if n_max > settings.max_n:
        logger.warning(
            "partial sum up to n=%d multiplies coefficients by cosh(pi n) up to %.3e",
            n_max,
            amplification(n_max),
        )
    return weights.reshape((-1,) + (1,) * xs.ndim) * kernels.values


def _partial_sum(coeffs: CoefficientSequence, x: Any, N: int, variant: str, tol: Optional[Tolerance]):
    if N < 0:
        raise DomainError(f"partial-sum order must be non-negative, got {N}", N=N)
    total = _terms(coeffs, x, N, variant, tol).sum(axis=0)
    return float(total) if np.ndim(total) == 0 else total


def reconstruct_re(coeffs: CoefficientSequence, x: Any, N: int, tol: Optional[Tolerance] = None):
    """(a_0/2) Re J(x, 1/2, pi) + sum_{n=1}^{N} cosh(pi n) Re J(x, 1/2+in, pi) a_n."""
    return _partial_sum(coeffs, x, N, Variant.RE, tol)


def reconstruct_im(coeffs: CoefficientSequence, x: Any, N: int, tol: Optional[Tolerance] = None):
    """sum_{n=1}^{N} cosh(pi n) Im J(x, 1/2+in, pi) a_n."""
    return _partial_sum(coeffs, x, N, Variant.IM, tol)


def reconstruct_until_stable(
    coeffs: CoefficientSequence,
    x: float,
    variant: VariantName = Variant.RE,
    threshold: float = STABLE_THRESHOLD,
    n_limit: Optional[int] = None,
    tol: Optional[Tolerance] = None,
) -> tuple[float, int]:
    """
    Partial sums S_0, S_1, ... at x until two successive ones differ by less than threshold.

    Returns:
        (S_N, N); N = n_limit when the threshold is never met
    """
    n_limit = max(coeffs.order, 1) if n_limit is None else n_limit
    partial = np.cumsum(_terms(coeffs, float(x), n_limit, variant, tol))
    start = 0 if variant == Variant.RE else 1
    for N in range(start + 1, n_limit + 1):
        if abs(partial[N] - partial[N - 1]) < threshold:
            return float(partial[N]), N
    logger.info("partial sums at x=%g not stable to %g by N=%d", x, threshold, n_limit)
    return float(partial[n_limit]), n_limit


# Dirichlet kernel
def dirichlet_kernel(t: Any, N: int) -> Union[float, np.ndarray]:
    """sin((2N+1) t/2) / sin(t/2), with value 2N+1 where sin(t/2) = 0."""
    ts = np.asarray(t, dtype=float)
    half = np.sin(ts / 2)
    singular = np.abs(half) < 1e-300
    safe = np.where(singular, 1.0, half)
    values = np.where(singular, 2 * N + 1.0, np.sin((2 * N + 1) * ts / 2) / safe)
    return float(values) if values.ndim == 0 else values


def _periodic(profile: PeriodicProfile, u: np.ndarray) -> np.ndarray:
    wrapped = np.mod(u + math.pi, 2 * math.pi) - math.pi
    return profile.values(wrapped)


def dirichlet_symmetric_sum(profile: PeriodicProfile, t: float, N: int, tol: Optional[Tolerance] = None) -> float:
    """
    (1/2pi) int_{-pi}^{pi} [psi(u + t) + psi(-u - t)] D_N(u) du.

    The sum of the N-th Fourier partial sums of psi at t and -t; tends to
    psi(t) + psi(-t) for Lipschitz profiles.
    """
    tol = tol or Tolerance()

    def integrand(u: np.ndarray) -> np.ndarray:
        return (_periodic(profile, u + t) + _periodic(profile, -u - t)) * dirichlet_kernel(u, N)

    # kinks of the built-in profiles after the shift by t
    candidates = (0.0, -t, math.pi - t, -math.pi - t, math.pi / 2 - t, -math.pi / 2 - t)
    kinks = tuple(p for p in candidates if -math.pi < p < math.pi)
    estimate = integrate_finite_batch(integrand, (-math.pi, math.pi), tol, frequency=N + 0.5, points=kinks)
    return float(estimate.values[0]) / (2 * math.pi)

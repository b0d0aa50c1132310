"""
Continuous Pair

Index transforms with a continuous order tau >= 0:

    F(tau) = int_0^inf {Re, Im} K_{1/2+i tau}(x) f(x) dx
    f(x)   = (4/pi^2) int_0^inf cosh(pi tau) {Re, Im} K_{1/2+i tau}(x) F(tau) dtau

The inverse is truncated at a caller-chosen tau_max. The caller states how
cosh(pi tau) F(tau) decays (SpectralDecay); the discarded tail is bounded with
|K_{1/2+i tau}(x)| <= exp(-delta tau) K_{1/2}(x cos delta), minimized over delta.
"""

import logging
import math
from typing import Any, Callable, Optional, Union

import numpy as np

from lstransforms.errors import ConvergenceError, DomainError
from lstransforms.schemas import FunctionEvaluator, InverseEstimate, SpectralDecay, Tolerance, Variant, VariantName
from lstransforms.services.identities import laplace_im_half, laplace_re_half
from lstransforms.services.kernels import bessel_k_half, kernel_values
from lstransforms.services.quadrature import integrate_finite_batch
from lstransforms.services.transforms import FOUR_OVER_PI2, KERNEL_TOLERANCE, kernel_moments

logger = logging.getLogger(__name__)

Spectrum = Callable[[np.ndarray], Any]

# delta values tried for the tail bound
_DELTA_GRID = np.linspace(0.0, 1.55, 32)


def _kind(variant: str) -> str:
    if variant not in (Variant.RE, Variant.IM):
        raise DomainError(f"variant must be 're' or 'im', got {variant!r}", variant=variant)
    return "re_k" if variant == Variant.RE else "im_k"


def ls_forward(f: FunctionEvaluator, tau: Any, variant: VariantName = Variant.RE, tol: Optional[Tolerance] = None) -> Union[float, np.ndarray]:
    """int_0^inf {Re, Im} K_{1/2+i tau}(x) f(x) dx for a float or an array of tau."""
    kind = _kind(variant)
    taus = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(taus)):
        raise DomainError("tau must be finite")
    estimate = kernel_moments(f, kind, 0.5, np.atleast_1d(taus).ravel(), tol, context="continuous forward transform")
    if taus.ndim == 0:
        return float(estimate.values[0])
    return estimate.values.reshape(taus.shape)


def ls_forward_re(f: FunctionEvaluator, tau: Any, tol: Optional[Tolerance] = None) -> Union[float, np.ndarray]:
    """int_0^inf Re K_{1/2+i tau}(x) f(x) dx."""
    return ls_forward(f, tau, Variant.RE, tol)


def ls_forward_im(f: FunctionEvaluator, tau: Any, tol: Optional[Tolerance] = None) -> Union[float, np.ndarray]:
    """int_0^inf Im K_{1/2+i tau}(x) f(x) dx."""
    return ls_forward(f, tau, Variant.IM, tol)


def inverse_tail_bound(x: float, tau_max: float, decay: SpectralDecay) -> float:
    """
    Bound on (4/pi^2) int_{tau_max}^inf |cosh(pi tau) K_{1/2+i tau}(x) F(tau)| dtau.

    min over delta of (4/pi^2) bound K_{1/2}(x cos delta) exp(-(delta + rate) tau_max) / (delta + rate)
    """
    best = math.inf
    for delta in _DELTA_GRID:
        rate = delta + decay.rate
        if rate <= 0:
            continue
        candidate = FOUR_OVER_PI2 * decay.bound * float(bessel_k_half(x * math.cos(delta))) * math.exp(-rate * tau_max) / rate
        best = min(best, candidate)
    return best


def ls_inverse(
    F: Spectrum,
    x: float,
    tau_max: float,
    decay: Optional[SpectralDecay] = None,
    variant: VariantName = Variant.RE,
    tol: Optional[Tolerance] = None,
) -> InverseEstimate:
    """
    (4/pi^2) int_0^{tau_max} cosh(pi tau) {Re, Im} K_{1/2+i tau}(x) F(tau) dtau.

    Args:
        F: spectrum, vectorized in tau
        x: evaluation point, x > 0
        tau_max: truncation of the tau-integral
        decay: statement on the decay of cosh(pi tau) F(tau); required
        variant: "re" or "im"
        tol: tau-quadrature tolerance

    Raises:
        DomainError: missing decay statement, x <= 0 or tau_max <= 0
    """
    kind = _kind(variant)
    if decay is None:
        raise DomainError(
            "continuous inversion needs a decay statement for cosh(pi tau) F(tau); "
            "truncating the tau-integral without one has no error bound"
        )
    if not x > 0 or not tau_max > 0:
        raise DomainError("x and tau_max must be positive", x=x, tau_max=tau_max)
    tol = tol or Tolerance()
    inner = KERNEL_TOLERANCE.model_copy(update={"max_subdivisions": tol.max_subdivisions})

    def integrand(tau: np.ndarray) -> np.ndarray:
        kernels = kernel_values(kind, 0.5, tau, x, inner, strict=False).values
        return np.cosh(math.pi * tau) * kernels * np.asarray(F(tau), dtype=float)

    estimate = integrate_finite_batch(integrand, (0.0, tau_max), tol, weights=np.array([FOUR_OVER_PI2]), frequency=1.0)
    if not estimate.all_converged and not estimate.roundoff_limited:
        raise ConvergenceError("continuous inversion did not converge", x=x, tau_max=tau_max, variant=variant)
    tail = inverse_tail_bound(x, tau_max, decay)
    logger.debug("continuous inverse at x=%g: tail bound %.3e beyond tau_max=%g", x, tail, tau_max)
    return InverseEstimate(
        value=FOUR_OVER_PI2 * float(estimate.values[0]),
        error_estimate=FOUR_OVER_PI2 * float(estimate.errors[0]),
        tail_bound=tail,
        tau_max=tau_max,
        converged=bool(estimate.converged[0]),
    )


def ls_inverse_re(F: Spectrum, x: float, tau_max: float, decay: Optional[SpectralDecay] = None, tol: Optional[Tolerance] = None) -> InverseEstimate:
    return ls_inverse(F, x, tau_max, decay, Variant.RE, tol)


def ls_inverse_im(F: Spectrum, x: float, tau_max: float, decay: Optional[SpectralDecay] = None, tol: Optional[Tolerance] = None) -> InverseEstimate:
    return ls_inverse(F, x, tau_max, decay, Variant.IM, tol)


# Spectra of f(x) = exp(-x cosh u0)
def laplace_spectrum_re(u0: float, tau: Any) -> Union[float, np.ndarray]:
    """pi cos(tau u0) / (2 cosh(u0/2) cosh(pi tau))."""
    taus = np.asarray(tau, dtype=float)
    values = np.vectorize(lambda t: laplace_re_half(t, u0))(taus)
    return float(values) if values.ndim == 0 else values


def laplace_spectrum_im(u0: float, tau: Any) -> Union[float, np.ndarray]:
    """pi sin(tau u0) / (2 sinh(u0/2) cosh(pi tau))."""
    taus = np.asarray(tau, dtype=float)
    values = np.vectorize(lambda t: laplace_im_half(t, u0))(taus)
    return float(values) if values.ndim == 0 else values


def laplace_spectrum_decay(u0: float, variant: VariantName = Variant.RE) -> SpectralDecay:
    """|cosh(pi tau) F(tau)| <= pi / (2 cosh(u0/2)) (Re) or pi / (2 |sinh(u0/2)|) (Im)."""
    _kind(variant)
    if variant == Variant.RE:
        return SpectralDecay(bound=math.pi / (2 * math.cosh(u0 / 2)), rate=0.0)
    if u0 == 0:
        raise DomainError("the Im spectrum of exp(-x) vanishes identically (u0 = 0)", u0=u0)
    return SpectralDecay(bound=math.pi / (2 * abs(math.sinh(u0 / 2))), rate=0.0)

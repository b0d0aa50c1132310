"""
Tests for the Kernel Service

Kernel values are compared with independent implementations:
- scipy.special.kv for the Macdonald function of real order
- mpmath.besselk for complex order alpha + i tau
- mpmath.quad for the incomplete kernels over [0, pi]
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import special

from lstransforms.errors import ConvergenceError, DomainError
from lstransforms.schemas import KernelPoint, Tolerance
from lstransforms.services import kernels
from lstransforms.services.kernels import (
    bessel_k_half,
    bessel_k_real,
    im_j_incomplete,
    im_k,
    kernel_bound,
    kernel_bound_values,
    kernel_values,
    re_j_incomplete,
    re_k,
    truncation_point,
)
from lstransforms.services.quadrature import BatchEstimate

ALPHAS = [0.0, 0.3, -0.5, 0.5, 0.9]
TAUS = [0.0, 1.0, 3.0]
XS = [0.5, 1.0, 2.0]


def _reference(alpha: float, tau: float, x: float) -> complex:
    return complex(mpmath.besselk(mpmath.mpc(alpha, tau), x))


def test_known_values(tolerance: Tolerance) -> None:
    """K_{1/2}(1) and K_0(1) match reference values."""
    assert re_k(KernelPoint.of(0.5, 0.0, 1.0), tolerance) == pytest.approx(0.46106850444789454, abs=1e-11)
    assert bessel_k_real(0.0, 1.0, tolerance) == pytest.approx(0.42102443824070833, abs=1e-11)
    assert float(bessel_k_half(1.0)) == pytest.approx(0.46106850444789454, abs=1e-16)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75, -0.3])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_real_order_matches_scipy(alpha: float, x: float, tolerance: Tolerance) -> None:
    """K_alpha(x) agrees with scipy.special.kv."""
    expected = special.kv(alpha, x)

    assert bessel_k_real(alpha, x, tolerance) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_complex_order_matches_mpmath(alpha: float, tolerance: Tolerance) -> None:
    """Re and Im K_{alpha+i tau}(x) agree with mpmath.besselk."""
    taus = np.array(TAUS)[:, None]
    xs = np.array(XS)[None, :]
    re = kernel_values("re_k", alpha, taus, xs, tolerance)
    im = kernel_values("im_k", alpha, taus, xs, tolerance)

    assert re.converged and im.converged
    for i, tau in enumerate(TAUS):
        for j, x in enumerate(XS):
            expected = _reference(alpha, tau, x)
            assert re.values[i, j] == pytest.approx(expected.real, abs=1e-10)
            assert im.values[i, j] == pytest.approx(expected.imag, abs=1e-10)


def test_im_kernel_vanishes_at_zero_alpha_or_tau(tolerance: Tolerance) -> None:
    """Im K is exactly zero when alpha = 0 or tau = 0."""
    assert im_k(KernelPoint.of(0.0, 2.0, 1.0), tolerance) == 0.0
    assert im_k(KernelPoint.of(0.5, 0.0, 1.0), tolerance) == 0.0


def test_parity_in_tau(tolerance: Tolerance) -> None:
    """Re K is even in tau and Im K is odd."""
    result = kernel_values("im_k", 0.5, [-2.0, 2.0], 1.0, tolerance)
    even = kernel_values("re_k", 0.5, [-2.0, 2.0], 1.0, tolerance)

    assert result.values[0] == -result.values[1]
    assert even.values[0] == even.values[1]


@pytest.mark.parametrize("alpha,tau,x", [(0.5, 1.0, 1.0), (0.5, 4.0, 0.5), (-0.2, 2.0, 2.0)])
def test_incomplete_kernels_match_mpmath_quad(alpha: float, tau: float, x: float, tolerance: Tolerance) -> None:
    """The incomplete kernels agree with mpmath.quad over [0, pi]."""
    point = KernelPoint.of(alpha, tau, x)
    re_expected = mpmath.quad(lambda u: mpmath.exp(-x * mpmath.cosh(u)) * mpmath.cosh(alpha * u) * mpmath.cos(tau * u), [0, mpmath.pi])
    im_expected = mpmath.quad(lambda u: mpmath.exp(-x * mpmath.cosh(u)) * mpmath.sinh(alpha * u) * mpmath.sin(tau * u), [0, mpmath.pi])

    assert re_j_incomplete(point, tolerance) == pytest.approx(float(re_expected), abs=1e-10)
    assert im_j_incomplete(point, tolerance) == pytest.approx(float(im_expected), abs=1e-10)


def test_incomplete_kernel_approaches_complete_kernel(tolerance: Tolerance) -> None:
    """The part of the u-integral beyond pi is below exp(-x cosh(pi)) times a modest factor."""
    point = KernelPoint.of(0.5, 1.0, 1.0)
    gap = abs(re_k(point, tolerance) - re_j_incomplete(point, tolerance))

    assert 0 < gap < 10 * math.exp(-math.cosh(math.pi))


@pytest.mark.parametrize("delta", [0.0, 0.5, 1.2])
@pytest.mark.parametrize("tau", [0.0, 2.0, 6.0])
def test_kernels_respect_bound(delta: float, tau: float, tolerance: Tolerance) -> None:
    """Re K and Im K stay below the exponential bound at alpha = 1/2."""
    point = KernelPoint.of(0.5, tau, 1.0)
    bound = kernel_bound(point, delta, tolerance)

    assert abs(re_k(point, tolerance)) <= bound * (1 + 1e-9)
    assert abs(im_k(point, tolerance)) <= bound * (1 + 1e-9)


def test_truncation_point_bounds_tail() -> None:
    """The integrand beyond the truncation point is below abs_tol/10."""
    u = truncation_point(0.9, 0.5, 1e-12)

    assert math.exp(-0.5 * math.cosh(u) + 0.9 * u) <= 1e-13 * math.exp(-0.5) * (1 + 1e-9)


@pytest.mark.parametrize(
    "call",
    [
        lambda: kernel_values("re_k", 1.0, 0.0, 1.0),
        lambda: kernel_values("re_k", 0.5, 0.0, 0.0),
        lambda: kernel_values("re_k", 0.5, math.nan, 1.0),
        lambda: kernel_values("cosh", 0.5, 0.0, 1.0),
        lambda: kernel_bound(KernelPoint.of(0.5, 1.0, 1.0), math.pi / 2),
    ],
)
def test_domain_errors(call) -> None:
    """alpha = 1, x = 0, NaN tau, unknown kinds and delta = pi/2 raise DomainError."""
    with pytest.raises(DomainError):
        call()


def _stalled(integrand, interval, tol, weights=None, frequency=0.0, points=()):
    size = np.asarray(integrand(np.array([0.5]))).shape[0]
    return BatchEstimate(
        values=np.zeros(size),
        errors=np.ones(size),
        converged=np.zeros(size, dtype=bool),
        evaluations=15,
        subdivisions=tol.max_subdivisions,
        roundoff_limited=False,
    )


def test_budget_exhaustion_raises_when_strict(monkeypatch: pytest.MonkeyPatch) -> None:
    """A stalled chunk raises when strict and is reported otherwise."""
    monkeypatch.setattr(kernels, "integrate_finite_batch", _stalled)

    with pytest.raises(ConvergenceError) as excinfo:
        kernel_values("re_k", 0.5, [1.0, 2.0], 1.0)
    assert excinfo.value.detail["kind"] == "re_k"

    relaxed = kernel_values("re_k", 0.5, [1.0, 2.0], 1.0, strict=False)
    assert not relaxed.converged


# Properties
CLOSED_FORM_TOL = Tolerance(abs_tol=1e-18, rel_tol=1e-13, max_subdivisions=4000)


def test_half_order_closed_form_across_arguments() -> None:
    """re_k(1/2, 0, x) = sqrt(pi/(2x)) exp(-x) to 1e-10 relative from x = 0.1 to x = 10."""
    xs = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
    result = kernel_values("re_k", 0.5, 0.0, xs, CLOSED_FORM_TOL)

    np.testing.assert_allclose(result.values, np.sqrt(math.pi / (2 * xs)) * np.exp(-xs), rtol=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("delta", [0.0, 0.5, 1.2])
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.3, 0.5])
def test_bound_holds_on_grid(alpha: float, delta: float, tolerance: Tolerance) -> None:
    """|Re K| and |Im K| stay below exp(-delta |tau|) K_alpha(x cos delta) for tau in 0..8."""
    taus = np.arange(9, dtype=float)[:, None]
    xs = np.array(XS)[None, :]
    bound = kernel_bound_values(alpha, taus, xs, delta, tolerance)

    assert np.all(np.abs(kernel_values("re_k", alpha, taus, xs, tolerance).values) <= bound + 1e-10)
    assert np.all(np.abs(kernel_values("im_k", alpha, taus, xs, tolerance).values) <= bound + 1e-10)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9])
def test_parity_in_alpha(alpha: float, tolerance: Tolerance) -> None:
    """Re K is even in alpha and Im K is odd, since K_nu = K_-nu."""
    taus = np.array(TAUS)[:, None]
    xs = np.array(XS)[None, :]

    np.testing.assert_allclose(
        kernel_values("re_k", -alpha, taus, xs, tolerance).values,
        kernel_values("re_k", alpha, taus, xs, tolerance).values,
        atol=2e-12,
    )
    np.testing.assert_allclose(
        kernel_values("im_k", -alpha, taus, xs, tolerance).values,
        -kernel_values("im_k", alpha, taus, xs, tolerance).values,
        atol=2e-12,
    )


def test_decay_in_tau(tolerance: Tolerance) -> None:
    """exp(1.5 tau) |re_k(1/2, tau, 1)| stays below K_1/2(cos 1.5) along tau = 0..10."""
    taus = np.arange(11, dtype=float)
    values = np.abs(kernel_values("re_k", 0.5, taus, 1.0, tolerance).values)
    envelope = float(bessel_k_half(math.cos(1.5)))

    assert np.all(values * np.exp(1.5 * taus) <= envelope + 1e-10 * np.exp(1.5 * taus))
    assert values[-1] <= 1e-5 * values[0]


def test_small_argument_does_not_exhaust_budget() -> None:
    """Near x = 0 the integrand settles at its roundoff floor instead of bisecting to the budget."""
    tol = Tolerance(abs_tol=1e-20, rel_tol=1e-14, max_subdivisions=2000)
    result = kernel_values("re_k", 0.5, [0.0, 1.0, 3.0], 1.825e-5, tol)

    assert result.converged
    assert result.values[0] == pytest.approx(float(bessel_k_half(1.825e-5)), rel=1e-10)
    assert result.evaluations < 30 * tol.max_subdivisions

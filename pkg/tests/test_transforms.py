"""
Tests for the Transform Service

Forward series, coefficient recovery and the inversion round trips:
- forward series against closed forms and linearity
- the Laplace composition of a series against its term-by-term closed form
- recovery of known coefficients by every inversion method
- precision warnings and input errors
"""

import logging
import math

import numpy as np
import pytest

from lstransforms.errors import DomainError, QuadratureError
from lstransforms.schemas import CoefficientSequence, FunctionEvaluator, KernelPoint, Tolerance
from lstransforms.services.identities import laplace_re_k_closed
from lstransforms.services.kernels import bessel_k_half, re_k
from lstransforms.services.transforms import (
    FOUR_OVER_PI2,
    amplification,
    biorthogonality_matrix,
    certify,
    check_theorem1,
    coeff_im,
    coeff_re,
    forward_im,
    forward_incomplete_im,
    forward_incomplete_re,
    forward_re,
    forward_report,
    invert_im,
    invert_incomplete_im,
    invert_incomplete_re,
    invert_re,
    laplace_kernel_function,
    recover_coefficients,
    series_function,
    theorem5_coefficients,
    theorem5_forward,
    theorem5_reconstruct,
    truncation_index,
    zero_function,
)

COEFFICIENT_TOL = Tolerance(abs_tol=1e-8, rel_tol=1e-10, max_subdivisions=2000)
# a_n = b_n / cosh(pi n) is read back through a factor up to cosh(6 pi)
RECIPROCAL_TOL = Tolerance(abs_tol=1e-15, rel_tol=1e-12, max_subdivisions=4000)
XS = [0.5, 1.0, 2.0]
SEEDS = [11, 23, 37, 41, 59]


def random_coefficients(seed: int, variant: str, n_max: int = 8) -> list[float]:
    """Uniform [-1, 1] coefficients on n <= n_max; a_0 = 0 for Im series."""
    values = np.random.default_rng(seed).uniform(-1.0, 1.0, n_max + 1)
    if variant == "im":
        values[0] = 0.0
    return values.tolist()


def test_amplification() -> None:
    """amplification(n) is cosh(pi n)."""
    assert amplification(0) == 1.0
    assert amplification(1) == pytest.approx(11.591953275521519, rel=1e-15)


def test_certificate_reads_bound_from_values() -> None:
    """The bound is max |a_n| exp(delta n), and delta must stay below pi/2."""
    certificate = certify([1.0, 0.5, 0.25], delta=0.5)

    assert certificate.bound == pytest.approx(max(1.0, 0.5 * math.exp(0.5), 0.25 * math.exp(1.0)))
    with pytest.raises(DomainError):
        certify([1.0], delta=math.pi / 2)


def test_truncation_index() -> None:
    """Finite sequences stop at their last index, generated ones at the tail bound."""
    finite = CoefficientSequence.from_values([1.0, 0.0, 2.0])
    generated = CoefficientSequence(values=[1.0], decay=certify([1.0], 0.5), term=lambda n: math.exp(-0.5 * n))

    assert truncation_index(finite, 0.5, 1.0, 1e-12) == 2
    n = truncation_index(generated, 0.5, 1.0, 1e-12)
    assert 1 <= n < 400


# Forward series
def test_constant_mode_is_bessel_k(tolerance: Tolerance) -> None:
    """The n = 0 term of the Re series at alpha = 1/2 is K_{1/2}."""
    values = forward_re(CoefficientSequence.unit(0), 0.5, np.array(XS), tolerance)

    np.testing.assert_allclose(values, bessel_k_half(np.array(XS)), rtol=1e-10)


def test_forward_returns_shape_of_x(tolerance: Tolerance) -> None:
    """Scalar x gives a float and arrays keep their shape."""
    seq = CoefficientSequence.from_values([1.0, 0.5])

    assert isinstance(forward_re(seq, 0.3, 1.0, tolerance), float)
    assert forward_re(seq, 0.3, np.ones((2, 3)), tolerance).shape == (2, 3)


def test_forward_is_linear(tolerance: Tolerance) -> None:
    """The series of a + b is the sum of the two series."""
    a = CoefficientSequence.from_values([1.0, -0.5, 0.25])
    b = CoefficientSequence.from_values([0.0, 2.0, 0.0, 1.0])
    xs = np.array(XS)

    np.testing.assert_allclose(
        forward_re(a + b, 0.3, xs, tolerance),
        forward_re(a, 0.3, xs, tolerance) + forward_re(b, 0.3, xs, tolerance),
        atol=1e-12,
    )


def test_single_mode_matches_kernel(tolerance: Tolerance) -> None:
    """A unit sequence reproduces the kernel itself."""
    value = forward_re(CoefficientSequence.unit(2), 0.5, 1.0, tolerance)

    assert value == pytest.approx(re_k(KernelPoint.of(0.5, 2.0, 1.0), tolerance), abs=1e-14)


def test_im_series_ignores_constant_mode(tolerance: Tolerance, caplog: pytest.LogCaptureFixture) -> None:
    """a_0 does not enter an Im series, and dropping it is logged."""
    seq = CoefficientSequence.from_values([5.0, 1.0])

    with caplog.at_level(logging.WARNING):
        value = forward_im(seq, 0.5, 1.0, tolerance)

    assert value == pytest.approx(forward_im(CoefficientSequence.from_values([0.0, 1.0]), 0.5, 1.0, tolerance))
    assert "a_0" in caplog.text


def test_forward_report(tolerance: Tolerance) -> None:
    """The forward report lists every x with the truncation used."""
    report = forward_report(CoefficientSequence.from_values([0.0, 1.0, 0.0]), 0.5, XS, "im", tolerance)

    assert report.indices == XS
    assert report.truncation == [2, 2, 2]
    assert len(report.rows()) == 3
    assert report.warnings == []

    with pytest.raises(DomainError):
        forward_report(CoefficientSequence.unit(1), 0.3, XS, "re", tolerance, incomplete=True)


def test_laplace_composition_of_series(tolerance: Tolerance) -> None:
    """Integrating a series against exp(-x cosh u) / x matches the term-by-term closed form."""
    seq = CoefficientSequence.from_values([1.0, 0.5, 0.25])

    assert check_theorem1(seq, 0.3, 0.5, "re", tolerance).residual <= 1e-8
    assert check_theorem1(seq, 0.5, 1.0, "im", tolerance).residual <= 1e-8


# Coefficient recovery
@pytest.mark.parametrize("n", [0, 1, 2])
def test_coefficients_of_laplace_kernel(n: int) -> None:
    """coeff_re of exp(-x cosh u0) is the scaled Laplace closed form."""
    u0 = 0.7
    expected = FOUR_OVER_PI2 * laplace_re_k_closed(0.5, n, u0)

    assert coeff_re(laplace_kernel_function(u0), 0.5, n, COEFFICIENT_TOL) == pytest.approx(expected, abs=1e-8)
    assert expected == pytest.approx(2 / math.pi * math.cos(n * u0) / (math.cosh(u0 / 2) * math.cosh(math.pi * n)))


def test_series_function_near_origin() -> None:
    """The series used as an integrand stays finite down to x = 1e-5 and never raises."""
    f = series_function(CoefficientSequence.from_values(random_coefficients(SEEDS[0], "re")), 0.5, "re")
    xs = np.array([1.825e-5, 1e-3, 0.5])

    assert np.all(np.isfinite(f(xs)))
    unit = series_function(CoefficientSequence.unit(0), 0.5, "re")
    np.testing.assert_allclose(unit(xs), bessel_k_half(xs), rtol=1e-10)


def test_im_coefficient_at_zero_index_is_zero() -> None:
    """coeff_im at n = 0 is exactly zero."""
    assert coeff_im(laplace_kernel_function(0.7), 0.5, 0, COEFFICIENT_TOL) == 0.0


def test_incomplete_kernel_inversion_of_series() -> None:
    """Coefficients of sum a_n Re K_{1/2+in} come back from the incomplete kernel."""
    f = series_function(CoefficientSequence.from_values([0.5, 1.0, -0.25]), 0.5, "re")
    report = recover_coefficients(f, "theorem2", "re", 3, tol=COEFFICIENT_TOL)

    np.testing.assert_allclose(report.values, [0.5, 1.0, -0.25, 0.0], atol=1e-6)
    assert all(report.converged)


def test_single_inversion_helpers() -> None:
    """invert_re picks out one coefficient of a single-mode series."""
    f = series_function(CoefficientSequence.from_values([0.0, 1.0, 0.0]), 0.5, "re")

    assert invert_re(f, 1, COEFFICIENT_TOL) == pytest.approx(1.0, abs=1e-6)
    assert invert_re(f, 2, COEFFICIENT_TOL) == pytest.approx(0.0, abs=1e-6)


def test_negative_half_order_inversion() -> None:
    """The incomplete-kernel inversion also holds at alpha = -1/2."""
    f = series_function(CoefficientSequence.from_values([0.0, 0.0, 1.0]), -0.5, "im")

    assert invert_im(f, 2, COEFFICIENT_TOL, alpha=-0.5) == pytest.approx(1.0, abs=1e-6)


def test_im_inversion_reports_zero_constant_mode() -> None:
    """Im recoveries report a_0 = 0 together with a warning."""
    f = series_function(CoefficientSequence.from_values([0.0, 0.0, 1.0]), 0.5, "im")
    report = recover_coefficients(f, "theorem2", "im", 3, tol=COEFFICIENT_TOL)

    np.testing.assert_allclose(report.values, [0.0, 0.0, 1.0, 0.0], atol=1e-6)
    assert report.value(0) == 0.0
    assert any("a_0 is fixed to 0" in w for w in report.warnings)


def test_complete_kernel_inversion_of_incomplete_series() -> None:
    """A series in the incomplete kernels is inverted with the complete ones."""
    values = forward_incomplete_re(CoefficientSequence.from_values([0.0, 1.0, 0.0]), np.array(XS), COEFFICIENT_TOL)
    f = series_function(CoefficientSequence.from_values([0.0, 1.0, 0.0]), 0.5, "re", incomplete=True)

    assert f(np.array(XS)) == pytest.approx(values)
    assert invert_incomplete_re(f, 1, COEFFICIENT_TOL) == pytest.approx(1.0, abs=1e-6)
    assert invert_incomplete_re(f, 2, COEFFICIENT_TOL) == pytest.approx(0.0, abs=1e-6)


def test_complete_kernel_inversion_of_incomplete_im_series() -> None:
    """The Im incomplete series is inverted with Im K, one index at a time."""
    values = forward_incomplete_im(CoefficientSequence.from_values([0.0, 0.0, 1.0]), np.array(XS), COEFFICIENT_TOL)
    f = series_function(CoefficientSequence.from_values([0.0, 0.0, 1.0]), 0.5, "im", incomplete=True)

    assert f(np.array(XS)) == pytest.approx(values)
    assert invert_incomplete_im(f, 2, COEFFICIENT_TOL) == pytest.approx(1.0, abs=1e-6)
    assert invert_incomplete_im(f, 1, COEFFICIENT_TOL) == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(DomainError):
        invert_incomplete_im(f, 0, COEFFICIENT_TOL)


def test_reciprocal_pipeline() -> None:
    """a_n cosh(pi n) = b_n, and the cosh-weighted series of a reproduces the series of b."""
    b = CoefficientSequence.from_values([0.0, 1.0, 0.5])
    report = theorem5_coefficients(b, 3, "re", COEFFICIENT_TOL)
    rescaled = np.array(report.values) * np.array([amplification(n) for n in range(4)])

    np.testing.assert_allclose(rescaled, [0.0, 1.0, 0.5, 0.0], atol=1e-6)
    assert theorem5_forward(b, 1, COEFFICIENT_TOL) == pytest.approx(1 / math.cosh(math.pi), abs=1e-7)

    a = report.as_sequence()
    xs = np.array(XS)
    np.testing.assert_allclose(
        theorem5_reconstruct(a, xs, "re", COEFFICIENT_TOL),
        forward_re(b, 0.5, xs, COEFFICIENT_TOL),
        atol=1e-6,
    )


def test_reciprocal_pipeline_refuses_general_alpha() -> None:
    """The reciprocal pipeline is refused away from alpha = 1/2."""
    with pytest.raises(DomainError):
        recover_coefficients(zero_function(), "theorem5", "re", 2, alpha=0.3)


@pytest.mark.parametrize("method", ["theorem2", "theorem3"])
def test_cosh_weighted_inversions_need_half_order(method: str) -> None:
    """The cosh-weighted inversions are refused at alpha = 0.3."""
    with pytest.raises(DomainError):
        recover_coefficients(zero_function(), method, "re", 2, alpha=0.3)


def test_incomplete_paths_refuse_negative_half_order() -> None:
    """Series in the incomplete kernels and their inversion exist at alpha = 1/2 only."""
    seq = CoefficientSequence.unit(1)

    with pytest.raises(DomainError):
        recover_coefficients(zero_function(), "theorem3", "im", 2, alpha=-0.5)
    with pytest.raises(DomainError):
        invert_incomplete_re(zero_function(), 1, COEFFICIENT_TOL, alpha=-0.5)
    with pytest.raises(DomainError):
        series_function(seq, -0.5, "re", incomplete=True)
    with pytest.raises(DomainError):
        forward_report(seq, -0.5, XS, "im", incomplete=True)


def test_im_inversion_excludes_zero_index() -> None:
    """invert_im refuses n = 0."""
    with pytest.raises(DomainError):
        invert_im(zero_function(), 0)


def test_unknown_method() -> None:
    """An unknown recovery method is a DomainError."""
    with pytest.raises(DomainError):
        recover_coefficients(zero_function(), "theorem4", "re", 2)


def test_precision_envelope_warning(caplog: pytest.LogCaptureFixture) -> None:
    """An index above N_max is computed, reported and logged with a warning."""
    with caplog.at_level(logging.WARNING):
        report = recover_coefficients(zero_function(), "theorem2", "re", indices=[14], tol=COEFFICIENT_TOL)

    assert report.values == [0.0]
    assert any("exceeds N_max" in w for w in report.warnings)
    assert "exceeds N_max" in caplog.text


def test_amplified_abs_tol_warning() -> None:
    """cosh(pi n) * abs_tol above the coefficient tolerance is flagged for each such index."""
    report = recover_coefficients(zero_function(), "theorem2", "re", indices=[4, 6, 8, 12], tol=Tolerance(abs_tol=1e-12))
    flagged = [w.split(":")[0] for w in report.warnings if "cosh(pi n) * abs_tol" in w]

    assert flagged == ["n=6", "n=8", "n=12"]
    assert not any("exceeds N_max" in w for w in report.warnings)


def test_non_finite_function_values() -> None:
    """A NaN-valued function makes recovery fail with a QuadratureError."""
    f = FunctionEvaluator(evaluate=lambda x: np.full_like(x, np.nan), label="nan")

    with pytest.raises(QuadratureError):
        coeff_re(f, 0.5, 1, COEFFICIENT_TOL)


# Acceptance-size round trips
@pytest.mark.slow
def test_biorthogonality() -> None:
    """G is the identity on {0..8}^2 after halving, and the raw constant entry is 2."""
    matrix = biorthogonality_matrix("re", 8, COEFFICIENT_TOL)
    raw = biorthogonality_matrix("re", 1, COEFFICIENT_TOL, raw=True)

    np.testing.assert_allclose(matrix, np.eye(9), atol=1e-6)
    assert raw[0, 0] == pytest.approx(2.0, abs=1e-6)


@pytest.mark.slow
def test_im_biorthogonality() -> None:
    """The Im matrix is the identity on {1..8}^2 with a zero constant row and column."""
    matrix = biorthogonality_matrix("im", 8, COEFFICIENT_TOL)
    expected = np.eye(9)
    expected[0, 0] = 0.0

    np.testing.assert_allclose(matrix, expected, atol=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("variant", ["re", "im"])
@pytest.mark.parametrize("seed", SEEDS)
def test_random_sequences_round_trip(seed: int, variant: str) -> None:
    """Random coefficients on n <= 8 survive the forward series and the incomplete-kernel inversion."""
    values = random_coefficients(seed, variant)
    f = series_function(CoefficientSequence.from_values(values), 0.5, variant)
    report = recover_coefficients(f, "theorem2", variant, 8, tol=COEFFICIENT_TOL)

    assert report.indices == list(range(9))
    assert max(abs(got - want) for got, want in zip(report.values, values)) <= 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("variant", ["re", "im"])
def test_incomplete_series_round_trip(variant: str) -> None:
    """Coefficients on n <= 8 come back from a series in the incomplete kernels."""
    values = random_coefficients(SEEDS[0], variant)
    f = series_function(CoefficientSequence.from_values(values), 0.5, variant, incomplete=True)
    report = recover_coefficients(f, "theorem3", variant, 8, tol=COEFFICIENT_TOL)

    assert max(abs(got - want) for got, want in zip(report.values, values)) <= 1e-6


@pytest.mark.slow
def test_reciprocal_pipeline_on_six_modes() -> None:
    """b on {1..6}: cosh(pi n) a_n = b_n, and the reconstruction reproduces the series of b."""
    b_values = [0.0, 1.0, -0.5, 0.25, 0.8, -0.3, 0.6]
    b = CoefficientSequence.from_values(b_values)
    report = theorem5_coefficients(b, 6, "re", RECIPROCAL_TOL)
    rescaled = [value * amplification(n) for n, value in enumerate(report.values)]

    np.testing.assert_allclose(rescaled, b_values, atol=1e-6)
    assert theorem5_forward(b, 6, RECIPROCAL_TOL) * amplification(6) == pytest.approx(0.6, abs=1e-6)

    xs = np.array(XS)
    np.testing.assert_allclose(
        theorem5_reconstruct(report.as_sequence(), xs, "re", RECIPROCAL_TOL),
        forward_re(b, 0.5, xs, RECIPROCAL_TOL),
        atol=1e-6,
    )

"""
Adaptive Quadrature Service

Numerical integration engine behind every kernel and transform evaluation.

Rules:
- Nested Gauss 7 / Kronrod 15 pair on every panel; the difference of the two
  rules gives the error indicator (QUADPACK scaling with a roundoff floor)
- Bisection refinement of the panels that carry the error
- Integrands are vectorized: they take an array of nodes and return either an
  array of the same length (scalar integral) or an array of shape (B, len)
  (B integrals sharing the same panels)

Interval forms:
- finite [a, b]
- semi-infinite [lower, inf) for exponentially decaying integrands, truncated
  where the tail bound exp(-rate U)/rate drops below abs_tol/10
- (a, b] with an integrable power singularity u^-gamma at a, removed by the
  substitution u = a + (b - a) s^(1/(1-gamma))
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from lstransforms.errors import DivergentIntegralError, DomainError, IntegrandEvaluationError, InvalidDecayHintError
from lstransforms.schemas import DecayHint, IntegralEstimate, Tolerance

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes in ascending order: -x0..-x6, 0, x6..x0
NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 13]] = _WG[0]
GAUSS_WEIGHTS[[3, 11]] = _WG[1]
GAUSS_WEIGHTS[[5, 9]] = _WG[2]
GAUSS_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class BatchEstimate:
    """B integrals computed on shared panels."""

    values: np.ndarray
    errors: np.ndarray
    converged: np.ndarray
    evaluations: int
    subdivisions: int
    roundoff_limited: bool

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))

    def component(self, index: int = 0) -> IntegralEstimate:
        return IntegralEstimate(
            value=float(self.values[index]),
            error_estimate=float(self.errors[index]),
            evaluations=self.evaluations,
            converged=bool(self.converged[index]),
            subdivisions=self.subdivisions,
            roundoff_limited=self.roundoff_limited and not bool(self.converged[index]),
        )


def _evaluate_panels(integrand: Integrand, left: np.ndarray, right: np.ndarray):
    """
    Apply the Gauss-Kronrod pair to every panel.

    Returns (result, error, floor_hit) arrays of shape (B, P) and the number of
    integrand evaluations.
    """
    center = 0.5 * (left + right)
    half = 0.5 * (right - left)
    nodes = center[:, None] + half[:, None] * NODES[None, :]
    flat = nodes.ravel()

    raw = np.asarray(integrand(flat), dtype=float)
    if raw.ndim <= 1:
        raw = np.broadcast_to(raw, flat.shape)[None, :]
    else:
        raw = raw.reshape(raw.shape[0], -1)
    if raw.shape[1] != flat.size:
        raise DomainError(
            "integrand returned an array of the wrong length",
            expected=int(flat.size),
            received=int(raw.shape[1]),
        )
    if not np.all(np.isfinite(raw)):
        bad = np.argwhere(~np.isfinite(raw))[0]
        raise IntegrandEvaluationError(
            node=float(flat[bad[1]]),
            value=float(raw[bad[0], bad[1]]),
            component=int(bad[0]),
        )

    values = raw.reshape(raw.shape[0], left.size, NODES.size)
    kronrod = values @ KRONROD_WEIGHTS
    gauss = values @ GAUSS_WEIGHTS
    resabs = np.abs(values) @ KRONROD_WEIGHTS
    resasc = np.abs(values - 0.5 * kronrod[..., None]) @ KRONROD_WEIGHTS

    result = kronrod * half
    raw_error = np.abs(kronrod - gauss) * half
    resabs = resabs * half
    resasc = resasc * half

    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * raw_error / resasc) ** 1.5)
    error = np.where((resasc != 0) & (raw_error != 0), scaled, raw_error)
    floor = np.where(resabs > _TINY / (50 * _EPS), 50 * _EPS * resabs, 0.0)
    floor_hit = error <= floor
    error = np.maximum(error, floor)

    # panels that cannot be bisected any further in floating point
    degenerate = (right - left) <= 8 * _EPS * np.maximum(np.abs(left), np.abs(right))
    floor_hit = floor_hit | degenerate[None, :]

    return result, error, floor_hit, flat.size


def _initial_edges(a: float, b: float, frequency: float, points: Sequence[float]) -> np.ndarray:
    if frequency > 0:
        width = math.pi / (4.0 * max(frequency, 1.0))
        count = max(1, int(math.ceil((b - a) / width)))
    else:
        count = 1
    edges = np.linspace(a, b, count + 1)
    extra = [p for p in points if a < p < b]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def _target(values: np.ndarray, abs_tol: np.ndarray, tol: Tolerance) -> np.ndarray:
    return np.maximum(abs_tol, tol.rel_tol * np.abs(values))


def _component_abs_tol(tol: Tolerance, weights: Optional[np.ndarray]) -> Union[float, np.ndarray]:
    if weights is None:
        return tol.abs_tol
    return np.maximum(tol.abs_tol / np.abs(weights), 1e-300)


def _adaptive(
    integrand: Integrand,
    edges: np.ndarray,
    tol: Tolerance,
    weights: Optional[np.ndarray] = None,
    carried_values: Union[float, np.ndarray] = 0.0,
    carried_errors: Union[float, np.ndarray] = 0.0,
) -> BatchEstimate:
    """
    Bisect panels until every component meets max(abs_tol/weight, rel_tol |value|).

    ``carried_values`` / ``carried_errors`` belong to pieces of the integral
    computed elsewhere (a truncated tail, an adjacent interval). They are
    included in the returned totals and in every convergence test, and their
    error counts as irreducible.
    """
    left, right = edges[:-1].copy(), edges[1:].copy()
    result, error, floor_hit, evaluations = _evaluate_panels(integrand, left, right)

    abs_tol = np.broadcast_to(_component_abs_tol(tol, weights), (result.shape[0],))

    subdivisions = 0
    roundoff_limited = False
    while True:
        values = result.sum(axis=1) + carried_values
        errors = error.sum(axis=1) + carried_errors
        target = _target(values, abs_tol, tol)
        open_ = errors > target
        if not np.any(open_):
            break

        # Roundoff floors (plus carried error) already at the target: refine
        # only while the remaining panels carry more than that floor.
        locked = np.where(floor_hit, error, 0.0).sum(axis=1) + carried_errors
        free = errors - locked
        if np.all(~open_ | ((locked >= target) & (free <= locked))):
            roundoff_limited = True
            break

        ratio = np.where(floor_hit | ~open_[:, None], 0.0, error / target[:, None])
        badness = ratio.max(axis=0)
        if badness.max() <= 0:
            roundoff_limited = True
            break

        budget = tol.max_subdivisions - subdivisions
        if budget <= 0:
            break
        selected = np.flatnonzero(badness > 1.0 / left.size)
        if selected.size == 0:
            selected = np.array([int(np.argmax(badness))])
        if selected.size > budget:
            selected = selected[np.argsort(badness[selected])[::-1][:budget]]

        mid = 0.5 * (left[selected] + right[selected])
        new_left = np.concatenate([left[selected], mid])
        new_right = np.concatenate([mid, right[selected]])
        new_result, new_error, new_floor, count = _evaluate_panels(integrand, new_left, new_right)
        evaluations += count
        subdivisions += selected.size

        keep = np.ones(left.size, dtype=bool)
        keep[selected] = False
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        result = np.concatenate([result[:, keep], new_result], axis=1)
        error = np.concatenate([error[:, keep], new_error], axis=1)
        floor_hit = np.concatenate([floor_hit[:, keep], new_floor], axis=1)

        order = np.argsort(left, kind="stable")
        left, right = left[order], right[order]
        result, error, floor_hit = result[:, order], error[:, order], floor_hit[:, order]

    values = result.sum(axis=1) + carried_values
    errors = error.sum(axis=1) + carried_errors
    target = _target(values, abs_tol, tol)
    converged = errors <= target
    if not np.all(converged):
        logger.debug(
            "adaptive quadrature stopped above target (%s): max error %.3e, %d bisections",
            "roundoff" if roundoff_limited else "budget",
            float(np.max(errors - target)),
            subdivisions,
        )
    return BatchEstimate(
        values=values,
        errors=errors,
        converged=converged,
        evaluations=int(evaluations),
        subdivisions=int(subdivisions),
        roundoff_limited=roundoff_limited,
    )


def _check_interval(interval: Sequence[float]) -> tuple[float, float]:
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"interval must satisfy a < b with finite ends, got [{a}, {b}]", interval=[a, b])
    return a, b


def integrate_finite_batch(
    integrand: Integrand,
    interval: Sequence[float],
    tol: Optional[Tolerance] = None,
    weights: Optional[np.ndarray] = None,
    frequency: float = 0.0,
    points: Sequence[float] = (),
) -> BatchEstimate:
    """
    Integrate a vector-valued integrand over a finite interval.

    Args:
        integrand: maps an array of nodes to shape (B, len(nodes))
        interval: (a, b) with a < b
        tol: error targets; component b is held to abs_tol / weights[b]
        weights: per-component scale of the absolute target
        frequency: largest angular frequency of cos/sin factors; initial panels
            are at most pi/(4 max(frequency, 1)) wide when positive
        points: extra panel edges (kinks, known singular points)
    """
    tol = tol or Tolerance()
    a, b = _check_interval(interval)
    return _adaptive(integrand, _initial_edges(a, b, frequency, points), tol, weights)


def integrate_finite(
    integrand: Integrand,
    interval: Sequence[float],
    tol: Optional[Tolerance] = None,
    frequency: float = 0.0,
    points: Sequence[float] = (),
) -> IntegralEstimate:
    """
    Integrate a scalar integrand over [a, b].

    Example:
        >>> integrate_finite(lambda u: u, (0.0, 1.0)).value
        0.5
    """
    return integrate_finite_batch(integrand, interval, tol, frequency=frequency, points=points).component(0)


def _decay_rate(decay: Union[DecayHint, float]) -> float:
    rate = decay.rate if isinstance(decay, DecayHint) else float(decay)
    if not rate > 0 or not math.isfinite(rate):
        raise InvalidDecayHintError(f"decay rate must be positive, got {rate}", rate=rate)
    return rate


def truncation_length(rate: float, abs_tol: float, lower: float = 0.0) -> float:
    """Smallest U with exp(-rate U)/rate < abs_tol/10 (never below lower + 1/rate)."""
    upper = math.log(10.0 / (rate * abs_tol)) / rate
    return max(upper, lower + 1.0 / rate)


def _semi_infinite(
    integrand: Integrand,
    rate: float,
    tol: Tolerance,
    lower: float,
    weights: Optional[np.ndarray],
    frequency: float,
) -> BatchEstimate:
    smallest = float(np.min(_component_abs_tol(tol, weights)))
    upper = truncation_length(rate, smallest, lower)
    tail = math.exp(-rate * upper) / rate
    return _adaptive(integrand, _initial_edges(lower, upper, frequency, ()), tol, weights, carried_errors=tail)


def integrate_semi_infinite_batch(
    integrand: Integrand,
    decay: Union[DecayHint, float],
    tol: Optional[Tolerance] = None,
    lower: float = 0.0,
    weights: Optional[np.ndarray] = None,
    frequency: float = 0.0,
) -> BatchEstimate:
    return _semi_infinite(integrand, _decay_rate(decay), tol or Tolerance(), float(lower), weights, frequency)


def integrate_semi_infinite(
    integrand: Integrand,
    decay: Union[DecayHint, float],
    tol: Optional[Tolerance] = None,
    lower: float = 0.0,
    frequency: float = 0.0,
) -> IntegralEstimate:
    """
    Integrate an exponentially decaying integrand over [lower, inf).

    The interval is truncated at the smallest U whose tail bound
    exp(-rate U)/rate is below abs_tol/10; the bound is added to the error
    estimate.

    Raises:
        InvalidDecayHintError: rate <= 0
    """
    return integrate_semi_infinite_batch(integrand, decay, tol, lower, frequency=frequency).component(0)


def _singular_substitution(integrand: Integrand, a: float, b: float, gamma: float) -> Integrand:
    power = 1.0 / (1.0 - max(gamma, 0.0))
    span = b - a

    def substituted(s: np.ndarray) -> np.ndarray:
        u = a + span * s**power
        jacobian = span * power * s ** (power - 1.0)
        return np.asarray(integrand(u), dtype=float) * jacobian

    return substituted


def _check_gamma(gamma: float) -> None:
    if not gamma < 1:
        raise DivergentIntegralError(f"endpoint singularity u^-{gamma} is not integrable (gamma >= 1)", gamma=gamma)


def integrate_endpoint_singular_batch(
    integrand: Integrand,
    interval: Sequence[float],
    gamma: float,
    tol: Optional[Tolerance] = None,
    weights: Optional[np.ndarray] = None,
) -> BatchEstimate:
    _check_gamma(gamma)
    a, b = _check_interval(interval)
    return integrate_finite_batch(_singular_substitution(integrand, a, b, gamma), (0.0, 1.0), tol, weights=weights)


def integrate_endpoint_singular(
    integrand: Integrand,
    interval: Sequence[float],
    gamma: float,
    tol: Optional[Tolerance] = None,
) -> IntegralEstimate:
    """
    Integrate f over (a, b] where f behaves like (u - a)^-gamma near a.

    Raises:
        DivergentIntegralError: gamma >= 1
    """
    return integrate_endpoint_singular_batch(integrand, interval, gamma, tol).component(0)


def integrate_half_line_batch(
    integrand: Integrand,
    decay: Union[DecayHint, float],
    gamma: float = 0.0,
    tol: Optional[Tolerance] = None,
    split: float = 1.0,
    weights: Optional[np.ndarray] = None,
) -> BatchEstimate:
    """
    (0, split] with the endpoint-singular rule plus [split, inf) with the decaying rule.

    The head is refined against the totals, so ``converged`` describes the
    whole half-line integral.
    """
    _check_gamma(gamma)
    _check_interval((0.0, split))
    tol = tol or Tolerance()
    tail = _semi_infinite(integrand, _decay_rate(decay), tol, float(split), weights, 0.0)
    head = _adaptive(
        _singular_substitution(integrand, 0.0, float(split), gamma),
        _initial_edges(0.0, 1.0, 0.0, ()),
        tol,
        weights,
        carried_values=tail.values,
        carried_errors=tail.errors,
    )
    tail_exhausted = not tail.all_converged and not tail.roundoff_limited
    return BatchEstimate(
        values=head.values,
        errors=head.errors,
        converged=head.converged,
        evaluations=head.evaluations + tail.evaluations,
        subdivisions=head.subdivisions + tail.subdivisions,
        roundoff_limited=(head.roundoff_limited or tail.roundoff_limited) and not tail_exhausted,
    )


def integrate_half_line(
    integrand: Integrand,
    decay: Union[DecayHint, float],
    gamma: float = 0.0,
    tol: Optional[Tolerance] = None,
    split: float = 1.0,
) -> IntegralEstimate:
    """
    Integrate over (0, inf) an integrand that is O(x^-gamma) at 0 and decays exponentially.

    Example:
        >>> integrate_half_line(lambda x: x**-0.5 * np.exp(-2 * x), 2.0, gamma=0.5).value
        1.2533141373155...
    """
    return integrate_half_line_batch(integrand, decay, gamma, tol, split).component(0)

"""
Error Types

Every failure raised by the library derives from ``LSTransformError``.

- ``DomainError``: an input violates the precondition of an operation
  (x <= 0, |alpha| >= 1, delta outside [0, pi/2), n = 0 for an Im inversion...)
- ``QuadratureError``: numerical integration could not deliver a value

The CLI maps the first family to exit status 1 and the second to exit status 2.
"""

from typing import Any


class LSTransformError(Exception):
    """Base class for library errors, with a structured ``detail`` payload."""

    def __init__(self, message: str, **detail: Any) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.detail}


class DomainError(LSTransformError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class InvalidDecayHintError(DomainError):
    """A decay hint or decay statement does not describe a decaying integrand."""


class DivergentIntegralError(DomainError):
    """The declared endpoint singularity is not integrable (gamma >= 1)."""


class SingularIdentityError(DomainError):
    """A closed-form identity was requested at a parameter pair where it is singular."""


class QuadratureError(LSTransformError):
    """Numerical integration failed."""


class IntegrandEvaluationError(QuadratureError):
    """The integrand returned a non-finite value at a quadrature node."""

    def __init__(self, node: float, value: float, **detail: Any) -> None:
        super().__init__(
            f"integrand is not finite at node u={node!r} (value={value!r})",
            node=node,
            value=value,
            **detail,
        )
        self.node = node
        self.value = value


class ConvergenceError(QuadratureError):
    """The subdivision budget ran out before the tolerance was met."""

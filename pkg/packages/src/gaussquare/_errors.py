"""Exception hierarchy and structured error payloads.

Every failure a numerical module can raise derives from
:class:`GaussquareError`.  The CLI maps the two top-level families onto
exit codes (configuration problems → 2, numeric problems → 3) and turns
the exception into an :class:`ErrorPayload` for the log.

Payload schema::

    {
        "error_type": "AlphaOutOfRange",
        "message": "2*alpha*M = 1.6 >= 1 ...",
        "command": "wienerhopf" | null,
        "timestamp": "2026-10-19T12:34:56+00:00",
        "details": {}
    }

``error_type`` is the short, machine-readable name from
:data:`ERROR_TYPES`; subclasses without an entry fall back to the nearest
mapped ancestor, then to ``"error"``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from datetime import UTC, datetime

from gaussquare._json import dumps

# ---------------------------------------------------------------------------
# Exception hierarchy
# ---------------------------------------------------------------------------


class GaussquareError(Exception):
    """Root of every error raised by gaussquare modules."""


class ModelError(GaussquareError, ValueError):
    """A kernel, mean or process model was constructed with invalid parameters."""


class DomainError(ModelError):
    """An argument lies outside the domain of a closed-form expression."""


class NumericalError(GaussquareError):
    """A computation could not produce a trustworthy result."""


class SizeMismatchError(NumericalError, ValueError):
    """Two matrices or vectors that must share a size do not."""


class ZeroStartVarianceError(NumericalError):
    """Conditioning on ``X_0`` requires ``K(0, 0) > 0``."""


class FactorizationFailureError(NumericalError):
    """A matrix expected to be positive definite could not be factorized."""


class NotPositiveSemidefiniteError(FactorizationFailureError):
    """A pivot or eigenvalue fell below the negative tolerance."""


class AlphaOutOfRangeError(NumericalError):
    """The Wiener-Hopf solver requires ``2 * alpha * M < 1``."""


class NoConvergenceError(NumericalError):
    """An iterative refinement exhausted its budget."""


class DegenerateSpectrumError(NumericalError):
    """The spectral density vanishes where a positive value is required."""


class NonFiniteOutputError(NumericalError):
    """A result row contains NaN or infinity."""


class InvariantViolationError(NumericalError):
    """A cross-check between two independent computations failed."""


ERROR_TYPES: dict[type[Exception], str] = {
    GaussquareError: "GaussquareError",
    ModelError: "ModelError",
    DomainError: "DomainError",
    NumericalError: "NumericalError",
    SizeMismatchError: "SizeMismatch",
    ZeroStartVarianceError: "ZeroStartVariance",
    FactorizationFailureError: "FactorizationFailure",
    NotPositiveSemidefiniteError: "NotPositiveSemidefinite",
    AlphaOutOfRangeError: "AlphaOutOfRange",
    NoConvergenceError: "NoConvergence",
    DegenerateSpectrumError: "DegenerateSpectrum",
    NonFiniteOutputError: "NonFiniteOutput",
    InvariantViolationError: "InvariantViolation",
}


def error_type_of(
    error: BaseException,
    error_type_map: dict[type[Exception], str] | None = None,
) -> str:
    """Return the machine-readable type name for *error*.

    Walks the MRO so that an unmapped subclass reports its closest
    mapped ancestor.
    """
    resolved = ERROR_TYPES if error_type_map is None else error_type_map
    for klass in type(error).__mro__:
        if klass in resolved:
            return resolved[klass]
    return "error"


# ---------------------------------------------------------------------------
# Value objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ErrorPayload:
    """Immutable structured error record, ready for JSON serialisation."""

    error_type: str
    message: str
    command: str | None
    timestamp: str
    details: dict[str, object] = field(default_factory=dict)

    def to_json(self) -> str:
        """Serialise to a JSON string."""
        return dumps(asdict(self))

    def headline(self) -> str:
        """One-line human form, ``"<error_type>: <message>"``."""
        return f"{self.error_type}: {self.message}"


# ---------------------------------------------------------------------------
# Payload builder
# ---------------------------------------------------------------------------


def build_error_payload(
    error: Exception,
    *,
    error_type_map: dict[type[Exception], str] | None = None,
    command: str | None = None,
    details: dict[str, object] | None = None,
    clock: Callable[[], datetime] | None = None,
) -> ErrorPayload:
    """Convert an exception into a structured :class:`ErrorPayload`.

    Args:
        error: The exception to convert.
        error_type_map: Optional mapping from exception types to
            machine-readable names.  Defaults to :data:`ERROR_TYPES`.
        command: CLI subcommand that was running, if any.
        details: Additional context to attach to the payload.
        clock: Optional callable returning a :class:`~datetime.datetime`.
            Defaults to ``datetime.now(UTC)``.
    """
    now = clock() if clock is not None else datetime.now(UTC)
    return ErrorPayload(
        error_type=error_type_of(error, error_type_map),
        message=str(error),
        command=command,
        timestamp=now.isoformat(),
        details=details or {},
    )

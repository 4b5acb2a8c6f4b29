"""Exact finite-horizon Laplace transforms of summed squares.

For ``X ~ N(m_t, K_t)`` of length ``t``::

    log E[exp(−α Σ X_s²)] = −½ log det(I + 2αK_t) − α m_t* (I + 2αK_t)⁻¹ m_t

Everything is returned in the log domain: ``L_t`` underflows long before
the horizons where the limit becomes visible.

Conditioning on ``X_0 = x`` zeroes row and column 0 of the covariance, so
``I + 2αK•_t`` is block diagonal with a leading ``1`` and the same formula
applied to ``(m_{x,t}, K•_t)`` yields the point-mass factor ``exp(−αx²)``
exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from gaussquare._errors import DomainError
from gaussquare._factorization import (
    factorize,
    log_det_via_pivots,
    pivot_scan,
    quad_form_via_pivots,
)
from gaussquare._kernels import FiniteLaw, KernelSpec, ProcessModel, condition_on_start

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class LogLaplace:
    """``log L_t(α)`` split into its determinant and mean parts."""

    t: int
    alpha: float
    det_part: float
    mean_part: float

    @property
    def log_value(self) -> float:
        return self.det_part + self.mean_part

    @property
    def scaled(self) -> float:
        """``(1/t) log L_t(α)``."""
        return self.log_value / self.t


def _check(alpha: float, t: int) -> None:
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)
    if t < 1:
        msg = f"t must be >= 1, got {t}"
        raise DomainError(msg)


def log_laplace_of_law(law: FiniteLaw, alpha: float) -> LogLaplace:
    """Evaluate the closed form on an explicit mean/covariance pair."""
    t = law.size
    _check(alpha, t)
    fact = factorize(np.eye(t) + 2.0 * alpha * law.covariance)
    return LogLaplace(
        t=t,
        alpha=alpha,
        det_part=-0.5 * log_det_via_pivots(fact),
        mean_part=-alpha * quad_form_via_pivots(fact, law.mean),
    )


def log_laplace(model: ProcessModel, alpha: float, t: int) -> LogLaplace:
    """``log L_t(α)`` for the unconditioned process."""
    _check(alpha, t)
    return log_laplace_of_law(model.finite_law(t), alpha)


def log_laplace_conditioned(
    model: ProcessModel,
    x: float,
    alpha: float,
    t: int,
) -> LogLaplace:
    """``log L_{x,t}(α)`` given ``X_0 = x``.

    Raises:
        ZeroStartVarianceError: If ``K(0, 0)`` vanishes.
    """
    _check(alpha, t)
    return log_laplace_of_law(condition_on_start(model, x, t), alpha)


def scaled_log_laplace(model: ProcessModel, alpha: float, t: int) -> float:
    """``(1/t) log L_t(α)``."""
    return log_laplace(model, alpha, t).scaled


def scaled_log_laplace_conditioned(
    model: ProcessModel,
    x: float,
    alpha: float,
    t: int,
) -> float:
    """``(1/t) log L_{x,t}(α)``."""
    return log_laplace_conditioned(model, x, alpha, t).scaled


# ---------------------------------------------------------------------------
# Stationary split
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StationaryParts:
    """Finite-``t`` rates whose limits are ``ℓ0(α)`` and ``ℓ1(α)``.

    ``det_rate = (1/(2t)) log det(I + 2αH_t)`` and
    ``mean_rate = (α/t) c_t* (I + 2αH_t)⁻¹ c_t`` for the constant vector
    ``c_t = (m_∞, …, m_∞)``.
    """

    t: int
    alpha: float
    det_rate: float
    mean_rate: float


def stationary_parts(
    kernel: KernelSpec,
    m_inf: float,
    alpha: float,
    t: int,
) -> StationaryParts:
    """Both rates from the Toeplitz recursion, without a dense matrix."""
    _check(alpha, t)
    pivots, totals = pivot_scan(kernel, alpha, t)
    det_rate = -float(np.log(pivots).sum()) / (2.0 * t)
    mean_rate = alpha * m_inf * m_inf * float((totals**2 / pivots).sum()) / t
    logger.debug(
        "Stationary rates",
        extra={"context": {"t": t, "alpha": alpha, "det_rate": det_rate}},
    )
    return StationaryParts(t=t, alpha=alpha, det_rate=det_rate, mean_rate=mean_rate)

"""Closed forms for the Gauss-Markov (AR(1)) case.

With ``k(t) = θ^|t| / (1 − θ²)`` the integrand ``log(1 + 2αf)`` factors
through the quadratic ``ζ² − (θ + 1/θ + 2α/θ)ζ + 1`` whose roots satisfy
``0 < |ζ⁻| < 1 < |ζ⁺|``, giving

- ``ℓ0(α) = ½ log(θζ⁺)
         = ½ log(½(θ² + 1 + 2α + √(((θ+1)² + 2α)((θ−1)² + 2α))))``
- ``ℓ1(α) = m_∞² α (1 − θ)² / ((1 − θ)² + 2α)``

The radical form is valid at ``θ = 0``; the root form is not, and the
functions here route accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gaussquare._errors import DomainError


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)


def _check_theta(theta: float, *, allow_zero: bool) -> None:
    if not (math.isfinite(theta) and abs(theta) < 1.0):
        msg = f"theta must satisfy |theta| < 1, got {theta!r}"
        raise DomainError(msg)
    if theta == 0.0 and not allow_zero:
        msg = "theta = 0 has no root form; use the radical form"
        raise DomainError(msg)


@dataclass(frozen=True, slots=True)
class AR1Limit:
    theta: float
    alpha: float
    zeta_minus: float
    zeta_plus: float
    ell0: float
    ell1: float

    @property
    def ell(self) -> float:
        return self.ell0 + self.ell1


def ar1_roots(theta: float, alpha: float) -> tuple[float, float]:
    """``(ζ⁻, ζ⁺)``; the large root by the quadratic formula, the small by ``1/ζ⁺``."""
    _check_theta(theta, allow_zero=False)
    _check_alpha(alpha)
    b = theta + 1.0 / theta + 2.0 * alpha / theta
    large = 0.5 * (b + math.copysign(math.sqrt(b * b - 4.0), b))
    return 1.0 / large, large


def ar1_ell0(theta: float, alpha: float) -> float:
    """Radical form of ``ℓ0``; admits ``θ = 0``."""
    _check_theta(theta, allow_zero=True)
    _check_alpha(alpha)
    s = theta * theta + 1.0 + 2.0 * alpha
    upper = (theta + 1.0) ** 2 + 2.0 * alpha
    lower = (theta - 1.0) ** 2 + 2.0 * alpha
    return 0.5 * math.log(0.5 * (s + math.sqrt(upper * lower)))


def ar1_ell0_roots(theta: float, alpha: float) -> float:
    """Root form ``½ log(θζ⁺)``."""
    _, zeta_plus = ar1_roots(theta, alpha)
    return 0.5 * math.log(theta * zeta_plus)


def ar1_ell1(theta: float, m_inf: float, alpha: float) -> float:
    _check_theta(theta, allow_zero=True)
    _check_alpha(alpha)
    gap = (1.0 - theta) ** 2
    return m_inf * m_inf * alpha * gap / (gap + 2.0 * alpha)


def ar1_limit(theta: float, alpha: float, m_inf: float = 0.0) -> AR1Limit:
    zeta_minus, zeta_plus = ar1_roots(theta, alpha)
    return AR1Limit(
        theta=theta,
        alpha=alpha,
        zeta_minus=zeta_minus,
        zeta_plus=zeta_plus,
        ell0=ar1_ell0(theta, alpha),
        ell1=ar1_ell1(theta, m_inf, alpha),
    )


def ar1_limit_laplace(theta: float, alpha: float) -> float:
    """``e^{−ℓ0(α)}`` as the Laplace transform of the limit density.

    ``(√((1+|θ|)² + 2α) − √((1−|θ|)² + 2α)) / (2|θ|)``, for ``θ ≠ 0``.
    """
    _check_theta(theta, allow_zero=False)
    _check_alpha(alpha)
    a = abs(theta)
    upper = math.sqrt((1.0 + a) ** 2 + 2.0 * alpha)
    lower = math.sqrt((1.0 - a) ** 2 + 2.0 * alpha)
    return (upper - lower) / (2.0 * a)

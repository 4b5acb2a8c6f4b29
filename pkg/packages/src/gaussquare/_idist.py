"""Infinitely divisible structure of ``Σ X_s²``.

Rotating ``X ~ N(m, K)`` onto the eigenvectors of ``K = QΛQ*`` turns the
sum of squares into independent terms ``(μ_j + √v_j Z_j)²`` with
``v_j = Λ_j`` and ``μ_j = (Q*m)_j``.  Each term's Laplace transform is

    (1 + 2αv)^{−1/2} · exp(−μ²α / (1 + 2αv))

i.e. a Gamma(½, scale 2v) variable plus a Poisson compound of
exponentials with mean ``2v`` and Poisson rate ``μ²/(2v)``.  Eigenvalues
at numerical zero leave the deterministic shift ``μ²``.

The limit law ``e^{−ℓ}`` splits the same way into ``e^{−ℓ0}`` (a limit of
Gamma convolutions) and a compound Poisson factor with exponential mean
``2f(λ*)`` and rate ``m_∞² / (2f(λ*))``.  For the AR(1) kernel the
``e^{−ℓ0}`` factor has the explicit density :func:`ar1_limit_density`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh

from gaussquare._ar1oracle import ar1_limit_laplace
from gaussquare._errors import (
    DegenerateSpectrumError,
    DomainError,
    InvariantViolationError,
    NotPositiveSemidefiniteError,
)
from gaussquare._kernels import (
    FiniteLaw,
    KernelSpec,
    MeanSpec,
    ProcessModel,
    spectral_density,
)
from gaussquare._limits import DEFAULT_NODES, ell0, ell1

logger = logging.getLogger(__name__)

#: Largest horizon :func:`decompose` accepts.
MAX_DECOMPOSE = 256
EIGEN_TOL = 1e-12
NEGATIVE_TOL = 1e-9

_SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class GammaComponent:
    kind: ClassVar[str] = "gamma"

    shape: float
    scale: float
    index: int

    def log_laplace(self, alpha: float) -> float:
        return -self.shape * math.log1p(alpha * self.scale)

    def root(self, n: float) -> GammaComponent:
        return replace(self, shape=self.shape / n)


@dataclass(frozen=True, slots=True)
class CompoundPoissonComponent:
    """Poisson(``rate``) sum of exponentials with mean ``exp_mean``."""

    kind: ClassVar[str] = "compound_poisson"

    rate: float
    exp_mean: float
    index: int

    def log_laplace(self, alpha: float) -> float:
        am = alpha * self.exp_mean
        return -self.rate * am / (1.0 + am)

    def root(self, n: float) -> CompoundPoissonComponent:
        return replace(self, rate=self.rate / n)


@dataclass(frozen=True, slots=True)
class DeterministicComponent:
    kind: ClassVar[str] = "deterministic"

    shift: float
    index: int

    def log_laplace(self, alpha: float) -> float:
        return -alpha * self.shift

    def root(self, n: float) -> DeterministicComponent:
        return replace(self, shift=self.shift / n)


IDComponent = GammaComponent | CompoundPoissonComponent | DeterministicComponent


@dataclass(frozen=True, slots=True)
class IDDecomposition:
    """Independent components whose Laplace transforms multiply to ``L_t``."""

    t: int
    components: tuple[IDComponent, ...]

    def log_laplace(self, alpha: float) -> float:
        return math.fsum(c.log_laplace(alpha) for c in self.components)

    def root(self, n: float) -> IDDecomposition:
        """Components of ``L_t^{1/n}``."""
        if not n > 0:
            msg = f"root order must be positive, got {n!r}"
            raise DomainError(msg)
        return IDDecomposition(self.t, tuple(c.root(n) for c in self.components))

    def count(self, kind: str) -> int:
        return sum(1 for c in self.components if c.kind == kind)


def decompose_law(law: FiniteLaw) -> IDDecomposition:
    """Decompose an explicit mean/covariance pair.

    Raises:
        NotPositiveSemidefiniteError: If ``min Λ < −1e-9 · max Λ``.
    """
    eigenvalues, vectors = eigh(law.covariance)
    scale = max(float(np.abs(eigenvalues).max()), np.finfo(np.float64).tiny)
    if float(eigenvalues.min()) < -NEGATIVE_TOL * scale:
        msg = f"covariance has eigenvalue {float(eigenvalues.min()):.3e}"
        raise NotPositiveSemidefiniteError(msg)

    mu_sq = (vectors.T @ law.mean) ** 2
    components: list[IDComponent] = []
    for j, (v, m2) in enumerate(zip(eigenvalues, mu_sq, strict=True)):
        if v > EIGEN_TOL * scale:
            components.append(GammaComponent(shape=0.5, scale=2.0 * float(v), index=j))
            if m2 > 0.0:
                components.append(
                    CompoundPoissonComponent(
                        rate=float(m2) / (2.0 * float(v)),
                        exp_mean=2.0 * float(v),
                        index=j,
                    )
                )
        elif m2 > 0.0:
            components.append(DeterministicComponent(shift=float(m2), index=j))
    return IDDecomposition(t=law.size, components=tuple(components))


def decompose(model: ProcessModel, t: int) -> IDDecomposition:
    """Decompose the law of ``Σ_{s<t} X_s²``.

    Raises:
        DomainError: If ``t`` is outside ``[1, 256]``.
    """
    if not 1 <= t <= MAX_DECOMPOSE:
        msg = f"decompose requires 1 <= t <= {MAX_DECOMPOSE}, got {t}"
        raise DomainError(msg)
    result = decompose_law(model.finite_law(t))
    logger.debug(
        "Decomposed",
        extra={"context": {"t": t, "components": len(result.components)}},
    )
    return result


# ---------------------------------------------------------------------------
# Limit law
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LimitComponents:
    """Parameters of the two factors of ``e^{−ℓ(α)}``.

    ``thorin_log_laplace`` is ``−ℓ0(α_probe)``, the log-Laplace of the
    Thorin-class factor; ``compound`` is ``None`` when ``m_∞ = 0``.
    """

    alpha_probe: float
    thorin_log_laplace: float
    compound: CompoundPoissonComponent | None
    ell1: float


def limit_components(
    kernel: KernelSpec,
    mean: MeanSpec,
    alpha_probe: float,
    nodes: int = DEFAULT_NODES,
) -> LimitComponents:
    """Report the limit factors and check the compound factor reproduces ``ℓ1``.

    Raises:
        DegenerateSpectrumError: If ``f(λ*) = 0`` while ``m_∞ ≠ 0``.
        InvariantViolationError: If the compound factor disagrees with ``ℓ1``.
    """
    value1 = ell1(kernel, mean, alpha_probe)
    compound = None
    if mean.m_inf != 0.0:
        f = spectral_density(kernel, mean.frequency)
        if f <= 0.0:
            msg = f"f({mean.frequency:.6g}) = {f!r} with m_inf = {mean.m_inf!r}"
            raise DegenerateSpectrumError(msg)
        compound = CompoundPoissonComponent(
            rate=mean.m_inf * mean.m_inf / (2.0 * f),
            exp_mean=2.0 * f,
            index=0,
        )
        mismatch = abs(-compound.log_laplace(alpha_probe) - value1)
        if mismatch > 1e-12 * max(1.0, value1):
            msg = f"compound factor misses ell1 by {mismatch:.3e}"
            raise InvariantViolationError(msg)
    return LimitComponents(
        alpha_probe=alpha_probe,
        thorin_log_laplace=-ell0(kernel, alpha_probe, nodes),
        compound=compound,
        ell1=value1,
    )


# ---------------------------------------------------------------------------
# AR(1) limit density
# ---------------------------------------------------------------------------


def _check_theta(theta: float) -> None:
    if not (math.isfinite(theta) and 0.0 < abs(theta) < 1.0):
        msg = f"theta must satisfy 0 < |theta| < 1, got {theta!r}"
        raise DomainError(msg)


def _density(a: float, x: float) -> float:
    y = a * x
    decay = -0.5 * (1.0 + a * a) * x
    if y < 1e-4:
        return math.exp(decay) / (_SQRT_2PI * math.sqrt(x)) * (1.0 + y * y / 6.0)
    # sinh(y) = e^y (1 − e^{−2y}) / 2, kept in the exponent for large x
    return (
        math.exp(decay + y) * -math.expm1(-2.0 * y) / (2.0 * _SQRT_2PI * a * x**1.5)
    )


def ar1_limit_density(theta: float, x: float) -> float:
    """Density of the ``e^{−ℓ0}`` factor for the AR(1) kernel.

    ``f_0(x) = e^{−(1+θ²)x/2} (2π)^{−1/2} |θ|^{−1} x^{−3/2} sinh(|θ|x)``

    Raises:
        DomainError: If ``x <= 0`` or ``θ ∉ (−1, 0) ∪ (0, 1)``.
    """
    _check_theta(theta)
    if not (math.isfinite(x) and x > 0.0):
        msg = f"x must be positive and finite, got {x!r}"
        raise DomainError(msg)
    return _density(abs(theta), x)


@dataclass(frozen=True, slots=True)
class DensityCheck:
    theta: float
    alpha: float
    integral: float
    closed_form: float
    abs_error: float
    tail_bound: float
    cutoff: float


def _tail_bound(a: float, alpha: float, cutoff: float) -> float:
    # f_0(x) e^{−αx} <= x^{−3/2} e^{−cx} / (2a√(2π)) on x >= cutoff
    rate = alpha + 0.5 * (1.0 - a) ** 2
    return math.exp(-rate * cutoff) / (2.0 * a * _SQRT_2PI * cutoff**1.5 * rate)


def density_laplace_check(
    theta: float,
    alpha: float,
    *,
    tail_tol: float = 1e-10,
) -> DensityCheck:
    """Integrate ``e^{−αx} f_0(x)`` and compare with the closed form.

    The integral runs over ``[0, X]`` in ``x = u²`` (removing the
    ``x^{−1/2}`` edge), with ``X`` doubled until the exponential tail bound
    drops below ``tail_tol``.
    """
    _check_theta(theta)
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)
    a = abs(theta)
    cutoff = 50.0
    while _tail_bound(a, alpha, cutoff) > tail_tol:
        cutoff *= 2.0

    def integrand(u: float) -> float:
        if u == 0.0:
            return 2.0 / _SQRT_2PI
        x = u * u
        return 2.0 * u * math.exp(-alpha * x) * _density(a, x)

    edges = [0.0, 1.0]
    while edges[-1] * 2.0 < math.sqrt(cutoff):
        edges.append(edges[-1] * 2.0)
    edges.append(math.sqrt(cutoff))
    integral = math.fsum(
        quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-10, limit=200)[0]
        for lo, hi in zip(edges, edges[1:], strict=False)
    )
    closed = ar1_limit_laplace(theta, alpha)
    return DensityCheck(
        theta=theta,
        alpha=alpha,
        integral=integral,
        closed_form=closed,
        abs_error=abs(integral - closed),
        tail_bound=_tail_bound(a, alpha, cutoff),
        cutoff=cutoff,
    )

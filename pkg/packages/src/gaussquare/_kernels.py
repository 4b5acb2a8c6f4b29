"""Stationary covariance kernels, mean sequences and process models.

A :class:`KernelSpec` is a summable, positive definite, symmetric
function ``k`` on the integers together with its spectral density
``f(λ) = Σ_t e^{iλt} k(t)``, the symbol of the Toeplitz operator.  Four
kinds are constructible:

- ``white`` — ``k = δ₀``, ``f ≡ 1``
- ``ar1`` — ``k(t) = θ^|t| / (1 − θ²)``, ``f(λ) = 1 / (1 + θ² − 2θ cos λ)``
- ``ma`` — ``k(h) = Σ_j b_j b_{j+|h|}`` for coefficients ``b``
- ``table`` — an explicit finite symmetric list ``k(0..T)``

A :class:`ProcessModel` joins a :class:`MeanSpec` and a kernel, plus an
optional separable perturbation ``P(s, r) = c ρ^s ρ^r``, so that
``K(s, r) = k(r − s) + P(s, r)``.  All indices are nonnegative.

All types are immutable; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.linalg import toeplitz as dense_toeplitz

from gaussquare._errors import ModelError, ZeroStartVarianceError

FloatArray = npt.NDArray[np.float64]

KernelKind = Literal["white", "ar1", "ma", "table"]
MeanKind = Literal["constant", "alternating", "decaying"]

#: Grid size of the positive-definiteness proxy ``f ≥ 0``.
DENSITY_GRID = 4096

#: ``K(0, 0)`` at or below this is treated as a deterministic start.
START_VARIANCE_TOL = 1e-12


def frequency_grid(nodes: int = DENSITY_GRID) -> FloatArray:
    """Uniform periodic grid ``2πj/nodes``, ``j = 0..nodes−1``."""
    return 2.0 * np.pi * np.arange(nodes, dtype=np.float64) / nodes


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class KernelSpec:
    """Stationary covariance function with its spectral density.

    Build instances with :meth:`white`, :meth:`ar1`, :meth:`ma` or
    :meth:`table` rather than the raw constructor.

    Raises:
        ModelError: On out-of-range parameters, or when a ``table`` / ``ma``
            symbol is negative somewhere on the 4096-point frequency grid.
    """

    kind: KernelKind
    theta: float = 0.0
    coeffs: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    support: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        support: tuple[float, ...]
        match self.kind:
            case "white":
                support = (1.0,)
            case "ar1":
                if not math.isfinite(self.theta) or abs(self.theta) >= 1.0:
                    msg = f"ar1 requires |theta| < 1, got {self.theta!r}"
                    raise ModelError(msg)
                support = ()
            case "ma":
                if not self.coeffs:
                    msg = "ma kernel needs at least one coefficient"
                    raise ModelError(msg)
                b = np.asarray(self.coeffs, dtype=np.float64)
                q = b.size
                support = tuple(
                    float(np.dot(b[: q - h], b[h:])) for h in range(q)
                )
            case "table":
                if not self.values:
                    msg = "table kernel needs at least k(0)"
                    raise ModelError(msg)
                support = tuple(float(v) for v in self.values)
            case _:
                msg = f"unknown kernel kind {self.kind!r}"
                raise ModelError(msg)

        if support and not np.all(np.isfinite(support)):
            msg = f"{self.kind} kernel has non-finite entries"
            raise ModelError(msg)
        if support and support[0] <= 0.0:
            msg = f"{self.kind} kernel needs k(0) > 0, got {support[0]!r}"
            raise ModelError(msg)
        object.__setattr__(self, "support", support)

        if self.kind == "table":
            f = self.spectral_density(frequency_grid())
            if float(f.min()) < -1e-12 * support[0]:
                msg = (
                    "table kernel is not positive definite: "
                    f"min f = {float(f.min())!r} on the {DENSITY_GRID}-point grid"
                )
                raise ModelError(msg)

    # -- constructors ----------------------------------------------------

    @classmethod
    def white(cls) -> KernelSpec:
        return cls(kind="white")

    @classmethod
    def ar1(cls, theta: float) -> KernelSpec:
        return cls(kind="ar1", theta=float(theta))

    @classmethod
    def ma(cls, coeffs: list[float] | tuple[float, ...]) -> KernelSpec:
        return cls(kind="ma", coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def table(cls, values: list[float] | tuple[float, ...]) -> KernelSpec:
        return cls(kind="table", values=tuple(float(v) for v in values))

    # -- covariance ------------------------------------------------------

    def autocovariance(self, lags: npt.ArrayLike) -> FloatArray:
        """Vectorized ``k(t)``; negative lags are folded by symmetry."""
        h = np.abs(np.asarray(lags, dtype=np.int64))
        if self.kind == "ar1":
            theta = self.theta
            return np.power(theta, h).astype(np.float64) / (1.0 - theta * theta)
        table = np.asarray(self.support, dtype=np.float64)
        out = np.zeros(h.shape, dtype=np.float64)
        inside = h < table.size
        out[inside] = table[h[inside]]
        return out

    def k(self, t: int) -> float:
        """Scalar ``k(t)``."""
        return float(self.autocovariance(np.asarray([t]))[0])

    @property
    def variance(self) -> float:
        """``k(0)``."""
        return self.k(0)

    @property
    def abs_sum(self) -> float:
        """``M = Σ_t |k(t)|`` (hypothesis H3), exact per kind."""
        if self.kind == "ar1":
            a = abs(self.theta)
            return (1.0 / (1.0 - a * a)) * (1.0 + 2.0 * a / (1.0 - a))
        table = np.abs(np.asarray(self.support, dtype=np.float64))
        return float(table[0] + 2.0 * table[1:].sum())

    def tail_mass(self, lag: int) -> float:
        """``Σ_{|t| > lag} |k(t)|``."""
        if self.kind == "ar1":
            a = abs(self.theta)
            return 2.0 * a ** (lag + 1) / ((1.0 - a * a) * (1.0 - a))
        table = np.abs(np.asarray(self.support, dtype=np.float64))
        return float(2.0 * table[lag + 1 :].sum())

    # -- spectrum --------------------------------------------------------

    def spectral_density(self, lam: npt.ArrayLike) -> FloatArray:
        """Evaluate ``f(λ)``; closed form for white/ar1, cosine sum otherwise."""
        x = np.asarray(lam, dtype=np.float64)
        if self.kind == "white":
            return np.ones_like(x)
        if self.kind == "ar1":
            theta = self.theta
            return 1.0 / (1.0 + theta * theta - 2.0 * theta * np.cos(x))
        table = np.asarray(self.support, dtype=np.float64)
        lags = np.arange(1, table.size, dtype=np.float64)
        cosines = np.cos(np.multiply.outer(x, lags))
        return table[0] + 2.0 * (cosines @ table[1:])

    def cosine_sum(self, lam: npt.ArrayLike, lag: int) -> FloatArray:
        """Truncated ``k(0) + 2 Σ_{1≤t≤lag} k(t) cos(λt)`` for any kind."""
        x = np.asarray(lam, dtype=np.float64)
        lags = np.arange(1, lag + 1)
        weights = self.autocovariance(lags)
        return self.variance + 2.0 * (np.cos(np.multiply.outer(x, lags)) @ weights)

    def max_density(self) -> float:
        """``max_λ f(λ)``, closed form for ar1, grid maximum otherwise."""
        if self.kind == "ar1":
            return 1.0 / (1.0 - abs(self.theta)) ** 2
        return float(self.spectral_density(frequency_grid()).max())


def spectral_density(kernel: KernelSpec, lam: float) -> float:
    """Scalar ``f(λ)`` for ``λ ∈ [0, 2π]``."""
    return float(kernel.spectral_density(np.asarray([lam]))[0])


# ---------------------------------------------------------------------------
# Means
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MeanSpec:
    """Mean sequence ``m(t)`` for ``t ≥ 0``.

    - ``constant``: ``m(t) = m_∞``
    - ``alternating``: ``m(t) = (−1)^t m_∞``
    - ``decaying``: ``m(t) = m_∞ + c ρ^t`` with ``ρ ∈ (0, 1)``
    """

    kind: MeanKind = "constant"
    m_inf: float = 0.0
    c: float = 0.0
    rho: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "alternating", "decaying"):
            msg = f"unknown mean kind {self.kind!r}"
            raise ModelError(msg)
        if not (math.isfinite(self.m_inf) and math.isfinite(self.c)):
            msg = "mean parameters must be finite"
            raise ModelError(msg)
        if self.kind == "decaying" and not 0.0 < self.rho < 1.0:
            msg = f"decaying mean requires 0 < rho < 1, got {self.rho!r}"
            raise ModelError(msg)

    @classmethod
    def constant(cls, m_inf: float = 0.0) -> MeanSpec:
        return cls(kind="constant", m_inf=float(m_inf))

    @classmethod
    def alternating(cls, m_inf: float) -> MeanSpec:
        return cls(kind="alternating", m_inf=float(m_inf))

    @classmethod
    def decaying(cls, m_inf: float, c: float, rho: float) -> MeanSpec:
        return cls(kind="decaying", m_inf=float(m_inf), c=float(c), rho=float(rho))

    def values(self, t: int) -> FloatArray:
        """``(m(s))_{s<t}``."""
        s = np.arange(t)
        match self.kind:
            case "constant":
                return np.full(t, self.m_inf, dtype=np.float64)
            case "alternating":
                return np.where(s % 2 == 0, self.m_inf, -self.m_inf).astype(np.float64)
            case _:
                return self.m_inf + self.c * np.power(self.rho, s, dtype=np.float64)

    def m(self, s: int) -> float:
        """Scalar ``m(s)``."""
        return float(self.values(s + 1)[s])

    def target(self, t: int) -> FloatArray:
        """Asymptotic target sequence the mean approaches (H4 reference)."""
        if self.kind == "alternating":
            return self.values(t)
        return np.full(t, self.m_inf, dtype=np.float64)

    @property
    def frequency(self) -> float:
        """``λ*``: ``π`` for alternating means, ``0`` otherwise."""
        return math.pi if self.kind == "alternating" else 0.0

    @property
    def sup_abs(self) -> float:
        """``sup_{t≥0} |m(t)|`` (hypothesis H1)."""
        if self.kind == "decaying":
            return max(abs(self.m_inf + self.c), abs(self.m_inf))
        return abs(self.m_inf)


# ---------------------------------------------------------------------------
# Process models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Perturbation:
    """Separable covariance perturbation ``P(s, r) = c ρ^s ρ^r``."""

    c: float
    rho: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            msg = f"perturbation requires 0 < rho < 1, got {self.rho!r}"
            raise ModelError(msg)
        if not math.isfinite(self.c):
            msg = "perturbation scale must be finite"
            raise ModelError(msg)

    def matrix(self, t: int) -> FloatArray:
        u = np.power(self.rho, np.arange(t), dtype=np.float64)
        return self.c * np.outer(u, u)

    @property
    def abs_total(self) -> float:
        """``Σ_{s,r≥0} |P(s, r)|``."""
        return abs(self.c) / (1.0 - self.rho) ** 2


class FiniteLaw(NamedTuple):
    """Mean vector and covariance matrix of ``(X_s)_{s<t}``."""

    mean: FloatArray
    covariance: FloatArray

    @property
    def size(self) -> int:
        return int(self.mean.size)


@dataclass(frozen=True, slots=True)
class ProcessModel:
    """Gaussian process with mean ``m`` and covariance ``K = k + P``.

    The pair ``(mean.target, kernel)`` is the asymptotic stationary
    model that hypotheses H4 and H5 compare against.
    """

    mean: MeanSpec
    kernel: KernelSpec
    perturbation: Perturbation | None = None

    @classmethod
    def stationary(cls, kernel: KernelSpec, m_inf: float = 0.0) -> ProcessModel:
        return cls(mean=MeanSpec.constant(m_inf), kernel=kernel)

    @property
    def is_stationary(self) -> bool:
        return self.perturbation is None and self.mean.kind == "constant"

    def mean_vector(self, t: int) -> FloatArray:
        return self.mean.values(t)

    def covariance_matrix(self, t: int) -> FloatArray:
        """``K_t(s, r) = k(r − s) + P(s, r)``, exactly symmetric."""
        if t < 1:
            msg = f"t must be >= 1, got {t}"
            raise ModelError(msg)
        cov = dense_toeplitz(self.kernel.autocovariance(np.arange(t)))
        if self.perturbation is not None:
            cov = cov + self.perturbation.matrix(t)
        return 0.5 * (cov + cov.T)

    def covariance(self, s: int, r: int) -> float:
        value = self.kernel.k(r - s)
        if self.perturbation is not None:
            p = self.perturbation
            value += p.c * p.rho ** (s + r)
        return value

    def finite_law(self, t: int) -> FiniteLaw:
        return FiniteLaw(self.mean_vector(t), self.covariance_matrix(t))


def covariance_matrix(model: ProcessModel, t: int) -> FloatArray:
    """``K_t`` of *model*."""
    return model.covariance_matrix(t)


def condition_on_start(model: ProcessModel, x: float, t: int) -> FiniteLaw:
    """Law of ``(X_s)_{s<t}`` given ``X_0 = x``.

    ``m_x(s) = m(s) + K(0, s)/K(0, 0) · (x − m(0))`` and
    ``K•(s, r) = K(s, r) − K(s, 0) K(r, 0) / K(0, 0)``.  Row and column 0
    of ``K•`` are set to exactly zero, and ``m_x(0) = x`` exactly.

    Raises:
        ZeroStartVarianceError: If ``K(0, 0) ≤ 1e-12``.
    """
    law = model.finite_law(t)
    cov = law.covariance
    k00 = float(cov[0, 0])
    if k00 <= START_VARIANCE_TOL:
        msg = f"K(0,0) = {k00!r} leaves nothing to condition on"
        raise ZeroStartVarianceError(msg)

    weights = cov[0] / k00
    mean = law.mean + weights * (x - law.mean[0])
    mean[0] = x
    conditioned = cov - np.outer(cov[0], cov[0]) / k00
    conditioned[0, :] = 0.0
    conditioned[:, 0] = 0.0
    conditioned = 0.5 * (conditioned + conditioned.T)
    return FiniteLaw(mean, conditioned)


# ---------------------------------------------------------------------------
# Hypothesis diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class HypothesisReport:
    """Finite-``t`` readings of hypotheses H1–H5."""

    t: int
    sup_mean: float
    max_row_sum: float
    kernel_abs_sum: float
    mean_gap: float
    weak_gap: float


def hypothesis_report(model: ProcessModel, t: int) -> HypothesisReport:
    """Evaluate the five hypotheses at truncation ``t``; never raises on data."""
    if t < 1:
        msg = f"t must be >= 1, got {t}"
        raise ModelError(msg)
    mean = model.mean_vector(t)
    cov = model.covariance_matrix(t)
    stationary = dense_toeplitz(model.kernel.autocovariance(np.arange(t)))
    lags = np.arange(-t, t + 1)
    return HypothesisReport(
        t=t,
        sup_mean=float(np.abs(mean).max()),
        max_row_sum=float(np.abs(cov).sum(axis=1).max()),
        kernel_abs_sum=float(np.abs(model.kernel.autocovariance(lags)).sum()),
        mean_gap=float(np.abs(mean - model.mean.target(t)).sum() / t),
        weak_gap=float(np.abs(cov - stationary).sum() / t),
    )

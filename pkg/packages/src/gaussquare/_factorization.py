"""Unit-lower-triangular factorization of inverse covariance matrices.

For a positive definite ``A`` the coefficients ``G(τ, s)``, ``s ≤ τ``,
are fixed by the system

    Σ_{r≤τ} G(τ, r) A(r, s) = δ_{τ,s}     for all s ≤ τ,

and give ``A⁻¹ = G* D⁻¹ G`` with ``D = diag(G(τ, τ))``.  With the Cholesky
factor ``A = L L*`` one has ``G = diag(1/L(τ, τ)) L⁻¹``, so

- ``log det A = −Σ log G(τ, τ)``
- ``m* A⁻¹ m = Σ (1/G(τ, τ)) (Σ_r G(τ, r) m(r))² = ‖L⁻¹ m‖²``.

Two paths compute the reversed rows ``g_τ(s) = G(τ, τ − s)`` of
``I + 2αH_t``:

- **reference** — dense Cholesky of ``I + 2αH_t`` (O(t³));
- **levinson** — Durbin-Levinson recursion on the Toeplitz symbol
  ``a(j) = δ_{j,0} + 2α k(j)`` (O(t²)).  Row ``τ`` is the first column of
  the inverse of the leading ``(τ+1)``-block: ``g_τ(0) = 1/σ²_τ`` and
  ``g_τ(s) = −φ_{τ,s}/σ²_τ`` where ``φ_τ`` and ``σ²_τ`` are the order-``τ``
  prediction coefficients and error variance.

Degenerate coordinates (Cholesky pivot ``≤ 1e-12 · max diag``) are
flagged: their ``G`` row is the Kronecker row, their pivot is recorded as
``1`` and they contribute nothing to determinants or quadratic forms.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgError, cholesky, solve_triangular
from scipy.linalg import toeplitz as dense_toeplitz

from gaussquare._errors import (
    DomainError,
    FactorizationFailureError,
    NotPositiveSemidefiniteError,
    SizeMismatchError,
)
from gaussquare._kernels import FloatArray, KernelSpec

logger = logging.getLogger(__name__)

BoolArray = npt.NDArray[np.bool_]

#: Relative pivot level below which a coordinate is deterministic.
DEGENERATE_TOL = 1e-12
#: Relative pivot level below which a matrix is rejected as indefinite.
NEGATIVE_TOL = 1e-9

GRowsMethod = Literal["levinson", "reference"]


# ---------------------------------------------------------------------------
# Dense factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Factorization of a symmetric positive semidefinite matrix.

    Attributes:
        cholesky: Lower triangular ``L`` with ``A = L L*``; columns of
            degenerate coordinates are zero.
        pivots: ``G(τ, τ) = 1 / L(τ, τ)²``, or ``1`` on degenerate rows.
        degenerate: Mask of degenerate coordinates.
    """

    cholesky: FloatArray
    pivots: FloatArray
    degenerate: BoolArray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.pivots.size)

    @cached_property
    def _unit(self) -> FloatArray:
        """``L`` with each degenerate row replaced by the Kronecker row."""
        factor = self.cholesky.copy()
        for j in np.flatnonzero(self.degenerate):
            factor[j, :] = 0.0
            factor[:, j] = 0.0
            factor[j, j] = 1.0
        return factor

    def whitened(self, b: npt.ArrayLike) -> FloatArray:
        """Solve ``L w = b`` on the regularized factor (real or complex ``b``)."""
        rhs = np.asarray(b)
        if rhs.shape[0] != self.size:
            msg = f"vector of length {rhs.shape[0]} against size {self.size}"
            raise SizeMismatchError(msg)
        if np.iscomplexobj(rhs):
            return self.whitened(rhs.real) + 1j * self.whitened(rhs.imag)
        return solve_triangular(self._unit, rhs.astype(np.float64), lower=True)

    def solve(self, b: npt.ArrayLike) -> FloatArray:
        """Solve ``A u = b``.

        Raises:
            FactorizationFailureError: If ``A`` has degenerate coordinates.
        """
        if self.degenerate.any():
            msg = "cannot solve against a singular matrix"
            raise FactorizationFailureError(msg)
        w = self.whitened(b)
        if np.iscomplexobj(w):
            return self._back(w.real) + 1j * self._back(w.imag)
        return self._back(w)

    def _back(self, w: FloatArray) -> FloatArray:
        return solve_triangular(self._unit, w, lower=True, trans="T")

    def rows(self) -> FloatArray:
        """Dense ``G`` (row ``τ`` holds ``G(τ, 0..τ)``)."""
        eye = np.eye(self.size)
        inverse = solve_triangular(self._unit, eye, lower=True)
        return inverse / np.diag(self._unit)[:, None]


def _tolerant_cholesky(a: FloatArray, scale: float) -> tuple[FloatArray, BoolArray]:
    """Column Cholesky that skips (near-)zero pivots instead of failing."""
    n = a.shape[0]
    factor = np.zeros_like(a)
    degenerate = np.zeros(n, dtype=np.bool_)
    for j in range(n):
        head = factor[j, :j]
        d = a[j, j] - head @ head
        if d < -NEGATIVE_TOL * scale:
            msg = f"pivot {d:.3e} at coordinate {j} is negative"
            raise NotPositiveSemidefiniteError(msg)
        if d <= DEGENERATE_TOL * scale:
            degenerate[j] = True
            continue
        root = math.sqrt(d)
        factor[j, j] = root
        factor[j + 1 :, j] = (a[j + 1 :, j] - factor[j + 1 :, :j] @ head) / root
    return factor, degenerate


def factorize(matrix: npt.ArrayLike) -> Factorization:
    """Factorize a symmetric positive semidefinite matrix.

    Raises:
        SizeMismatchError: If the matrix is not square.
        FactorizationFailureError: If it is not symmetric.
        NotPositiveSemidefiniteError: If a pivot is below ``−1e-9 · max diag``.
    """
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        msg = f"expected a square matrix, got shape {a.shape}"
        raise SizeMismatchError(msg)
    scale = max(float(np.abs(np.diag(a)).max()), np.finfo(np.float64).tiny)
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * scale):
        msg = "matrix is not symmetric"
        raise FactorizationFailureError(msg)

    try:
        factor = cholesky(a, lower=True)
        if float(np.diag(factor).min()) ** 2 <= DEGENERATE_TOL * scale:
            raise LinAlgError("near-singular pivot")
        degenerate = np.zeros(a.shape[0], dtype=np.bool_)
    except LinAlgError:
        factor, degenerate = _tolerant_cholesky(a, scale)
        logger.debug(
            "Tolerant factorization",
            extra={
                "context": {"size": a.shape[0], "degenerate": int(degenerate.sum())}
            },
        )

    diag = np.diag(factor)
    pivots = np.ones_like(diag)
    live = ~degenerate
    pivots[live] = 1.0 / diag[live] ** 2
    return Factorization(cholesky=factor, pivots=pivots, degenerate=degenerate)


def log_det_via_pivots(fact: Factorization) -> float:
    """``log det A = −Σ log G(τ, τ)`` over non-degenerate rows."""
    return float(-np.log(fact.pivots[~fact.degenerate]).sum())


def quad_form_via_pivots(fact: Factorization, m: npt.ArrayLike) -> float:
    """``m* A⁻¹ m`` by the pivot formula; degenerate rows contribute 0."""
    w = fact.whitened(np.asarray(m, dtype=np.float64))
    return float((w[~fact.degenerate] ** 2).sum())


def innovations(fact: Factorization, y: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Partial innovations ``ν`` and filter variables ``μ`` of an observation.

    ``ν_τ = (1/G(τ, τ)) Σ_r G(τ, r) y_r`` has variance ``1/G(τ, τ)``;
    ``μ_τ = G(τ, τ) ν_τ`` has variance ``G(τ, τ)``.  *y* may also be a
    ``(t, n)`` block holding one observation per column.
    """
    w = fact.whitened(np.asarray(y, dtype=np.float64))
    diag = np.diag(fact._unit).reshape((-1,) + (1,) * (w.ndim - 1))
    return diag * w, w / diag


# ---------------------------------------------------------------------------
# Toeplitz rows g_τ(s)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class GtRow:
    """Reversed factorization row ``g_τ(s) = G(τ, τ − s)``, ``s = 0..τ``."""

    tau: int
    values: FloatArray

    @property
    def pivot(self) -> float:
        """``g_τ(0) = G(τ, τ)``."""
        return float(self.values[0])

    @property
    def total(self) -> float:
        """``Σ_s g_τ(s)``."""
        return float(self.values.sum())


@dataclass(frozen=True, slots=True)
class FilteringStats:
    """Pivot ``g(0)`` and filtering error ``E[(ε − μ)²] = 1 − g(0)``."""

    tau: int
    pivot: float
    error: float


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)


def _check_horizon(t: int) -> None:
    if t < 1:
        msg = f"t must be >= 1, got {t}"
        raise DomainError(msg)


def shifted_symbol(kernel: KernelSpec, alpha: float, t: int) -> FloatArray:
    """First row ``a(j) = δ_{j,0} + 2α k(j)`` of ``I + 2αH_t``."""
    a = 2.0 * alpha * kernel.autocovariance(np.arange(t))
    a[0] += 1.0
    return a


def shifted_toeplitz(kernel: KernelSpec, alpha: float, t: int) -> FloatArray:
    """Dense ``I + 2αH_t``."""
    return dense_toeplitz(shifted_symbol(kernel, alpha, t))


def _levinson(a: FloatArray, t: int) -> Iterator[tuple[FloatArray, float]]:
    """Yield ``(φ_τ, σ²_τ)`` for ``τ = 0..t−1`` (``φ_0`` is empty)."""
    phi = np.zeros(0)
    sigma = float(a[0])
    if sigma <= 0.0:
        msg = f"symbol has a(0) = {sigma!r}"
        raise FactorizationFailureError(msg)
    yield phi, sigma
    for n in range(1, t):
        kappa = (a[n] - phi @ a[n - 1 : 0 : -1]) / sigma
        phi = np.concatenate((phi - kappa * phi[::-1], [kappa]))
        sigma *= 1.0 - kappa * kappa
        if sigma <= 0.0:
            msg = f"prediction error variance vanished at order {n}"
            raise FactorizationFailureError(msg)
        yield phi, sigma


def _as_row(tau: int, phi: FloatArray, sigma: float) -> GtRow:
    return GtRow(tau=tau, values=np.concatenate(([1.0], -phi)) / sigma)


def g_rows(
    kernel: KernelSpec,
    alpha: float,
    t: int,
    *,
    method: GRowsMethod = "levinson",
) -> tuple[GtRow, ...]:
    """Rows ``g_τ``, ``τ = 0..t−1``, solving ``g + 2α H g = δ₀`` on ``[0, τ]``.

    An empty horizon gives an empty tuple.
    """
    _check_alpha(alpha)
    if t < 1:
        return ()
    if method == "reference":
        dense = factorize(shifted_toeplitz(kernel, alpha, t)).rows()
        return tuple(
            GtRow(tau=tau, values=dense[tau, tau::-1].copy()) for tau in range(t)
        )
    a = shifted_symbol(kernel, alpha, t)
    return tuple(
        _as_row(tau, phi, sigma) for tau, (phi, sigma) in enumerate(_levinson(a, t))
    )


def g_row(kernel: KernelSpec, alpha: float, tau: int) -> GtRow:
    """The single row ``g_τ`` in O(τ) memory."""
    _check_alpha(alpha)
    _check_horizon(tau + 1)
    a = shifted_symbol(kernel, alpha, tau + 1)
    phi, sigma = np.zeros(0), float(a[0])
    for phi, sigma in _levinson(a, tau + 1):  # noqa: B007
        pass
    return _as_row(tau, phi, sigma)


def pivot_log_sum(kernel: KernelSpec, alpha: float, t: int) -> float:
    """``Σ_{τ<t} log g_τ(0)``, which equals ``−log det(I + 2αH_t)``."""
    _check_alpha(alpha)
    _check_horizon(t)
    a = shifted_symbol(kernel, alpha, t)
    return -math.fsum(math.log(sigma) for _, sigma in _levinson(a, t))


def pivot_scan(
    kernel: KernelSpec, alpha: float, t: int
) -> tuple[FloatArray, FloatArray]:
    """Per-row ``g_τ(0)`` and ``Σ_s g_τ(s)`` for ``τ < t`` without storing rows."""
    _check_alpha(alpha)
    _check_horizon(t)
    a = shifted_symbol(kernel, alpha, t)
    pivots = np.empty(t)
    totals = np.empty(t)
    for tau, (phi, sigma) in enumerate(_levinson(a, t)):
        pivots[tau] = 1.0 / sigma
        totals[tau] = (1.0 - phi.sum()) / sigma
    return pivots, totals


def filtering_stats(kernel: KernelSpec, alpha: float, t: int) -> FilteringStats:
    """Pivot and filtering error of the last row ``τ = t − 1``.

    Raises:
        DomainError: If ``t < 1``.
        FactorizationFailureError: If the pivot leaves ``(0, 1]``.
    """
    _check_horizon(t)
    row = g_row(kernel, alpha, t - 1)
    pivot = row.pivot
    if not 0.0 < pivot <= 1.0 + 1e-12:
        msg = f"pivot {pivot!r} outside (0, 1]"
        raise FactorizationFailureError(msg)
    return FilteringStats(tau=t - 1, pivot=pivot, error=1.0 - pivot)

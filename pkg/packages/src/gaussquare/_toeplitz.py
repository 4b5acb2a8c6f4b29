"""Toeplitz matrices, strong/weak norms and asymptotic equivalence.

For a ``t × t`` matrix ``A``:

- strong norm ``‖A‖ = max_s Σ_r |A(s, r)|``
- weak norm ``|A| = (1/t) Σ_{s,r} |A(s, r)|``

Two sequences of matrices are asymptotically equivalent when both are
uniformly bounded in the strong norm and the weak norm of their
difference vanishes; vectors are compared by ``(1/t)‖v − w‖₁``.  The
functions here return the finite-``t`` gaps; tracking them over ``t`` is
the caller's job.  Complex vectors are measured entrywise by modulus.

See Also:
    :mod:`gaussquare._factorization` for the solver behind
    :func:`resolvent_apply`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.linalg import toeplitz as dense_toeplitz

from gaussquare._errors import DomainError, SizeMismatchError
from gaussquare._factorization import factorize, shifted_toeplitz
from gaussquare._kernels import FloatArray, KernelSpec, ProcessModel, condition_on_start

ComplexArray = npt.NDArray[np.complex128]


def toeplitz(kernel: KernelSpec, t: int) -> FloatArray:
    """``H_t(s, r) = k(s − r)``."""
    if t < 1:
        msg = f"t must be >= 1, got {t}"
        raise DomainError(msg)
    return dense_toeplitz(kernel.autocovariance(np.arange(t)))


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def _square(a: npt.ArrayLike) -> FloatArray:
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        msg = f"expected a square matrix, got shape {m.shape}"
        raise SizeMismatchError(msg)
    return m


def strong_norm(a: npt.ArrayLike) -> float:
    """Maximum absolute row sum."""
    m = _square(a)
    if m.size == 0:
        return 0.0
    return float(np.abs(m).sum(axis=1).max())


def weak_norm(a: npt.ArrayLike) -> float:
    """``(1/t) Σ |A(s, r)|``."""
    m = _square(a)
    if m.size == 0:
        return 0.0
    return float(np.abs(m).sum() / m.shape[0])


@dataclass(frozen=True, slots=True)
class NormReport:
    strong: float
    weak: float


def norm_report(a: npt.ArrayLike) -> NormReport:
    return NormReport(strong=strong_norm(a), weak=weak_norm(a))


# ---------------------------------------------------------------------------
# Equivalence gaps
# ---------------------------------------------------------------------------


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        msg = f"shapes {a.shape} and {b.shape} differ"
        raise SizeMismatchError(msg)


def equivalence_gap(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """``|A − B|``; check uniform boundedness with :func:`strong_norm`."""
    left, right = np.asarray(a), np.asarray(b)
    _same_shape(left, right)
    return weak_norm(left - right)


def vector_equivalence_gap(v: npt.ArrayLike, w: npt.ArrayLike) -> float:
    """``(1/t) Σ |v(s) − w(s)|``."""
    left, right = np.asarray(v), np.asarray(w)
    _same_shape(left, right)
    if left.size == 0:
        return 0.0
    return float(np.abs(left - right).mean())


def inner_product_gap(
    v: npt.ArrayLike,
    u: npt.ArrayLike,
    w: npt.ArrayLike,
    z: npt.ArrayLike,
) -> tuple[float, float]:
    """``(1/t)|v*u − w*z|`` and its bound ``(1/t)(‖v‖∞‖u − z‖₁ + ‖z‖∞‖v − w‖₁)``."""
    arrays = [np.asarray(x) for x in (v, u, w, z)]
    for other in arrays[1:]:
        _same_shape(arrays[0], other)
    vv, uu, ww, zz = arrays
    t = vv.size
    if t == 0:
        return 0.0, 0.0
    gap = abs(np.vdot(vv, uu) - np.vdot(ww, zz)) / t
    bound = (
        np.abs(vv).max() * np.abs(uu - zz).sum()
        + np.abs(zz).max() * np.abs(vv - ww).sum()
    ) / t
    return float(gap), float(bound)


def product_gap(
    a: npt.ArrayLike,
    b: npt.ArrayLike,
    c: npt.ArrayLike,
    d: npt.ArrayLike,
) -> tuple[float, float]:
    """``|AC − BD|`` and its bound ``|A − B|‖C‖ + ‖B‖|C − D|``."""
    aa, bb, cc, dd = (np.asarray(x) for x in (a, b, c, d))
    for other in (bb, cc, dd):
        _same_shape(aa, other)
    gap = weak_norm(aa @ cc - bb @ dd)
    bound = weak_norm(aa - bb) * strong_norm(cc) + strong_norm(bb) * weak_norm(cc - dd)
    return gap, bound


@dataclass(frozen=True, slots=True)
class ConditioningBounds:
    """Distance between the conditioned and unconditioned laws at ``t``."""

    t: int
    mean_gap: float
    mean_bound: float
    cov_gap: float
    cov_bound: float
    strong_conditioned: float
    strong_bound: float


def conditioning_bounds(model: ProcessModel, x: float, t: int) -> ConditioningBounds:
    """Compare ``(m_{x,t}, K•_t)`` with ``(m_t, K_t)``.

    Raises:
        ZeroStartVarianceError: As :func:`~gaussquare.condition_on_start`.
    """
    law = model.finite_law(t)
    conditioned = condition_on_start(model, x, t)
    k00 = float(law.covariance[0, 0])
    strong = strong_norm(law.covariance)
    sup_mean = float(np.abs(law.mean).max())
    return ConditioningBounds(
        t=t,
        mean_gap=vector_equivalence_gap(conditioned.mean, law.mean),
        mean_bound=(abs(x) + sup_mean) * strong / (t * k00),
        cov_gap=equivalence_gap(conditioned.covariance, law.covariance),
        cov_bound=strong * strong / (t * k00),
        strong_conditioned=strong_norm(conditioned.covariance),
        strong_bound=strong + strong * strong / k00,
    )


# ---------------------------------------------------------------------------
# Resolvent and eigen approximation
# ---------------------------------------------------------------------------


def resolvent_apply(
    kernel: KernelSpec,
    alpha: float,
    t: int,
    v: npt.ArrayLike,
) -> ComplexArray | FloatArray:
    """Solve ``(I + 2αH_t) u = v`` for real or complex ``v``.

    Raises:
        DomainError: If ``alpha`` is negative or not finite.
        SizeMismatchError: If ``len(v) != t``.
        FactorizationFailureError: If the shifted matrix is not positive
            definite (only possible for an invalid kernel table).
    """
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)
    rhs = np.asarray(v)
    if rhs.shape != (t,):
        msg = f"vector of shape {rhs.shape} for t = {t}"
        raise SizeMismatchError(msg)
    return factorize(shifted_toeplitz(kernel, alpha, t)).solve(rhs)


def fourier_vector(lam: float, t: int) -> ComplexArray:
    """``d_t^{(λ)} = (e^{−iλs})_{s<t}``."""
    return np.exp(-1j * lam * np.arange(t))


def eigen_approx_gap(kernel: KernelSpec, alpha: float, lam: float, t: int) -> float:
    """``(1/t)‖(I + 2αH_t)⁻¹d − (1 + 2αf(λ))⁻¹d‖₁`` for ``d = d_t^{(λ)}``."""
    d = fourier_vector(lam, t)
    exact = resolvent_apply(kernel, alpha, t, d)
    symbol = 1.0 / (1.0 + 2.0 * alpha * float(kernel.spectral_density(lam)))
    return vector_equivalence_gap(exact, symbol * d)

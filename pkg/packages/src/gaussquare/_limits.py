"""The limit ``ℓ(α) = ℓ0(α) + ℓ1(α)`` and the semi-infinite Wiener-Hopf system.

- ``ℓ0(α) = (1/4π) ∫₀^{2π} log(1 + 2αf(λ)) dλ`` by the periodic trapezoid
  rule, which is spectrally accurate for smooth symbols.
- ``ℓ1(α) = m_∞² α / (1 + 2αf(λ*))`` with ``λ* = π`` for an alternating
  mean and ``λ* = 0`` otherwise.

:func:`wiener_hopf` solves ``g(s) + 2α Σ_{r≥0} g(r) k(s − r) = δ_{s,0}``
as the limit of finite sections ``g_T``, doubling ``T`` until two
successive sections agree, and reports the closed forms

- ``g(0) = exp(−2ℓ0(α))``
- ``Σ_s g(s) = exp(−½ log(1 + 2αf(0)) − ℓ0(α))``
- ``(1/g(0)) (Σ_s g(s))² = (1 + 2αf(0))⁻¹``

The truncated solver is only justified for ``2αM < 1`` with
``M = Σ|k|``; ``ℓ0`` and ``ℓ1`` hold for every ``α ≥ 0``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.linalg import matmul_toeplitz

from gaussquare._errors import AlphaOutOfRangeError, DomainError, NoConvergenceError
from gaussquare._factorization import g_row
from gaussquare._kernels import (
    FloatArray,
    KernelSpec,
    MeanSpec,
    ProcessModel,
    frequency_grid,
    spectral_density,
)
from gaussquare._laplace import (
    scaled_log_laplace,
    scaled_log_laplace_conditioned,
    stationary_parts,
)

logger = logging.getLogger(__name__)

DEFAULT_NODES = 4096
WH_START = 256
WH_MAX = 2**15


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)


# ---------------------------------------------------------------------------
# ℓ0, ℓ1, ℓ
# ---------------------------------------------------------------------------


def ell0(kernel: KernelSpec, alpha: float, nodes: int = DEFAULT_NODES) -> float:
    """``(1/4π) ∫ log(1 + 2αf)`` on ``nodes`` uniform points."""
    _check_alpha(alpha)
    if nodes < 1:
        msg = f"nodes must be >= 1, got {nodes}"
        raise DomainError(msg)
    f = kernel.spectral_density(frequency_grid(nodes))
    return 0.5 * float(np.log1p(2.0 * alpha * f).mean())


def ell1(kernel: KernelSpec, mean: MeanSpec, alpha: float) -> float:
    _check_alpha(alpha)
    f = spectral_density(kernel, mean.frequency)
    return mean.m_inf * mean.m_inf * alpha / (1.0 + 2.0 * alpha * f)


@dataclass(frozen=True, slots=True)
class LimitResult:
    """``ℓ0``, ``ℓ1`` and their sum at one ``α``.

    ``quadrature_delta`` is ``|ℓ0(N) − ℓ0(2N)|``, the node-doubling check.
    """

    alpha: float
    ell0: float
    ell1: float
    nodes: int
    mean_frequency: float
    quadrature_delta: float

    @property
    def ell(self) -> float:
        return self.ell0 + self.ell1


def limit(
    kernel: KernelSpec,
    mean: MeanSpec,
    alpha: float,
    nodes: int = DEFAULT_NODES,
) -> LimitResult:
    value0 = ell0(kernel, alpha, nodes)
    return LimitResult(
        alpha=alpha,
        ell0=value0,
        ell1=ell1(kernel, mean, alpha),
        nodes=nodes,
        mean_frequency=mean.frequency,
        quadrature_delta=abs(value0 - ell0(kernel, alpha, 2 * nodes)),
    )


# ---------------------------------------------------------------------------
# Wiener-Hopf
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WienerHopfSolution:
    """Converged finite section ``g_T`` with its closed-form counterparts.

    Attributes:
        truncation: ``T``; ``values`` holds ``g(0..T)``.
        abs_sum: ``M = Σ|k|``.
        residual: Max residual of the truncated system on ``s = 0..T``.
        tail_bound: ``(2αM / (1 − 2αM)) · |Σg_T − Σg_{T/2}|``.
    """

    alpha: float
    truncation: int
    values: FloatArray
    g0_closed: float
    sum_closed: float
    ratio_closed: float
    abs_sum: float
    residual: float
    tail_bound: float

    @property
    def g0(self) -> float:
        return float(self.values[0])

    @property
    def total(self) -> float:
        return float(self.values.sum())

    @property
    def ratio(self) -> float:
        """``(1/g(0)) (Σg)²``."""
        return self.total**2 / self.g0


def _section_residual(kernel: KernelSpec, alpha: float, values: FloatArray) -> float:
    k = kernel.autocovariance(np.arange(values.size))
    lhs = values + 2.0 * alpha * matmul_toeplitz((k, k), values)
    lhs[0] -= 1.0
    return float(np.abs(lhs).max())


def wiener_hopf(
    kernel: KernelSpec,
    alpha: float,
    tol: float = 1e-8,
    *,
    nodes: int = DEFAULT_NODES,
    start: int = WH_START,
    max_truncation: int = WH_MAX,
) -> WienerHopfSolution:
    """Solve the semi-infinite system by truncation doubling.

    Raises:
        AlphaOutOfRangeError: If ``2αM >= 1``.
        NoConvergenceError: If the truncation would exceed ``max_truncation``.
    """
    _check_alpha(alpha)
    abs_sum = kernel.abs_sum
    contraction = 2.0 * alpha * abs_sum
    if contraction >= 1.0:
        msg = f"2*alpha*M = {contraction:.6g} >= 1 (alpha={alpha}, M={abs_sum:.6g})"
        raise AlphaOutOfRangeError(msg)

    truncation = start
    previous = g_row(kernel, alpha, truncation)
    while True:
        if 2 * truncation > max_truncation:
            msg = f"no convergence within truncation {max_truncation} (tol={tol})"
            raise NoConvergenceError(msg)
        truncation *= 2
        current = g_row(kernel, alpha, truncation)
        delta_g0 = abs(current.pivot - previous.pivot)
        delta_sum = abs(current.total - previous.total)
        logger.debug(
            "Wiener-Hopf doubling",
            extra={
                "context": {
                    "truncation": truncation,
                    "delta_g0": delta_g0,
                    "delta_sum": delta_sum,
                }
            },
        )
        if delta_g0 < tol and delta_sum < tol:
            break
        previous = current

    value0 = ell0(kernel, alpha, nodes)
    f0 = spectral_density(kernel, 0.0)
    return WienerHopfSolution(
        alpha=alpha,
        truncation=truncation,
        values=current.values,
        g0_closed=math.exp(-2.0 * value0),
        sum_closed=math.exp(-0.5 * math.log1p(2.0 * alpha * f0) - value0),
        ratio_closed=1.0 / (1.0 + 2.0 * alpha * f0),
        abs_sum=abs_sum,
        residual=_section_residual(kernel, alpha, current.values),
        tail_bound=contraction / (1.0 - contraction) * delta_sum,
    )


# ---------------------------------------------------------------------------
# Convergence harnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ConvergenceRow:
    """One horizon of a convergence run.

    ``unconditioned_gap`` is set only for conditioned runs.
    """

    t: int
    scaled_log_laplace: float
    neg_ell: float
    abs_error: float
    unconditioned_gap: float | None = None


def _check_grid(t_grid: Sequence[int]) -> None:
    if not t_grid:
        msg = "t grid is empty"
        raise DomainError(msg)
    ascending = all(b > a for a, b in zip(t_grid, t_grid[1:], strict=False))
    if t_grid[0] < 1 or not ascending:
        msg = f"t grid must be strictly ascending positive integers, got {list(t_grid)}"
        raise DomainError(msg)


def convergence_table(
    model: ProcessModel,
    alpha: float,
    t_grid: Sequence[int],
    *,
    x: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> list[ConvergenceRow]:
    """``e_t = |(1/t) log L_t(α) + ℓ(α)|`` over ``t_grid``, in grid order.

    With ``x`` set, rows use the conditioned transform ``L_{x,t}`` and also
    report its distance to the unconditioned one.
    """
    _check_grid(t_grid)
    neg_ell = -limit(model.kernel, model.mean, alpha, nodes).ell
    rows: list[ConvergenceRow] = []
    for t in t_grid:
        plain = scaled_log_laplace(model, alpha, t)
        if x is None:
            value, gap = plain, None
        else:
            value = scaled_log_laplace_conditioned(model, x, alpha, t)
            gap = abs(value - plain)
        rows.append(
            ConvergenceRow(
                t=t,
                scaled_log_laplace=value,
                neg_ell=neg_ell,
                abs_error=abs(value - neg_ell),
                unconditioned_gap=gap,
            )
        )
        logger.debug(
            "Convergence row",
            extra={
                "context": {"t": t, "alpha": alpha, "abs_error": rows[-1].abs_error}
            },
        )
    return rows


@dataclass(frozen=True, slots=True)
class StationaryRow:
    t: int
    det_rate: float
    ell0: float
    mean_rate: float
    ell1: float


def stationary_table(
    kernel: KernelSpec,
    m_inf: float,
    alpha: float,
    t_grid: Sequence[int],
    *,
    nodes: int = DEFAULT_NODES,
) -> list[StationaryRow]:
    """Track ``det_rate → ℓ0`` and ``mean_rate → ℓ1`` for a constant mean."""
    _check_grid(t_grid)
    result = limit(kernel, MeanSpec.constant(m_inf), alpha, nodes)
    rows = []
    for t in t_grid:
        parts = stationary_parts(kernel, m_inf, alpha, t)
        rows.append(
            StationaryRow(
                t=t,
                det_rate=parts.det_rate,
                ell0=result.ell0,
                mean_rate=parts.mean_rate,
                ell1=result.ell1,
            )
        )
    return rows

"""Tests for gaussquare._limits — ℓ0, ℓ1, Wiener-Hopf and convergence runs.

Test Techniques Used:
    - Specification-based Testing: white-noise and AR(1) worked values
    - Oracle Testing: truncated Wiener-Hopf sections against closed forms
    - Error Condition Testing: alpha out of range, non-convergence, bad grids
    - Convergence Testing: errors shrinking along a horizon grid
    - Property-based Testing: bounds on ℓ0, convexity and monotonicity of −ℓ
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussquare._errors import AlphaOutOfRangeError, DomainError, NoConvergenceError
from gaussquare._factorization import filtering_stats, pivot_log_sum
from gaussquare._kernels import KernelSpec, MeanSpec, ProcessModel
from gaussquare._limits import (
    convergence_table,
    ell0,
    ell1,
    limit,
    stationary_table,
    wiener_hopf,
)

pytestmark = pytest.mark.unit


class TestEll0:
    """Trapezoid quadrature of ``log(1 + 2αf)``.

    Technique: Specification-based Testing.
    """

    def test_white(self) -> None:
        assert ell0(KernelSpec.white(), 0.5) == pytest.approx(0.5 * math.log(2.0))

    def test_ar1(self) -> None:
        assert ell0(KernelSpec.ar1(0.5), 0.5) == pytest.approx(0.3787, abs=1e-4)

    def test_alpha_zero(self) -> None:
        assert ell0(KernelSpec.ma([1.0, 0.3]), 0.0) == 0.0

    def test_node_count_validated(self) -> None:
        with pytest.raises(DomainError, match="nodes"):
            ell0(KernelSpec.white(), 0.5, 0)

    @pytest.mark.parametrize("alpha", [-1.0, math.nan])
    def test_alpha_validated(self, alpha: float) -> None:
        with pytest.raises(DomainError, match="alpha"):
            ell0(KernelSpec.white(), alpha)

    @given(theta=st.floats(-0.9, 0.9), alpha=st.floats(0.0, 5.0))
    @settings(max_examples=50, deadline=None)
    def test_bounded_by_peak_density(self, theta: float, alpha: float) -> None:
        kernel = KernelSpec.ar1(theta)
        value = ell0(kernel, alpha)
        assert value >= 0.0
        assert value <= 0.5 * math.log1p(2.0 * alpha * kernel.max_density()) + 1e-12


class TestEll1:
    """Mean contribution at ``λ* = 0`` or ``π``.

    Technique: Specification-based Testing.
    """

    def test_constant_mean(self) -> None:
        value = ell1(KernelSpec.ar1(0.5), MeanSpec.constant(1.0), 0.5)
        assert value == pytest.approx(0.1)

    def test_alternating_mean(self) -> None:
        value = ell1(KernelSpec.ar1(0.5), MeanSpec.alternating(1.0), 0.5)
        assert value == pytest.approx(0.5 / (1.0 + 1.0 / 2.25))
        assert value == pytest.approx(0.34615, abs=1e-5)

    def test_zero_mean(self) -> None:
        assert ell1(KernelSpec.ar1(0.5), MeanSpec.constant(0.0), 0.5) == 0.0


class TestLimit:
    """Assembled ``ℓ = ℓ0 + ℓ1``.

    Technique: Specification-based Testing.
    """

    def test_white_row(self) -> None:
        result = limit(KernelSpec.white(), MeanSpec.constant(0.0), 0.5)
        assert result.ell0 == pytest.approx(0.346574, abs=1e-6)
        assert result.ell1 == 0.0
        assert result.ell == result.ell0
        assert result.quadrature_delta == pytest.approx(0.0, abs=1e-15)

    def test_ar1_row(self) -> None:
        result = limit(KernelSpec.ar1(0.5), MeanSpec.constant(1.0), 0.5, nodes=1024)
        assert result.ell == pytest.approx(0.4787, abs=1e-4)
        assert result.nodes == 1024
        assert result.mean_frequency == 0.0
        assert result.quadrature_delta < 1e-12

    def test_alternating_frequency(self) -> None:
        result = limit(KernelSpec.ar1(0.5), MeanSpec.alternating(1.0), 0.5)
        assert result.mean_frequency == math.pi

    @pytest.mark.parametrize(
        ("kernel", "mean"),
        [
            (KernelSpec.ar1(0.5), MeanSpec.constant(1.0)),
            (KernelSpec.ar1(-0.7), MeanSpec.alternating(2.0)),
            (KernelSpec.ma([1.0, 0.3]), MeanSpec.constant(0.5)),
        ],
    )
    def test_negated_limit_convex_nonincreasing(
        self, kernel: KernelSpec, mean: MeanSpec
    ) -> None:
        alphas = np.linspace(0.0, 3.0, 31)
        neg_ell = np.array([-limit(kernel, mean, a).ell for a in alphas])
        assert np.diff(neg_ell).max() <= 1e-12
        assert np.diff(neg_ell, 2).min() >= -1e-9


class TestWienerHopf:
    """Truncated semi-infinite system against its closed forms.

    Technique: Oracle Testing.
    """

    def test_ar1_triangle(self) -> None:
        sol = wiener_hopf(KernelSpec.ar1(0.5), 0.1)
        assert abs(sol.g0 - sol.g0_closed) <= 1e-6
        assert abs(sol.total - sol.sum_closed) <= 1e-6
        assert abs(sol.ratio - sol.ratio_closed) <= 1e-6
        assert sol.ratio_closed == pytest.approx(1.0 / 1.8)
        assert sol.residual < 1e-10
        assert sol.abs_sum == pytest.approx(4.0)
        assert sol.truncation >= 512

    def test_white(self) -> None:
        sol = wiener_hopf(KernelSpec.white(), 0.25)
        assert sol.g0 == pytest.approx(1.0 / 1.5)
        assert sol.g0_closed == pytest.approx(1.0 / 1.5)
        assert sol.tail_bound == 0.0

    def test_alpha_out_of_range(self) -> None:
        with pytest.raises(AlphaOutOfRangeError, match="2\\*alpha\\*M"):
            wiener_hopf(KernelSpec.ar1(0.5), 0.2)

    def test_no_convergence(self) -> None:
        with pytest.raises(NoConvergenceError):
            wiener_hopf(KernelSpec.ar1(0.5), 0.1, tol=0.0, start=4, max_truncation=16)

    def test_last_row_pivot_matches_closed_form(self) -> None:
        """The Levinson pivot at a long horizon settles on ``g(0)``."""
        kernel, alpha = KernelSpec.ar1(0.5), 0.1
        sol = wiener_hopf(kernel, alpha)
        assert sol.g0_closed == pytest.approx(0.8)
        stats = filtering_stats(kernel, alpha, 2048)
        assert stats.pivot == pytest.approx(sol.g0_closed, abs=1e-9)


class TestConvergenceTable:
    """``e_t`` along a horizon grid.

    Technique: Convergence Testing.
    """

    def test_white_is_exact(self, white_model: ProcessModel) -> None:
        rows = convergence_table(white_model, 0.5, [8, 16, 32])
        assert [r.t for r in rows] == [8, 16, 32]
        assert all(r.abs_error < 1e-12 for r in rows)
        assert all(r.unconditioned_gap is None for r in rows)

    def test_ar1_error_decreases(self, ar1_model: ProcessModel) -> None:
        rows = convergence_table(ar1_model, 0.5, [32, 64, 128, 256])
        errors = [r.abs_error for r in rows]
        assert np.all(np.diff(errors) < 0.0)
        assert rows[0].neg_ell == pytest.approx(-0.4787, abs=1e-4)

    def test_conditioned_rows(self, ar1_model: ProcessModel) -> None:
        rows = convergence_table(ar1_model, 0.5, [32, 64, 128, 256], x=2.0)
        errors = [r.abs_error for r in rows]
        gaps = [r.unconditioned_gap for r in rows]
        assert np.all(np.diff(errors) < 0.0)
        assert all(g is not None for g in gaps)
        assert gaps[-1] < gaps[0]

    def test_alternating_mean(self, alternating_model: ProcessModel) -> None:
        rows = convergence_table(alternating_model, 0.5, [32, 64, 128, 256])
        assert rows[-1].abs_error < rows[0].abs_error

    @pytest.mark.parametrize("grid", [[], [0, 4], [8, 8], [16, 8]])
    def test_bad_grid(self, ar1_model: ProcessModel, grid: list[int]) -> None:
        with pytest.raises(DomainError):
            convergence_table(ar1_model, 0.5, grid)


class TestStationaryTable:
    """Separate convergence of the determinant and mean rates.

    Technique: Convergence Testing.
    """

    def test_rates_approach_limits(self) -> None:
        rows = stationary_table(KernelSpec.ar1(0.5), 1.0, 0.5, [32, 128, 512])
        det_errors = [abs(r.det_rate - r.ell0) for r in rows]
        mean_errors = [abs(r.mean_rate - r.ell1) for r in rows]
        assert det_errors[2] < det_errors[0]
        assert mean_errors[2] < mean_errors[0]
        assert rows[-1].ell1 == pytest.approx(0.1)
        assert det_errors[2] < 1e-2

    def test_determinant_rate_error_decreases(self) -> None:
        """``−(1/2t) Σ log g_τ(0)`` falls to ``ℓ0`` from above."""
        kernel, alpha = KernelSpec.ar1(0.5), 0.5
        floor = ell0(kernel, alpha)
        errors = [
            -pivot_log_sum(kernel, alpha, t) / (2 * t) - floor
            for t in [16, 32, 64, 128, 256]
        ]
        assert min(errors) > 0.0
        assert np.all(np.diff(errors) < 0.0)

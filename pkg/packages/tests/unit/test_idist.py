"""Tests for gaussquare._idist — infinitely divisible components.

Test Techniques Used:
    - Oracle Testing: component product against the exact log-Laplace
    - Specification-based Testing: component parameters for simple laws
    - Property-based Testing: the compound factor reproduces ℓ1
    - Error Condition Testing: horizon limits, indefinite covariance,
      degenerate spectrum
    - Numerical Integration Testing: AR(1) limit density against its
      closed-form Laplace transform
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussquare._errors import (
    DegenerateSpectrumError,
    DomainError,
    NotPositiveSemidefiniteError,
)
from gaussquare._idist import (
    CompoundPoissonComponent,
    GammaComponent,
    ar1_limit_density,
    decompose,
    decompose_law,
    density_laplace_check,
    limit_components,
)
from gaussquare._kernels import (
    FiniteLaw,
    KernelSpec,
    MeanSpec,
    ProcessModel,
    condition_on_start,
)
from gaussquare._laplace import log_laplace, log_laplace_conditioned
from gaussquare._limits import ell0

pytestmark = pytest.mark.unit

MODEL_NAMES = ["white", "ar1", "decaying", "perturbed", "alternating"]
ALPHAS = [0.0, 0.1, 1.0, 5.0, 20.0]


class TestComponents:
    """Individual component transforms.

    Technique: Specification-based Testing.
    """

    def test_gamma(self) -> None:
        c = GammaComponent(shape=0.5, scale=2.0, index=0)
        assert c.log_laplace(0.5) == pytest.approx(-0.5 * math.log(2.0))
        assert c.kind == "gamma"

    def test_compound_poisson(self) -> None:
        c = CompoundPoissonComponent(rate=0.125, exp_mean=8.0, index=0)
        assert c.log_laplace(0.5) == pytest.approx(-0.1)
        assert c.root(2).rate == 0.0625


class TestDecompose:
    """Eigen-rotation of the finite law.

    Technique: Oracle Testing.
    """

    @pytest.mark.parametrize("name", MODEL_NAMES)
    @pytest.mark.parametrize("t", [1, 4, 16, 64])
    def test_reconstructs_log_laplace(
        self, fixture_models: dict[str, ProcessModel], name: str, t: int
    ) -> None:
        model = fixture_models[name]
        parts = decompose(model, t)
        for alpha in ALPHAS:
            exact = log_laplace(model, alpha, t).log_value
            tol = 1e-10 * max(1.0, abs(exact))
            assert abs(parts.log_laplace(alpha) - exact) <= tol

    def test_white_centered_is_pure_gamma(self, white_model: ProcessModel) -> None:
        parts = decompose(white_model, 4)
        assert parts.count("gamma") == 4
        assert parts.count("compound_poisson") == 0
        assert parts.count("deterministic") == 0
        for c in parts.components:
            assert isinstance(c, GammaComponent)
            assert c.scale == pytest.approx(2.0)

    def test_mean_adds_compound_terms(self, ar1_model: ProcessModel) -> None:
        parts = decompose(ar1_model, 8)
        assert parts.count("gamma") == 8
        assert 1 <= parts.count("compound_poisson") <= 8

    def test_conditioned_law_has_point_mass(self, ar1_model: ProcessModel) -> None:
        x, alpha = 2.5, 0.7
        law = condition_on_start(ar1_model, x, 16)
        parts = decompose_law(law)
        assert parts.count("deterministic") == 1
        assert parts.count("gamma") == 15
        exact = log_laplace_conditioned(ar1_model, x, alpha, 16).log_value
        assert parts.log_laplace(alpha) == pytest.approx(exact, rel=1e-10)

    @given(n=st.integers(1, 10), alpha=st.floats(0.0, 10.0))
    @settings(max_examples=40, deadline=None)
    def test_root_divides_log_laplace(self, n: int, alpha: float) -> None:
        model = ProcessModel.stationary(KernelSpec.ar1(0.5), 1.0)
        parts = decompose(model, 8)
        root = parts.root(n)
        assert root.log_laplace(alpha) == pytest.approx(
            parts.log_laplace(alpha) / n, rel=1e-12, abs=1e-15
        )

    def test_root_order_validated(self, ar1_model: ProcessModel) -> None:
        with pytest.raises(DomainError, match="root order"):
            decompose(ar1_model, 4).root(0)

    @pytest.mark.parametrize("t", [0, 257])
    def test_horizon_limits(self, ar1_model: ProcessModel, t: int) -> None:
        with pytest.raises(DomainError, match="decompose requires"):
            decompose(ar1_model, t)

    def test_indefinite_rejected(self) -> None:
        law = FiniteLaw(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NotPositiveSemidefiniteError):
            decompose_law(law)


class TestLimitComponents:
    """Factors of the limit transform ``e^{−ℓ}``.

    Technique: Specification-based Testing.
    """

    def test_ar1_constant_mean(self) -> None:
        kernel = KernelSpec.ar1(0.5)
        result = limit_components(kernel, MeanSpec.constant(1.0), 0.5)
        assert result.compound is not None
        assert result.compound.rate == pytest.approx(1.0 / 8.0)
        assert result.compound.exp_mean == pytest.approx(8.0)
        assert result.ell1 == pytest.approx(0.1)
        assert result.thorin_log_laplace == pytest.approx(-ell0(kernel, 0.5))

    def test_alternating_uses_symbol_at_pi(self) -> None:
        result = limit_components(KernelSpec.ar1(0.5), MeanSpec.alternating(1.0), 0.5)
        assert result.compound is not None
        assert result.compound.exp_mean == pytest.approx(2.0 / 2.25)

    def test_zero_mean_has_no_compound(self) -> None:
        result = limit_components(KernelSpec.white(), MeanSpec.constant(0.0), 1.0)
        assert result.compound is None
        assert result.ell1 == 0.0

    def test_degenerate_spectrum(self) -> None:
        # f(π) = |1 + e^{iπ}|² = 0
        with pytest.raises(DegenerateSpectrumError):
            limit_components(KernelSpec.ma([1.0, 1.0]), MeanSpec.alternating(1.0), 0.5)

    @given(
        theta=st.floats(-0.9, 0.9),
        m=st.floats(0.01, 3.0),
        alpha=st.floats(0.0, 5.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_compound_factor_identity(
        self, theta: float, m: float, alpha: float
    ) -> None:
        """``m²α/(1+2αf) = (m²/2f)(1 − (1+2αf)⁻¹)`` at ``f = f(0)``."""
        kernel = KernelSpec.ar1(theta)
        f = float(kernel.spectral_density(0.0))
        result = limit_components(kernel, MeanSpec.constant(m), alpha)
        assert result.compound is not None
        direct = m * m * alpha / (1.0 + 2.0 * alpha * f)
        compound_form = m * m / (2.0 * f) * (1.0 - 1.0 / (1.0 + 2.0 * alpha * f))
        assert direct == pytest.approx(compound_form, rel=1e-10, abs=1e-14)
        assert -result.compound.log_laplace(alpha) == pytest.approx(
            direct, rel=1e-10, abs=1e-14
        )
        assert result.ell1 == pytest.approx(direct, rel=1e-10, abs=1e-14)


class TestAR1LimitDensity:
    """Explicit density of the AR(1) ``e^{−ℓ0}`` factor.

    Technique: Numerical Integration Testing.
    """

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
    def test_laplace_matches_closed_form(self, alpha: float) -> None:
        check = density_laplace_check(0.5, alpha)
        assert check.abs_error <= 1e-8
        assert check.tail_bound <= 1e-10
        assert check.cutoff >= 50.0

    def test_total_mass_is_one(self) -> None:
        check = density_laplace_check(-0.8, 0.0)
        assert check.closed_form == pytest.approx(1.0)
        assert check.integral == pytest.approx(1.0, abs=1e-8)

    def test_sign_of_theta_irrelevant(self) -> None:
        assert ar1_limit_density(0.5, 3.0) == ar1_limit_density(-0.5, 3.0)

    def test_series_branch_is_continuous(self) -> None:
        a = 0.5
        edge = 1e-4 / a
        below = ar1_limit_density(a, edge * (1 - 1e-9))
        above = ar1_limit_density(a, edge * (1 + 1e-9))
        assert below == pytest.approx(above, rel=1e-8)

    def test_large_argument_does_not_overflow(self) -> None:
        value = ar1_limit_density(0.9, 5000.0)
        assert 0.0 <= value < 1e-10

    @pytest.mark.parametrize("theta", [0.1, 0.5, -0.9])
    def test_positive_on_support(self, theta: float) -> None:
        grid = np.linspace(0.0, 100.0, 501)[1:]
        assert all(ar1_limit_density(theta, x) > 0.0 for x in grid)

    @pytest.mark.parametrize(
        ("theta", "x"),
        [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0), (0.5, -1.0)],
    )
    def test_domain(self, theta: float, x: float) -> None:
        with pytest.raises(DomainError):
            ar1_limit_density(theta, x)

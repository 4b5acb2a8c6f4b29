"""Tests for gaussquare._toeplitz — norms, equivalence gaps, resolvents.

Test Techniques Used:
    - Specification-based Testing: hand-computed norms
    - Property-based Testing: norm inequalities, gap transitivity and gap
      bounds on random matrices
    - Oracle Testing: resolvent against numpy's dense solve
    - Error Condition Testing: shape mismatches and invalid alpha
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussquare._errors import DomainError, SizeMismatchError
from gaussquare._factorization import shifted_toeplitz
from gaussquare._kernels import KernelSpec, ProcessModel
from gaussquare._toeplitz import (
    conditioning_bounds,
    eigen_approx_gap,
    equivalence_gap,
    fourier_vector,
    inner_product_gap,
    norm_report,
    product_gap,
    resolvent_apply,
    strong_norm,
    toeplitz,
    vector_equivalence_gap,
    weak_norm,
)
from tests.unit.conftest import random_symmetric

pytestmark = pytest.mark.unit

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 16)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


class TestNorms:
    """Strong and weak matrix norms.

    Technique: Specification-based Testing.
    """

    def test_hand_computed(self) -> None:
        a = np.array([[1.0, -2.0], [3.0, 4.0]])
        report = norm_report(a)
        assert report.strong == 7.0
        assert report.weak == 5.0

    def test_empty_matrix(self) -> None:
        empty = np.zeros((0, 0))
        assert strong_norm(empty) == 0.0
        assert weak_norm(empty) == 0.0

    def test_non_square_rejected(self) -> None:
        with pytest.raises(SizeMismatchError):
            strong_norm(np.ones((2, 3)))

    def test_toeplitz_layout(self) -> None:
        h = toeplitz(KernelSpec.ma([1.0, 1.0]), 3)
        np.testing.assert_array_equal(h, [[2, 1, 0], [1, 2, 1], [0, 1, 2]])

    def test_toeplitz_rejects_empty(self) -> None:
        with pytest.raises(DomainError):
            toeplitz(KernelSpec.white(), 0)

    def test_ar1_strong_norm_bounded_by_abs_sum(self) -> None:
        kernel = KernelSpec.ar1(0.5)
        assert strong_norm(toeplitz(kernel, 200)) <= kernel.abs_sum


class TestNormInequalities:
    """Weak/strong norm inequalities on random symmetric matrices.

    Technique: Property-based Testing.
    """

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_weak_below_strong(self, seed: int, n: int) -> None:
        a = random_symmetric(np.random.default_rng(seed), n)
        assert weak_norm(a) <= strong_norm(a) + 1e-12

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_strong_submultiplicative(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        a, b = random_symmetric(rng, n), random_symmetric(rng, n)
        assert strong_norm(a @ b) <= strong_norm(a) * strong_norm(b) + 1e-12

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_weak_of_product(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        a, b = random_symmetric(rng, n), random_symmetric(rng, n)
        assert weak_norm(a @ b) <= strong_norm(a) * weak_norm(b) + 1e-12
        assert weak_norm(a @ b) <= weak_norm(a) * strong_norm(b) + 1e-12

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_triangle_inequality(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        a, b = random_symmetric(rng, n), random_symmetric(rng, n)
        assert strong_norm(a + b) <= strong_norm(a) + strong_norm(b) + 1e-12
        assert weak_norm(a + b) <= weak_norm(a) + weak_norm(b) + 1e-12

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_product_gap_within_bound(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        a, b, c, d = (random_symmetric(rng, n) for _ in range(4))
        gap, bound = product_gap(a, b, c, d)
        assert gap <= bound + 1e-12

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_inner_product_gap_within_bound(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        v, u, w, z = (rng.uniform(-1.0, 1.0, n) for _ in range(4))
        gap, bound = inner_product_gap(v, u, w, z)
        assert gap <= bound + 1e-12


class TestEquivalenceGaps:
    """Matrix and vector gaps.

    Technique: Specification-based Testing.
    """

    def test_matrix_gap_is_weak_norm_of_difference(self) -> None:
        a = np.eye(4)
        assert equivalence_gap(a, np.zeros((4, 4))) == 1.0

    def test_vector_gap(self) -> None:
        assert vector_equivalence_gap([1.0, 2.0], [0.0, 0.0]) == 1.5
        assert vector_equivalence_gap([], []) == 0.0

    def test_complex_vectors_by_modulus(self) -> None:
        assert vector_equivalence_gap([1j], [0.0]) == 1.0

    def test_shape_mismatch(self) -> None:
        with pytest.raises(SizeMismatchError):
            equivalence_gap(np.eye(2), np.eye(3))
        with pytest.raises(SizeMismatchError):
            inner_product_gap([1.0], [1.0], [1.0], [1.0, 2.0])

    @given(seed=seeds, n=sizes)
    @settings(max_examples=80, deadline=None)
    def test_gap_is_transitive(self, seed: int, n: int) -> None:
        rng = np.random.default_rng(seed)
        a, b, c = (random_symmetric(rng, n) for _ in range(3))
        through_b = equivalence_gap(a, b) + equivalence_gap(b, c)
        assert equivalence_gap(a, c) <= through_b + 1e-12
        assert equivalence_gap(a, b) == pytest.approx(equivalence_gap(b, a))


class TestConditioningBounds:
    """Conditioned law stays asymptotically equivalent to the original.

    Technique: Specification-based Testing.
    """

    @pytest.mark.parametrize("x", [-3.0, 0.0, 2.0])
    def test_gaps_within_bounds(self, ar1_model: ProcessModel, x: float) -> None:
        for t in (16, 64, 256):
            b = conditioning_bounds(ar1_model, x, t)
            assert b.mean_gap <= b.mean_bound + 1e-12
            assert b.cov_gap <= b.cov_bound + 1e-12
            assert b.strong_conditioned <= b.strong_bound + 1e-12

    def test_gaps_vanish(self, perturbed_model: ProcessModel) -> None:
        gaps = [
            conditioning_bounds(perturbed_model, 2.0, t).cov_gap for t in (16, 64, 256)
        ]
        assert gaps[2] < gaps[1] < gaps[0]
        assert gaps[2] * 256 == pytest.approx(gaps[1] * 64, rel=1e-6)


# ---------------------------------------------------------------------------
# Resolvent
# ---------------------------------------------------------------------------


class TestResolvent:
    """Solving ``(I + 2αH_t) u = v``.

    Technique: Oracle Testing.
    """

    def test_matches_dense_solve(self, rng: np.random.Generator) -> None:
        kernel = KernelSpec.ar1(0.5)
        v = rng.standard_normal(32)
        expected = np.linalg.solve(shifted_toeplitz(kernel, 0.5, 32), v)
        np.testing.assert_allclose(resolvent_apply(kernel, 0.5, 32, v), expected)

    def test_complex_rhs(self) -> None:
        kernel = KernelSpec.ma([1.0, 0.5])
        d = fourier_vector(0.7, 20)
        expected = np.linalg.solve(shifted_toeplitz(kernel, 1.0, 20), d)
        np.testing.assert_allclose(resolvent_apply(kernel, 1.0, 20, d), expected)

    def test_negative_alpha(self) -> None:
        with pytest.raises(DomainError):
            resolvent_apply(KernelSpec.white(), -1.0, 2, [1.0, 1.0])

    def test_length_mismatch(self) -> None:
        with pytest.raises(SizeMismatchError):
            resolvent_apply(KernelSpec.white(), 1.0, 3, [1.0, 1.0])


class TestEigenApproximation:
    """Fourier vectors are approximate eigenvectors of the resolvent.

    Technique: Specification-based Testing.
    """

    def test_fourier_vector_unimodular(self) -> None:
        d = fourier_vector(1.3, 10)
        np.testing.assert_allclose(np.abs(d), np.ones(10))
        assert d[0] == 1.0

    @pytest.mark.parametrize("lam", [0.0, 1.0, np.pi])
    def test_white_is_exact(self, lam: float) -> None:
        assert eigen_approx_gap(KernelSpec.white(), 0.5, lam, 64) < 1e-14

    @pytest.mark.parametrize("lam", [0.0, 1.0, np.pi])
    def test_ar1_gap_shrinks(self, lam: float) -> None:
        kernel = KernelSpec.ar1(0.5)
        small = eigen_approx_gap(kernel, 0.5, lam, 32)
        large = eigen_approx_gap(kernel, 0.5, lam, 512)
        assert large < small / 8

"""Integration fixtures — committed oracle values for the acceptance runs."""

from __future__ import annotations

import pytest

#: ``e_1024`` for ar1(0.5), m ≡ 1, α = 0.5.  From the expansion
#: ``log L_t = −tℓ − ½E − αD + o(1)`` with the strong Szegő constant
#: ``E = −log(1−θ²) + 2 log(1−θφ) − log(1−φ²) ≈ 0.0949`` (``φ = ζ⁻``) and
#: the boundary excess of the mean quadratic form ``D ≈ 0.277``.
CONVERGENCE_ORACLE_1024 = 1.82e-4


@pytest.fixture
def convergence_oracle() -> float:
    return CONVERGENCE_ORACLE_1024

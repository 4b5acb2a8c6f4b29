"""Shared fixtures and helpers for unit tests in packages/tests/unit/.

Non-fixture helpers (dense oracles, random matrix builders) are importable
by test modules.  Pytest fixtures are auto-discovered — do NOT import
them explicitly.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator

import numpy as np
import pytest

# ---------------------------------------------------------------------------
# Fixtures (auto-discovered by pytest — never import these)
# ---------------------------------------------------------------------------


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for example-based randomized tests."""
    return np.random.default_rng(20261019)


@pytest.fixture
def restore_root_logger() -> Iterator[None]:
    """Save and restore root logger handlers and level."""
    root = logging.getLogger()
    original_handlers = root.handlers[:]
    original_level = root.level
    yield
    for h in root.handlers:
        if h not in original_handlers:
            h.close()
    root.handlers = original_handlers
    root.setLevel(original_level)


# white_model, ar1_model, ... provided by gaussquare.testing._plugin


# ---------------------------------------------------------------------------
# Helpers (import explicitly in test modules)
# ---------------------------------------------------------------------------


def dense_log_laplace(mean: np.ndarray, cov: np.ndarray, alpha: float) -> float:
    """Closed form evaluated with a dense inverse and slogdet."""
    a = np.eye(mean.size) + 2.0 * alpha * cov
    sign, logdet = np.linalg.slogdet(a)
    assert sign > 0
    quad = float(mean @ np.linalg.solve(a, mean))
    return -0.5 * float(logdet) - alpha * quad


def random_psd(
    rng: np.random.Generator, n: int, *, rank: int | None = None
) -> np.ndarray:
    """Random symmetric positive (semi)definite matrix of size *n*."""
    b = rng.standard_normal((n, rank if rank is not None else n))
    a = b @ b.T
    if rank is None:
        a += 0.1 * np.eye(n)
    return 0.5 * (a + a.T)


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Symmetric matrix with entries in [-1, 1]."""
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    return np.triu(a) + np.triu(a, 1).T

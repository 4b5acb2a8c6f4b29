"""Monte Carlo estimates of ``L_t(α) = E[exp(−α Σ X_s²)]``.

Paths are ``x = m_t + L z`` with ``L`` the (tolerant) Cholesky factor of
the covariance and ``z`` standard normal.  Draws come in fixed-size
chunks; chunk ``i`` uses ``Philox(seed).jumped(i)``, so a given
``(seed, n)`` always produces the same paths no matter how the chunks are
scheduled.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from gaussquare._errors import DomainError
from gaussquare._factorization import factorize
from gaussquare._kernels import FiniteLaw, FloatArray, ProcessModel, condition_on_start

logger = logging.getLogger(__name__)

CHUNK_SIZE = 8192


@dataclass(frozen=True, slots=True)
class MCEstimate:
    """Plain-mean estimate of ``L_t(α)`` with its standard error."""

    t: int
    alpha: float
    n_samples: int
    estimate: float
    std_error: float
    seed: int
    exact: float | None = None

    @property
    def z_score(self) -> float | None:
        """``(estimate − exact) / std_error`` when an exact value is attached."""
        if self.exact is None:
            return None
        diff = self.estimate - self.exact
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


def _law(model: ProcessModel, t: int, x: float | None) -> FiniteLaw:
    if t < 1:
        msg = f"t must be >= 1, got {t}"
        raise DomainError(msg)
    return model.finite_law(t) if x is None else condition_on_start(model, x, t)


def _generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed).jumped(chunk))


def _blocks(law: FiniteLaw, n: int, seed: int) -> Iterator[FloatArray]:
    if n < 0:
        msg = f"sample count must be >= 0, got {n}"
        raise DomainError(msg)
    if seed < 0:
        msg = f"seed must be >= 0, got {seed}"
        raise DomainError(msg)
    root = factorize(law.covariance).cholesky
    for chunk, start in enumerate(range(0, n, CHUNK_SIZE)):
        size = min(CHUNK_SIZE, n - start)
        z = _generator(seed, chunk).standard_normal((size, law.size))
        yield law.mean + z @ root.T


def sample_paths(
    model: ProcessModel,
    t: int,
    n: int,
    seed: int,
    *,
    x: float | None = None,
) -> FloatArray:
    """Draw ``n`` paths of length ``t``, shape ``(n, t)``.

    With ``x`` set, paths follow the law conditioned on ``X_0 = x`` and
    carry ``x`` exactly in coordinate 0.
    """
    law = _law(model, t, x)
    blocks = list(_blocks(law, n, seed))
    if not blocks:
        return np.empty((0, t), dtype=np.float64)
    return np.vstack(blocks)


def estimate_log_laplace(
    model: ProcessModel,
    alpha: float,
    t: int,
    n: int,
    seed: int,
    *,
    x: float | None = None,
    exact: float | None = None,
) -> MCEstimate:
    """Estimate ``L_t(α)`` (or ``L_{x,t}(α)``) from ``n`` paths.

    Args:
        exact: Optional reference value of ``L_t(α)`` for the z-score.
    """
    if not (math.isfinite(alpha) and alpha >= 0.0):
        msg = f"alpha must be finite and >= 0, got {alpha!r}"
        raise DomainError(msg)
    if n < 1:
        msg = f"an estimate needs at least one sample, got {n}"
        raise DomainError(msg)
    law = _law(model, t, x)
    values = np.concatenate(
        [np.exp(-alpha * (b * b).sum(axis=1)) for b in _blocks(law, n, seed)]
    )
    std_error = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    logger.debug(
        "Monte Carlo estimate",
        extra={"context": {"t": t, "alpha": alpha, "n": n}},
    )
    return MCEstimate(
        t=t,
        alpha=alpha,
        n_samples=n,
        estimate=float(values.mean()),
        std_error=std_error,
        seed=seed,
        exact=exact,
    )

"""gaussquare.

Exact finite-horizon and limiting Laplace transforms of the summed squares
of (asymptotically) stationary Gaussian processes, with Wiener-Hopf,
infinitely divisible and Monte Carlo cross-checks.
"""

from importlib.metadata import PackageNotFoundError, version

from gaussquare._ar1oracle import (
    AR1Limit,
    ar1_ell0,
    ar1_ell0_roots,
    ar1_ell1,
    ar1_limit,
    ar1_limit_laplace,
    ar1_roots,
)
from gaussquare._errors import (
    ERROR_TYPES,
    AlphaOutOfRangeError,
    DegenerateSpectrumError,
    DomainError,
    ErrorPayload,
    FactorizationFailureError,
    GaussquareError,
    InvariantViolationError,
    ModelError,
    NoConvergenceError,
    NonFiniteOutputError,
    NotPositiveSemidefiniteError,
    NumericalError,
    SizeMismatchError,
    ZeroStartVarianceError,
    build_error_payload,
)
from gaussquare._factorization import (
    Factorization,
    FilteringStats,
    GtRow,
    factorize,
    filtering_stats,
    g_row,
    g_rows,
    innovations,
    log_det_via_pivots,
    pivot_log_sum,
    quad_form_via_pivots,
)
from gaussquare._idist import (
    CompoundPoissonComponent,
    DensityCheck,
    DeterministicComponent,
    GammaComponent,
    IDComponent,
    IDDecomposition,
    LimitComponents,
    ar1_limit_density,
    decompose,
    density_laplace_check,
    limit_components,
)
from gaussquare._kernels import (
    FiniteLaw,
    HypothesisReport,
    KernelSpec,
    MeanSpec,
    Perturbation,
    ProcessModel,
    condition_on_start,
    covariance_matrix,
    hypothesis_report,
    spectral_density,
)
from gaussquare._laplace import (
    LogLaplace,
    StationaryParts,
    log_laplace,
    log_laplace_conditioned,
    scaled_log_laplace,
    scaled_log_laplace_conditioned,
    stationary_parts,
)
from gaussquare._limits import (
    ConvergenceRow,
    LimitResult,
    StationaryRow,
    WienerHopfSolution,
    convergence_table,
    ell0,
    ell1,
    limit,
    stationary_table,
    wiener_hopf,
)
from gaussquare._logging import JsonFormatter, configure_logging
from gaussquare._mc import MCEstimate, estimate_log_laplace, sample_paths
from gaussquare._settings import (
    ExperimentSettings,
    KernelSettings,
    LoggingSettings,
    MeanSettings,
    ModelSettings,
    PerturbationSettings,
)
from gaussquare._toeplitz import (
    ConditioningBounds,
    NormReport,
    conditioning_bounds,
    eigen_approx_gap,
    equivalence_gap,
    inner_product_gap,
    norm_report,
    product_gap,
    resolvent_apply,
    strong_norm,
    toeplitz,
    vector_equivalence_gap,
    weak_norm,
)

try:
    __version__ = version("gaussquare")
except PackageNotFoundError:
    # Source checkout without installed metadata
    __version__ = "0.0.0+unknown"

__all__ = [
    # Version
    "__version__",
    # Models
    "FiniteLaw",
    "HypothesisReport",
    "KernelSpec",
    "MeanSpec",
    "Perturbation",
    "ProcessModel",
    "condition_on_start",
    "covariance_matrix",
    "hypothesis_report",
    "spectral_density",
    # Toeplitz
    "ConditioningBounds",
    "NormReport",
    "conditioning_bounds",
    "eigen_approx_gap",
    "equivalence_gap",
    "inner_product_gap",
    "norm_report",
    "product_gap",
    "resolvent_apply",
    "strong_norm",
    "toeplitz",
    "vector_equivalence_gap",
    "weak_norm",
    # Factorization
    "Factorization",
    "FilteringStats",
    "GtRow",
    "factorize",
    "filtering_stats",
    "g_row",
    "g_rows",
    "innovations",
    "log_det_via_pivots",
    "pivot_log_sum",
    "quad_form_via_pivots",
    # Laplace
    "LogLaplace",
    "StationaryParts",
    "log_laplace",
    "log_laplace_conditioned",
    "scaled_log_laplace",
    "scaled_log_laplace_conditioned",
    "stationary_parts",
    # Limits
    "ConvergenceRow",
    "LimitResult",
    "StationaryRow",
    "WienerHopfSolution",
    "convergence_table",
    "ell0",
    "ell1",
    "limit",
    "stationary_table",
    "wiener_hopf",
    # Infinite divisibility
    "CompoundPoissonComponent",
    "DensityCheck",
    "DeterministicComponent",
    "GammaComponent",
    "IDComponent",
    "IDDecomposition",
    "LimitComponents",
    "ar1_limit_density",
    "decompose",
    "density_laplace_check",
    "limit_components",
    # AR(1)
    "AR1Limit",
    "ar1_ell0",
    "ar1_ell0_roots",
    "ar1_ell1",
    "ar1_limit",
    "ar1_limit_laplace",
    "ar1_roots",
    # Monte Carlo
    "MCEstimate",
    "estimate_log_laplace",
    "sample_paths",
    # Settings & logging
    "ExperimentSettings",
    "JsonFormatter",
    "KernelSettings",
    "LoggingSettings",
    "MeanSettings",
    "ModelSettings",
    "PerturbationSettings",
    "configure_logging",
    # Errors
    "ERROR_TYPES",
    "AlphaOutOfRangeError",
    "DegenerateSpectrumError",
    "DomainError",
    "ErrorPayload",
    "FactorizationFailureError",
    "GaussquareError",
    "InvariantViolationError",
    "ModelError",
    "NoConvergenceError",
    "NonFiniteOutputError",
    "NotPositiveSemidefiniteError",
    "NumericalError",
    "SizeMismatchError",
    "ZeroStartVarianceError",
    "build_error_payload",
]

"""Batch experiment runner (Typer-based).

Every subcommand loads :class:`~gaussquare._settings.ExperimentSettings`
from an optional ``--config`` TOML file plus flag overrides, validates it
completely, runs one computation over the ``α``/``t`` grid and writes a
table (CSV or ``obj``) to ``--out`` or stdout.  Rows come out in grid
order.

Exit codes: ``0`` success, ``2`` configuration error (bad flag, invalid
file, invalid model), ``3`` numeric error.  On failure the error type and
message go to stderr as ``"<ErrorType>: <message>"`` and to the log as a
structured payload.

Column sets per subcommand are listed in ``docs/reference/cli.md``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, get_args

import typer
from pydantic import ValidationError

from gaussquare._errors import (
    DomainError,
    GaussquareError,
    ModelError,
    build_error_payload,
)
from gaussquare._idist import decompose, density_laplace_check
from gaussquare._kernels import hypothesis_report
from gaussquare._laplace import log_laplace
from gaussquare._limits import convergence_table, limit, stationary_table, wiener_hopf
from gaussquare._logging import configure_logging
from gaussquare._mc import estimate_log_laplace
from gaussquare._report import Cell, write_rows
from gaussquare._settings import (
    ExperimentSettings,
    LoggingSettings,
    parse_alpha_list,
    parse_t_grid,
)

logger = logging.getLogger(__name__)

SERVICE = "gaussquare"

# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3

_VALID_LOG_LEVELS: tuple[str, ...] = get_args(
    LoggingSettings.model_fields["level"].annotation,
)
_VALID_LOG_FORMATS: tuple[str, ...] = get_args(
    LoggingSettings.model_fields["format"].annotation,
)

Row = dict[str, Cell]
Table = tuple[Sequence[str], list[Row]]

# ---------------------------------------------------------------------------
# Shared options
# ---------------------------------------------------------------------------

ConfigOption = Annotated[
    Path | None,
    typer.Option("--config", exists=True, dir_okay=False, help="TOML experiment file."),
]
AlphaOption = Annotated[str | None, typer.Option("--alpha", help="A[,A...]")]
TOption = Annotated[str | None, typer.Option("--t", help="LO:HI:STEP or a comma list.")]
NodesOption = Annotated[int | None, typer.Option("--nodes", help="Quadrature nodes.")]
TolOption = Annotated[float | None, typer.Option("--tol", help="Wiener-Hopf tol.")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Monte Carlo seed.")]
SamplesOption = Annotated[int | None, typer.Option("--samples", help="MC paths.")]
XOption = Annotated[float | None, typer.Option("--x", help="Conditioned start X_0.")]
FormatOption = Annotated[str | None, typer.Option("--format", help="csv or obj.")]
OutOption = Annotated[Path | None, typer.Option("--out", help="Output file.")]


@dataclass(frozen=True, slots=True)
class _RootOptions:
    log_level: str | None = None
    log_format: str | None = None

    def logging_overrides(self) -> dict[str, str]:
        overrides = {}
        if self.log_level is not None:
            overrides["level"] = self.log_level.upper()
        if self.log_format is not None:
            overrides["format"] = self.log_format.lower()
        return overrides


@dataclass(frozen=True, slots=True)
class _Flags:
    config: Path | None = None
    alpha: str | None = None
    t: str | None = None
    nodes: int | None = None
    tol: float | None = None
    seed: int | None = None
    samples: int | None = None
    x: float | None = None
    format: str | None = None
    out: Path | None = None

    def overrides(self, root: _RootOptions) -> dict[str, Any]:
        """Settings overrides for every flag that was given.

        Raises:
            ValueError: If ``--alpha`` or ``--t`` is malformed.
        """
        data: dict[str, Any] = {
            name: getattr(self, name)
            for name in ("nodes", "tol", "seed", "samples", "x", "format", "out")
            if getattr(self, name) is not None
        }
        if self.alpha is not None:
            data["alpha"] = parse_alpha_list(self.alpha)
        if self.t is not None:
            data["t"] = parse_t_grid(self.t)
        logging_overrides = root.logging_overrides()
        if logging_overrides:
            data["logging"] = logging_overrides
        return data


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _version() -> str:
    from gaussquare import __version__

    return __version__


def _validate_log_options(log_level: str | None, log_format: str | None) -> None:
    """Raise :class:`typer.BadParameter` for unknown level or format names."""
    if log_level is not None and log_level.upper() not in _VALID_LOG_LEVELS:
        raise typer.BadParameter(
            f"Invalid log level '{log_level}'. "
            f"Choose from: {', '.join(_VALID_LOG_LEVELS)}",
            param_hint="'--log-level'",
        )
    if log_format is not None and log_format.lower() not in _VALID_LOG_FORMATS:
        raise typer.BadParameter(
            f"Invalid log format '{log_format}'. "
            f"Choose from: {', '.join(_VALID_LOG_FORMATS)}",
            param_hint="'--log-format'",
        )


def _fail(command: str, error: Exception, code: int) -> typer.Exit:
    payload = build_error_payload(error, command=command, details={"exit_code": code})
    logger.error(payload.headline(), extra={"context": {"payload": payload.to_json()}})
    typer.echo(payload.headline(), err=True)
    return typer.Exit(code)


def _run(
    ctx: typer.Context,
    command: str,
    flags: _Flags,
    produce: Callable[[ExperimentSettings], Table],
) -> None:
    root = ctx.obj if isinstance(ctx.obj, _RootOptions) else _RootOptions()
    try:
        settings = ExperimentSettings.load(flags.config, **flags.overrides(root))
    except (ValidationError, ValueError) as exc:
        configure_logging(
            LoggingSettings(**root.logging_overrides()),
            service=SERVICE,
            version=_version(),
        )
        raise _fail(command, exc, EXIT_CONFIG_ERROR) from exc

    configure_logging(settings.logging, service=SERVICE, version=_version())
    logger.info(
        "Running %s",
        command,
        extra={"context": {"alpha": settings.alpha, "t": settings.t}},
    )
    try:
        columns, rows = produce(settings)
        write_rows(command, columns, rows, settings.format, settings.out)
    except ModelError as exc:
        raise _fail(command, exc, EXIT_CONFIG_ERROR) from exc
    except GaussquareError as exc:
        raise _fail(command, exc, EXIT_NUMERIC_ERROR) from exc
    logger.info("Finished %s", command, extra={"context": {"rows": len(rows)}})


def _single_alpha(settings: ExperimentSettings, command: str) -> float:
    if len(settings.alpha) != 1:
        msg = f"{command} takes exactly one alpha, got {settings.alpha}"
        raise DomainError(msg)
    return settings.alpha[0]


# ---------------------------------------------------------------------------
# Table producers
# ---------------------------------------------------------------------------


def _limit_table(settings: ExperimentSettings) -> Table:
    model = settings.model.build()
    rows: list[Row] = []
    for alpha in settings.alpha:
        result = limit(model.kernel, model.mean, alpha, settings.nodes)
        rows.append(
            {
                "alpha": alpha,
                "ell0": result.ell0,
                "ell1": result.ell1,
                "ell": result.ell,
                "mean_frequency": result.mean_frequency,
                "nodes": result.nodes,
                "quadrature_delta": result.quadrature_delta,
            }
        )
    return (
        ["alpha", "ell0", "ell1", "ell", "mean_frequency", "nodes", "quadrature_delta"],
        rows,
    )


def _converge_table(settings: ExperimentSettings) -> Table:
    alpha = _single_alpha(settings, "converge")
    model = settings.model.build()
    table = convergence_table(model, alpha, settings.t, nodes=settings.nodes)
    columns = ["t", "scaled_log_laplace", "neg_ell", "abs_error"]
    rows: list[Row] = [
        {
            "t": r.t,
            "scaled_log_laplace": r.scaled_log_laplace,
            "neg_ell": r.neg_ell,
            "abs_error": r.abs_error,
        }
        for r in table
    ]
    return columns, rows


def _converge_conditioned_table(settings: ExperimentSettings) -> Table:
    alpha = _single_alpha(settings, "converge-conditioned")
    table = convergence_table(
        settings.model.build(), alpha, settings.t, x=settings.x, nodes=settings.nodes
    )
    columns = [
        "t",
        "x",
        "scaled_log_laplace",
        "neg_ell",
        "abs_error",
        "unconditioned_gap",
    ]
    rows: list[Row] = [
        {
            "t": r.t,
            "x": settings.x,
            "scaled_log_laplace": r.scaled_log_laplace,
            "neg_ell": r.neg_ell,
            "abs_error": r.abs_error,
            "unconditioned_gap": r.unconditioned_gap or 0.0,
        }
        for r in table
    ]
    return columns, rows


def _wienerhopf_table(settings: ExperimentSettings) -> Table:
    kernel = settings.model.kernel.build()
    rows: list[Row] = []
    for alpha in settings.alpha:
        s = wiener_hopf(kernel, alpha, settings.tol, nodes=settings.nodes)
        rows.append(
            {
                "alpha": alpha,
                "truncation": s.truncation,
                "g0": s.g0,
                "g0_closed": s.g0_closed,
                "sum_g": s.total,
                "sum_closed": s.sum_closed,
                "ratio": s.ratio,
                "ratio_closed": s.ratio_closed,
                "residual": s.residual,
                "tail_bound": s.tail_bound,
            }
        )
    columns = [
        "alpha",
        "truncation",
        "g0",
        "g0_closed",
        "sum_g",
        "sum_closed",
        "ratio",
        "ratio_closed",
        "residual",
        "tail_bound",
    ]
    return columns, rows


def _decompose_table(settings: ExperimentSettings) -> Table:
    model = settings.model.build()
    rows: list[Row] = []
    for t in settings.t:
        parts = decompose(model, t)
        for alpha in settings.alpha:
            components = parts.log_laplace(alpha)
            exact = log_laplace(model, alpha, t).log_value
            rows.append(
                {
                    "alpha": alpha,
                    "t": t,
                    "components_log_laplace": components,
                    "exact_log_laplace": exact,
                    "abs_error": abs(components - exact),
                    "gamma_count": parts.count("gamma"),
                    "compound_count": parts.count("compound_poisson"),
                    "deterministic_count": parts.count("deterministic"),
                }
            )
    columns = [
        "alpha",
        "t",
        "components_log_laplace",
        "exact_log_laplace",
        "abs_error",
        "gamma_count",
        "compound_count",
        "deterministic_count",
    ]
    return columns, rows


def _mc_table(settings: ExperimentSettings) -> Table:
    model = settings.model.build()
    rows: list[Row] = []
    for alpha in settings.alpha:
        for t in settings.t:
            exact = math.exp(log_laplace(model, alpha, t).log_value)
            est = estimate_log_laplace(
                model, alpha, t, settings.samples, settings.seed, exact=exact
            )
            rows.append(
                {
                    "alpha": alpha,
                    "t": t,
                    "estimate": est.estimate,
                    "std_error": est.std_error,
                    "exact": exact,
                    "z_score": est.z_score if est.z_score is not None else 0.0,
                    "n_samples": est.n_samples,
                    "seed": est.seed,
                }
            )
    columns = [
        "alpha",
        "t",
        "estimate",
        "std_error",
        "exact",
        "z_score",
        "n_samples",
        "seed",
    ]
    return columns, rows


def _hypotheses_table(settings: ExperimentSettings) -> Table:
    model = settings.model.build()
    rows: list[Row] = []
    for t in settings.t:
        report = hypothesis_report(model, t)
        rows.append(
            {
                "t": t,
                "h1_sup_mean": report.sup_mean,
                "h2_max_row_sum": report.max_row_sum,
                "h3_partial_sum": report.kernel_abs_sum,
                "h4_mean_gap": report.mean_gap,
                "h5_weak_gap": report.weak_gap,
            }
        )
    columns = [
        "t",
        "h1_sup_mean",
        "h2_max_row_sum",
        "h3_partial_sum",
        "h4_mean_gap",
        "h5_weak_gap",
    ]
    return columns, rows


def _ar1_density_table(settings: ExperimentSettings) -> Table:
    kernel = settings.model.kernel
    if kernel.kind != "ar1":
        msg = f"ar1-density needs an ar1 kernel, got {kernel.kind!r}"
        raise DomainError(msg)
    rows: list[Row] = []
    for alpha in settings.alpha:
        check = density_laplace_check(kernel.theta, alpha)
        rows.append(
            {
                "alpha": alpha,
                "theta": check.theta,
                "integral": check.integral,
                "closed_form": check.closed_form,
                "abs_error": check.abs_error,
                "tail_bound": check.tail_bound,
            }
        )
    columns = ["alpha", "theta", "integral", "closed_form", "abs_error", "tail_bound"]
    return columns, rows


def _stationary_table(settings: ExperimentSettings) -> Table:
    alpha = _single_alpha(settings, "stationary")
    model = settings.model.build()
    if not model.is_stationary:
        msg = "stationary needs a constant mean and no perturbation"
        raise DomainError(msg)
    table = stationary_table(
        model.kernel, model.mean.m_inf, alpha, settings.t, nodes=settings.nodes
    )
    rows: list[Row] = [
        {
            "t": r.t,
            "det_rate": r.det_rate,
            "ell0": r.ell0,
            "mean_rate": r.mean_rate,
            "ell1": r.ell1,
        }
        for r in table
    ]
    return ["t", "det_rate", "ell0", "mean_rate", "ell1"], rows


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------


def build_cli() -> typer.Typer:
    """Construct the ``gaussquare`` Typer application."""
    cli = typer.Typer(
        help="Exact and limiting Laplace transforms of squared Gaussian processes.",
        add_completion=False,
    )

    @cli.callback(invoke_without_command=True)
    def main(
        ctx: typer.Context,
        version_flag: Annotated[
            bool | None,
            typer.Option("--version", is_eager=True, help="Show version and exit."),
        ] = None,
        log_level: Annotated[
            str | None,
            typer.Option("--log-level", help="Override log level."),
        ] = None,
        log_format: Annotated[
            str | None,
            typer.Option("--log-format", help="Override log format."),
        ] = None,
    ) -> None:
        if version_flag:
            typer.echo(f"{SERVICE} v{_version()}")
            raise typer.Exit()
        _validate_log_options(log_level, log_format)
        ctx.obj = _RootOptions(log_level=log_level, log_format=log_format)
        if ctx.invoked_subcommand is None:
            typer.echo(ctx.get_help())
            raise typer.Exit()

    def register(
        name: str, produce: Callable[[ExperimentSettings], Table], doc: str
    ) -> None:
        def command(
            ctx: typer.Context,
            config: ConfigOption = None,
            alpha: AlphaOption = None,
            t: TOption = None,
            nodes: NodesOption = None,
            tol: TolOption = None,
            seed: SeedOption = None,
            samples: SamplesOption = None,
            x: XOption = None,
            fmt: FormatOption = None,
            out: OutOption = None,
        ) -> None:
            flags = _Flags(config, alpha, t, nodes, tol, seed, samples, x, fmt, out)
            _run(ctx, name, flags, produce)

        command.__doc__ = doc
        cli.command(name)(command)

    register("limit", _limit_table, "ℓ0, ℓ1 and ℓ at every alpha.")
    register("converge", _converge_table, "Scaled log-Laplace against -ℓ over t.")
    register(
        "converge-conditioned",
        _converge_conditioned_table,
        "As converge, conditioned on X_0 = x.",
    )
    register("wienerhopf", _wienerhopf_table, "Truncated Wiener-Hopf vs closed forms.")
    register("decompose", _decompose_table, "Gamma/compound Poisson rebuild of L_t.")
    register("mc-check", _mc_table, "Monte Carlo estimate of L_t vs exact.")
    register("hypotheses", _hypotheses_table, "Finite-t readings of hypotheses H1-H5.")
    register("ar1-density", _ar1_density_table, "Laplace check of the AR(1) density.")
    register("stationary", _stationary_table, "Determinant and mean rates vs limits.")
    return cli


app = build_cli()


def main() -> None:
    """Console-script entry point."""
    app()

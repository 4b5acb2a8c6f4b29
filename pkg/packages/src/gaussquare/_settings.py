"""Experiment configuration via pydantic-settings.

An experiment is described by a TOML file, environment variables with the
``GAUSSQUARE_`` prefix (nested models use ``__``, e.g.
``GAUSSQUARE_MODEL__KERNEL__THETA=0.9``) and CLI flags, which win over
everything else.  Unknown keys are rejected and every model is built once
during validation, so an invalid kernel table or mean never reaches a
computation.

Example file::

    alpha = [0.5]
    t = [128, 256, 512, 1024]

    [model.kernel]
    kind = "ar1"
    theta = 0.5

    [model.mean]
    kind = "constant"
    m_inf = 1.0

    [model.perturbation]
    kind = "none"

See Also:
    :mod:`gaussquare._cli` for the flags that override these fields.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict, TomlConfigSettingsSource

from gaussquare._errors import ModelError
from gaussquare._kernels import KernelSpec, MeanSpec, Perturbation, ProcessModel

#: Largest horizon any dense computation accepts.
MAX_T = 4096

# -------------------------------------------------------------------
# Sub-models
# -------------------------------------------------------------------


class LoggingSettings(BaseModel):
    """Logging configuration.

    ``format="text"`` (default) writes timestamped lines for a terminal;
    ``format="json"`` writes one JSON object per record for log
    collectors.  When ``file`` is set, records also go to a rotating file.
    """

    model_config = ConfigDict(extra="forbid")

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        description="Root log level.",
    )
    format: Literal["json", "text"] = Field(
        default="text",
        description="Log output format.",
    )
    file: str | None = Field(
        default=None,
        description="Optional log file path. ``None`` means stderr only.",
    )
    max_file_size_mb: Annotated[int, Field(ge=1)] = Field(
        default=10,
        description="Maximum log file size in megabytes before rotation.",
    )
    backup_count: Annotated[int, Field(ge=0)] = Field(
        default=3,
        description="Number of rotated log files to keep.",
    )


_KERNEL_PARAMETERS: dict[str, str | None] = {
    "white": None,
    "ar1": "theta",
    "ma": "coeffs",
    "table": "values",
}


class KernelSettings(BaseModel):
    """Covariance kernel of kind ``white``, ``ar1``, ``ma`` or ``table``."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["white", "ar1", "ma", "table"] = "ar1"
    theta: Annotated[float, Field(gt=-1.0, lt=1.0)] = 0.5
    coeffs: list[float] | None = None
    values: list[float] | None = None

    @model_validator(mode="after")
    def _check_parameters(self) -> Self:
        needed = _KERNEL_PARAMETERS[self.kind]
        for name in ("theta", "coeffs", "values"):
            if name != needed and name in self.model_fields_set:
                msg = f"kernel kind {self.kind!r} does not take {name!r}"
                raise ValueError(msg)
        if needed in ("coeffs", "values") and not getattr(self, needed):
            msg = f"kernel kind {self.kind!r} requires a non-empty {needed!r}"
            raise ValueError(msg)
        try:
            self.build()
        except ModelError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def build(self) -> KernelSpec:
        match self.kind:
            case "white":
                return KernelSpec.white()
            case "ar1":
                return KernelSpec.ar1(self.theta)
            case "ma":
                return KernelSpec.ma(self.coeffs or [])
            case _:
                return KernelSpec.table(self.values or [])


class MeanSettings(BaseModel):
    """Mean sequence; ``c`` and ``rho`` apply to the ``decaying`` kind only."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["constant", "alternating", "decaying"] = "constant"
    m_inf: float = Field(default=1.0, allow_inf_nan=False)
    c: float = Field(default=0.0, allow_inf_nan=False)
    rho: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.5

    @model_validator(mode="after")
    def _check_parameters(self) -> Self:
        if self.kind != "decaying":
            extra = {"c", "rho"} & self.model_fields_set
            if extra:
                msg = f"mean kind {self.kind!r} does not take {sorted(extra)}"
                raise ValueError(msg)
        return self

    def build(self) -> MeanSpec:
        match self.kind:
            case "constant":
                return MeanSpec.constant(self.m_inf)
            case "alternating":
                return MeanSpec.alternating(self.m_inf)
            case _:
                return MeanSpec.decaying(self.m_inf, self.c, self.rho)


class PerturbationSettings(BaseModel):
    """Optional separable covariance perturbation ``c ρ^s ρ^r``."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["none", "separable"] = "none"
    c: float = Field(default=1.0, allow_inf_nan=False)
    rho: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.5

    def build(self) -> Perturbation | None:
        if self.kind == "none":
            return None
        return Perturbation(c=self.c, rho=self.rho)


class ModelSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kernel: KernelSettings = Field(default_factory=KernelSettings)
    mean: MeanSettings = Field(default_factory=MeanSettings)
    perturbation: PerturbationSettings = Field(default_factory=PerturbationSettings)

    def build(self) -> ProcessModel:
        return ProcessModel(
            mean=self.mean.build(),
            kernel=self.kernel.build(),
            perturbation=self.perturbation.build(),
        )


# -------------------------------------------------------------------
# Root settings
# -------------------------------------------------------------------


class ExperimentSettings(BaseSettings):
    """Everything one CLI run needs.

    Sources, highest priority first: constructor arguments (CLI flags and
    the TOML file via :meth:`load`), ``GAUSSQUARE_*`` environment
    variables, a ``.env`` file, field defaults.
    """

    model_config = SettingsConfigDict(
        env_prefix="GAUSSQUARE_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="forbid",
    )

    model: ModelSettings = Field(default_factory=ModelSettings)
    alpha: Annotated[
        list[Annotated[float, Field(ge=0.0, allow_inf_nan=False)]],
        Field(min_length=1),
    ] = Field(default_factory=lambda: [0.5])
    t: Annotated[
        list[Annotated[int, Field(ge=1, le=MAX_T)]],
        Field(min_length=1),
    ] = Field(default_factory=lambda: [128, 256, 512, 1024])
    nodes: Annotated[int, Field(ge=8)] = 4096
    tol: Annotated[float, Field(gt=0.0)] = 1e-8
    seed: Annotated[int, Field(ge=0)] = 7
    samples: Annotated[int, Field(ge=0)] = 100_000
    x: float = Field(default=0.0, allow_inf_nan=False)
    format: Literal["csv", "obj"] = "csv"
    out: Path | None = None
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @field_validator("t")
    @classmethod
    def _ascending(cls, value: list[int]) -> list[int]:
        if any(b <= a for a, b in zip(value, value[1:], strict=False)):
            msg = f"t grid must be strictly ascending, got {value}"
            raise ValueError(msg)
        return value

    @classmethod
    def load(cls, config: Path | None = None, **overrides: Any) -> Self:
        """Build settings from an optional TOML file plus flag overrides."""
        data: dict[str, Any] = {}
        if config is not None:
            data = TomlConfigSettingsSource(cls, toml_file=config)()
        return cls(**_merge(data, overrides))


def _merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# -------------------------------------------------------------------
# Flag parsing
# -------------------------------------------------------------------


def parse_t_grid(text: str) -> list[int]:
    """Parse ``LO:HI:STEP`` (inclusive) or a comma list into horizons.

    Raises:
        ValueError: On malformed input or a non-positive step.
    """
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            msg = f"expected LO:HI:STEP, got {text!r}"
            raise ValueError(msg)
        lo, hi, step = (int(p) for p in parts)
        if step <= 0:
            msg = f"step must be positive, got {step}"
            raise ValueError(msg)
        return list(range(lo, hi + 1, step))
    return [int(p) for p in text.split(",") if p.strip()]


def parse_alpha_list(text: str) -> list[float]:
    """Parse ``A[,A…]``."""
    return [float(p) for p in text.split(",") if p.strip()]

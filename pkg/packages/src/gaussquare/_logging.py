"""Log formatting and root logger configuration.

Numerical modules log at DEBUG with the numbers that matter attached as
``extra={"context": {...}}`` (horizon, truncation, pivot counts).
:class:`JsonFormatter` keeps the context as a nested object so a run can
be replayed from its log; :class:`TextFormatter` appends it to the line
as ``key=value`` pairs.

See Also:
    :mod:`gaussquare._settings` for :class:`LoggingSettings`.
"""

from __future__ import annotations

import contextlib
import logging
import sys
from datetime import UTC, datetime
from logging.handlers import RotatingFileHandler
from typing import Any

from gaussquare._json import dumps
from gaussquare._settings import LoggingSettings

_TEXT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
_MEGABYTE = 1024 * 1024


def _record_context(record: logging.LogRecord) -> dict[str, Any] | None:
    context = getattr(record, "context", None)
    if isinstance(context, dict) and context:
        return context
    return None


class JsonFormatter(logging.Formatter):
    """Emit log records as single-line JSON objects.

    Fields: ``timestamp`` (UTC ISO 8601), ``level``, ``logger``,
    ``message``, ``service``, ``version`` (omitted when empty),
    ``context`` (when the record carries one), ``exception`` and
    ``stack_info`` (when present).
    """

    def __init__(self, *, service: str = "", version: str = "") -> None:
        super().__init__()
        self._service = service
        self._version = version

    def format(self, record: logging.LogRecord) -> str:
        created = datetime.fromtimestamp(record.created, tz=UTC)
        entry: dict[str, Any] = {
            "timestamp": created.isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "service": self._service,
        }
        if self._version:
            entry["version"] = self._version
        if (context := _record_context(record)) is not None:
            entry["context"] = context
        if record.exc_info and record.exc_info[0] is not None:
            entry["exception"] = self.formatException(record.exc_info)
        if record.stack_info:
            entry["stack_info"] = self.formatStack(record.stack_info)
        return dumps(entry, default=str)


class TextFormatter(logging.Formatter):
    """Terminal lines with the record context appended as ``key=value``.

    Floats use ``.6g`` so a line stays readable; the JSON format keeps
    full precision.
    """

    def __init__(self) -> None:
        super().__init__(_TEXT_FORMAT)

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        context = _record_context(record)
        if context is None:
            return line
        pairs = " ".join(f"{k}={_short(v)}" for k, v in context.items())
        head, sep, tail = line.partition("\n")
        return f"{head} [{pairs}]{sep}{tail}"


def _short(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _handlers(settings: LoggingSettings) -> list[logging.Handler]:
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.file is not None:
        handlers.append(
            RotatingFileHandler(
                settings.file,
                maxBytes=settings.max_file_size_mb * _MEGABYTE,
                backupCount=settings.backup_count,
                encoding="utf-8",
            )
        )
    return handlers


def configure_logging(
    settings: LoggingSettings,
    *,
    service: str,
    version: str = "",
) -> None:
    """Replace the root logger's handlers according to *settings*.

    A stderr stream handler is always installed; a rotating file handler
    is added when ``settings.file`` is set.  Both share one formatter.
    """
    root = logging.getLogger()
    for old in root.handlers[:]:
        root.removeHandler(old)
        with contextlib.suppress(Exception):
            old.close()

    formatter: logging.Formatter = (
        JsonFormatter(service=service, version=version)
        if settings.format == "json"
        else TextFormatter()
    )
    for handler in _handlers(settings):
        handler.setFormatter(formatter)
        root.addHandler(handler)
    root.setLevel(settings.level)

"""Result tables: CSV or a JSON object mirroring it.

CSV output has a header row, ``.`` decimals and 17 significant digits so
every float round-trips.  The ``obj`` format is::

    {"command": "converge", "columns": [...], "rows": [{...}, ...]}

Every float cell must be finite; a NaN or infinity anywhere aborts the
write with :class:`~gaussquare.NonFiniteOutputError`; a row missing a
column raises :class:`~gaussquare.InvariantViolationError`.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Literal

from gaussquare._errors import InvariantViolationError, NonFiniteOutputError
from gaussquare._json import dumps_pretty

OutputFormat = Literal["csv", "obj"]
Cell = int | float

_FLOAT_FORMAT = ".17g"


def _checked(
    command: str, columns: Sequence[str], rows: Sequence[Mapping[str, Cell]]
) -> None:
    for index, row in enumerate(rows):
        missing = [c for c in columns if c not in row]
        if missing:
            msg = f"{command}: row {index} lacks columns {missing}"
            raise InvariantViolationError(msg)
        for column in columns:
            value = row[column]
            if isinstance(value, float) and not math.isfinite(value):
                msg = f"{command}: column {column!r} of row {index} is {value!r}"
                raise NonFiniteOutputError(msg)


def _cell(value: Cell) -> str:
    if isinstance(value, float):
        return format(value, _FLOAT_FORMAT)
    return str(value)


def render_rows(
    command: str,
    columns: Sequence[str],
    rows: Sequence[Mapping[str, Cell]],
    fmt: OutputFormat = "csv",
) -> str:
    """Render *rows* in column order."""
    _checked(command, columns, rows)
    if fmt == "obj":
        payload = {
            "command": command,
            "columns": list(columns),
            "rows": [{c: row[c] for c in columns} for row in rows],
        }
        return dumps_pretty(payload) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buffer.getvalue()


def write_rows(
    command: str,
    columns: Sequence[str],
    rows: Sequence[Mapping[str, Cell]],
    fmt: OutputFormat = "csv",
    out: Path | None = None,
) -> None:
    """Render and write to *out*, or to stdout when *out* is ``None``."""
    text = render_rows(command, columns, rows, fmt)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")

"""CSV and JSON plumbing for the command line.

Grid functions travel as CSV with a `t` column followed by value columns;
rows must follow the scale's point order. Floats are written with `repr`
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Sequence, TypeVar

from pydantic import BaseModel

from nablavar.calculus import nabla_derivative_n
from nablavar.errors import CsvFormatError, NotInScale
from nablavar.state import GridFunction, TimeScale
from nablavar.timescale import index_of, rho, sigma

ModelT = TypeVar("ModelT", bound=BaseModel)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def load_model(source: str, model: type[ModelT]) -> ModelT:
    """Validate `model` from inline JSON or from a JSON file path.

    Args:
        source: A JSON object literal (starting with "{") or a file path.
        model: Pydantic model to validate against.
    """
    text = source if source.lstrip().startswith("{") else Path(source).read_text("utf-8")
    return model.model_validate_json(text)


def dump_model(model: BaseModel) -> str:
    """Serialize a model as indented JSON with a trailing newline."""
    return model.model_dump_json(indent=2) + "\n"


def write_text(text: str, path: str | None) -> str:
    """Write text to `path`, or return it unchanged for stdout when path is None."""
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def format_columns(
    scale: TimeScale,
    columns: Sequence[tuple[str, GridFunction]],
) -> str:
    """Render grid functions side by side, one row per point of their union.

    Points outside a column's domain are left empty.
    """
    start = min(f.start for _, f in columns)
    stop = max(f.stop for _, f in columns)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", *(name for name, _ in columns)])
    for j in range(start, stop + 1):
        row = [_fmt(scale.points[j])]
        for _, f in columns:
            row.append(_fmt(f.values[j - f.start]) if f.start <= j <= f.stop else "")
        writer.writerow(row)
    return buffer.getvalue()


def format_grid(f: GridFunction) -> str:
    """Render one grid function as `t,value` CSV."""
    return format_columns(f.scale, [("value", f)])


def format_solution(y: GridFunction, r: int) -> str:
    """Render a solution with its nabla derivatives up to order r."""
    columns = [("y", y)]
    for i in range(1, r + 1):
        columns.append((f"y_nabla{i}", nabla_derivative_n(y, i)))
    return format_columns(y.scale, columns)


def format_scale_table(ts: TimeScale) -> str:
    """Render the point, graininess and jump tables of a scale."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "t", "nu", "sigma", "rho"])
    for j, t in enumerate(ts.points):
        writer.writerow(
            [j, _fmt(t), _fmt(ts.graininess[j]), _fmt(sigma(ts, t)), _fmt(rho(ts, t))]
        )
    return buffer.getvalue()


def parse_grid(text: str, scale: TimeScale) -> GridFunction:
    """Read a grid function from CSV text aligned to `scale`.

    The first column holds points, the second the values; further columns are
    ignored, so a solution CSV can be read back. Rows must be consecutive
    scale points in increasing order.

    Raises:
        CsvFormatError: On a missing header, bad numbers or misaligned points.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row and not row[0].startswith("#")]
    if len(rows) < 2 or rows[0][0].strip() != "t" or len(rows[0]) < 2:
        raise CsvFormatError("expected a header 't,<values>' and at least one row")

    start: int | None = None
    values: list[float] = []
    for line, row in enumerate(rows[1:], start=2):
        try:
            t, value = float(row[0]), float(row[1])
        except (ValueError, IndexError) as exc:
            raise CsvFormatError(f"row {line}: {exc}") from exc
        if not math.isfinite(value):
            raise CsvFormatError(f"row {line}: value {value!r} is not finite")
        try:
            j = index_of(scale, t)
        except NotInScale as exc:
            raise CsvFormatError(f"row {line}: {exc}") from exc
        if start is None:
            start = j
        elif j != start + len(values):
            raise CsvFormatError(f"row {line}: t={t!r} breaks the scale's point order")
        values.append(value)

    assert start is not None
    return GridFunction.on(scale, values, start=start)


def read_grid(path: str, scale: TimeScale) -> GridFunction:
    """Read a grid-function CSV file (UTF-8)."""
    return parse_grid(Path(path).read_text("utf-8"), scale)


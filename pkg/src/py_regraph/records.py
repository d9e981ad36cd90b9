"""CSV/JSON result files with a provenance header and atomic writes.

Every CSV file starts with a single ``# config: <json>`` line carrying the run
configuration, followed by the header row of a named schema. Writers go through
a temporary file in the target directory and :func:`os.replace`, so a reader
never observes a half-written file.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

PathLike = Union[str, "os.PathLike[str]"]

#: Prefix of the provenance line in CSV outputs.
CONFIG_PREFIX = "# config: "

#: Column layout of every CSV schema the laboratory writes.
SCHEMAS: Dict[str, Tuple[str, ...]] = {
    "gamma": ("i", "gamma_i"),
    "rigidity": ("n", "d", "seed", "i", "lambda_i", "gamma_i", "r_i"),
    "edge_scan": ("n", "d", "seed", "lambda2", "lambdaN"),
    "stieltjes": ("n", "d", "seed", "E", "eta", "abs_m_minus_md"),
}

logger = logging.getLogger(__name__)


class RecordSchemaError(ValueError):
    """Raised when a result file does not match its declared schema."""


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars, arrays and complex numbers to JSON types.

    Complex values become ``{"re": x, "im": y}``.
    """
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    return value


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` through a sibling temporary file."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(
        dir=str(target.parent), prefix=f".{target.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("Wrote %s (%d bytes)", target, len(text))
    return target


def _config_line(config: Optional[Mapping[str, Any]]) -> str:
    payload = json.dumps(to_jsonable(dict(config or {})), sort_keys=True)
    return f"{CONFIG_PREFIX}{payload}\n"


def format_cell(value: Any) -> str:
    """Render one CSV cell; floats use ``repr`` so they round-trip exactly."""
    value = to_jsonable(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def render_csv(
    schema: str,
    rows: Iterable[Union[Sequence[Any], Mapping[str, Any]]],
    config: Optional[Mapping[str, Any]] = None,
) -> str:
    """Render rows of ``schema`` as CSV text with the provenance line.

    Rows are sequences in column order or mappings keyed by column name.
    """
    header = schema_header(schema)
    buffer = io.StringIO()
    buffer.write(_config_line(config))
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if isinstance(row, Mapping):
            missing = [k for k in header if k not in row]
            if missing:
                raise RecordSchemaError(f"Row lacks column(s) {missing} of {schema!r}.")
            row = [row[k] for k in header]
        row = list(row)
        if len(row) != len(header):
            raise RecordSchemaError(
                f"Row of length {len(row)} does not fit schema {schema!r} "
                f"({len(header)} columns)."
            )
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


def write_csv(
    path: PathLike,
    schema: str,
    rows: Iterable[Union[Sequence[Any], Mapping[str, Any]]],
    config: Optional[Mapping[str, Any]] = None,
) -> Path:
    """Atomically write a schema-checked CSV file.

    Args:
        path: Destination file.
        schema: Key of :data:`SCHEMAS`.
        rows: Rows in schema column order, or mappings by column name.
        config: Run configuration recorded on the provenance line.

    Returns:
        Path: The written file.

    Raises:
        RecordSchemaError: Unknown schema or a row of the wrong width.
    """
    return atomic_write_text(path, render_csv(schema, rows, config))


def write_json(
    path: PathLike, payload: Any, config: Optional[Mapping[str, Any]] = None
) -> Path:
    """Atomically write ``{"config": ..., "result": payload}`` as JSON."""
    document = {
        "config": to_jsonable(dict(config or {})),
        "result": to_jsonable(payload),
    }
    return atomic_write_text(path, json.dumps(document, indent=2) + "\n")


def schema_header(schema: str) -> Tuple[str, ...]:
    """Column names of ``schema``."""
    try:
        return SCHEMAS[schema]
    except KeyError:
        raise RecordSchemaError(
            f"Unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}."
        ) from None


def read_csv(
    path: PathLike, schema: str
) -> Tuple[Dict[str, Any], List[Dict[str, str]]]:
    """Read a CSV file written by :func:`write_csv`.

    Returns:
        Tuple[Dict[str, Any], List[Dict[str, str]]]: The provenance config and
        the rows as string-valued mappings.

    Raises:
        RecordSchemaError: Missing provenance line or a header that differs
            from ``schema``.
    """
    header = schema_header(schema)
    text = Path(path).read_text(encoding="utf-8")
    first, _, rest = text.partition("\n")
    if not first.startswith(CONFIG_PREFIX):
        raise RecordSchemaError(
            f"{path}: missing '{CONFIG_PREFIX.strip()}' provenance line."
        )
    try:
        config = json.loads(first[len(CONFIG_PREFIX):])
    except json.JSONDecodeError as exc:
        raise RecordSchemaError(f"{path}: unreadable provenance line ({exc}).") from exc
    reader = csv.reader(io.StringIO(rest))
    found = tuple(next(reader, ()))
    if found != header:
        raise RecordSchemaError(
            f"{path}: header {list(found)} does not match schema {schema!r} {list(header)}."
        )
    return config, [dict(zip(header, row)) for row in reader if row]


def detect_schema(path: PathLike) -> str:
    """Name of the schema whose header the CSV file at ``path`` carries.

    Raises:
        RecordSchemaError: If the header matches no known schema.
    """
    with open(path, encoding="utf-8", newline="") as handle:
        first = handle.readline()
        if not first.startswith(CONFIG_PREFIX):
            raise RecordSchemaError(f"{path}: missing provenance line.")
        found = tuple(next(csv.reader(handle), ()))
    for name, header in SCHEMAS.items():
        if header == found:
            return name
    raise RecordSchemaError(f"{path}: header {list(found)} matches no known schema.")


def read_json(path: PathLike) -> Dict[str, Any]:
    """Load a JSON document written by :func:`write_json`."""
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(document, dict) or "result" not in document:
        raise RecordSchemaError(f"{path}: not a result document.")
    return document


__all__ = [
    "CONFIG_PREFIX",
    "RecordSchemaError",
    "SCHEMAS",
    "atomic_write_text",
    "detect_schema",
    "format_cell",
    "read_csv",
    "read_json",
    "render_csv",
    "schema_header",
    "to_jsonable",
    "write_csv",
    "write_json",
]

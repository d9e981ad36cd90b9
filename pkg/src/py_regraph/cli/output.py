"""Shared output format and console/logging utilities for the ``py-regraph`` CLI."""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import os
import sys
from typing import Any, Callable, Mapping, Optional

import typer
import yaml
from rich.console import Console
from rich.table import Table

from py_regraph.records import to_jsonable

#: Name of the shared logger used by the CLI and library diagnostics.
LOGGER_NAME = "py_regraph"


class OutputFormat(str, enum.Enum):
    """Supported formats of summaries printed to stdout.

    Attributes:
        TABLE: Human-readable rich table (default).
        JSON: Machine-readable JSON.
        YAML: Machine-readable YAML.
        CSV: Machine-readable CSV.
    """

    TABLE = "table"
    JSON = "json"
    YAML = "yaml"
    CSV = "csv"


def _emit_csv(data: Any) -> None:
    """Render a row list (or a single mapping) as CSV on stdout."""
    rows = data if isinstance(data, list) else [data]
    headers: list = []
    seen = set()
    for row in rows:
        if isinstance(row, dict):
            for key in row:
                if key not in seen:
                    seen.add(key)
                    headers.append(key)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_cell(row.get(h, "")) for h in headers])
    typer.echo(buffer.getvalue(), nl=False)


def _cell(value: Any) -> Any:
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return value


def render_mapping(
    data: Any, title: Optional[str] = None, obj: Optional[Mapping[str, Any]] = None
) -> None:
    """Default table renderer: one row per key, or one row per record."""
    console = get_console(obj)
    if isinstance(data, list):
        if not data:
            console.print("(empty)")
            return
        table = Table(*[str(k) for k in data[0]], title=title)
        for row in data:
            table.add_row(*[_text(row.get(k)) for k in data[0]])
    else:
        table = Table("Field", "Value", title=title)
        for key, value in data.items():
            table.add_row(str(key), _text(value))
    console.print(table)


def _text(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return "" if value is None else str(value)


def emit(
    data: Any,
    output_format: OutputFormat,
    table_fn: Optional[Callable[[Any], None]] = None,
    obj: Optional[Mapping[str, Any]] = None,
) -> None:
    """Emit ``data`` in the requested output format.

    Complex numbers become ``{"re": x, "im": y}`` and ``numpy`` scalars plain
    Python numbers before serialization.

    Args:
        data: A mapping or a list of mappings.
        output_format: The desired output format.
        table_fn: Renders ``data`` as a rich table; :func:`render_mapping`
            when omitted.
        obj: CLI context object, consulted for ``no_color``.
    """
    data = to_jsonable(data)
    if output_format == OutputFormat.JSON:
        typer.echo(json.dumps(data, indent=2, ensure_ascii=False))
    elif output_format == OutputFormat.YAML:
        text = yaml.safe_dump(data, allow_unicode=True, default_flow_style=False)
        typer.echo(text, nl=False)
    elif output_format == OutputFormat.CSV:
        _emit_csv(data)
    else:
        if table_fn is not None:
            table_fn(data)
        else:
            render_mapping(data, obj=obj)


def get_console(obj: Optional[Mapping[str, Any]] = None) -> Console:
    """Return a ``rich`` console that honors ``--no-color`` and ``NO_COLOR``."""
    if (obj or {}).get("no_color") or os.environ.get("NO_COLOR"):
        return Console(no_color=True, force_terminal=False)
    return Console()


def echo_summary(obj: Mapping[str, Any], line: str) -> None:
    """Print the one-line run summary on stderr unless ``--quiet`` is set."""
    if not obj.get("quiet"):
        typer.echo(line, err=True)


def configure_logging(verbose: bool = False, debug: bool = False) -> None:
    """Configure the shared ``py_regraph`` logger for CLI diagnostics.

    Diagnostics go to stderr through the stdlib ``logging`` module, so they
    never mix with the payload written to stdout.

    Args:
        verbose: Enable INFO-level diagnostics (per-size progress, switch counts).
        debug: Enable DEBUG-level diagnostics (rejection attempts, file writes).
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.handlers.clear()

    if debug:
        level = logging.DEBUG
    elif verbose:
        level = logging.INFO
    else:
        level = logging.WARNING

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


__all__ = [
    "LOGGER_NAME",
    "OutputFormat",
    "configure_logging",
    "echo_summary",
    "emit",
    "get_console",
    "render_mapping",
]

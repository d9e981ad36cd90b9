"""Options and helpers shared by the ``py-regraph`` subcommands."""

from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Tuple

import numpy as np
import typer

from py_regraph.models import RunConfig
from py_regraph.records import render_csv, write_csv, write_json
from py_regraph.settings import Settings

from .output import OutputFormat, echo_summary, emit

N_OPTION = typer.Option(None, "--n", help="Vertex count.")
D_OPTION = typer.Option(None, "--d", help="Degree.")
ELL_OPTION = typer.Option(None, "--ell", help="Tree depth / resampling radius.")
C_OPTION = typer.Option(None, "--c", help="Small constant c (radii, census threshold).")
A_OPTION = typer.Option(None, "--a", help="Spectral-domain constant a.")
OMEGA_OPTION = typer.Option(None, "--omega-d", help="Excess cap of the census.")
SAMPLES_OPTION = typer.Option(None, "--samples", help="Samples (per size).")
SEED_OPTION = typer.Option(None, "--seed", help="Run seed.")
SIZES_OPTION = typer.Option(
    None, "--sizes", help="Comma-separated ascending sizes, e.g. 500,1000,2000."
)
Z_OPTION = typer.Option(
    None, "--z", help="Complex spectral parameter, e.g. 0.5+1j. Repeatable."
)
GRID_OPTION = typer.Option(
    None,
    "--e-grid",
    help="Energy grid 'start,stop,count' combined with every --eta value.",
)
ETA_OPTION = typer.Option(
    None, "--eta", help="Imaginary parts for --e-grid. Repeatable."
)
OUTPUT_OPTION = typer.Option(
    None, "--output", "-o", help="Result file, written atomically. Stdout if omitted."
)
FORMAT_OPTION = typer.Option(None, "--format", help="Result file format: csv or json.")


def parse_sizes(text: Optional[str]) -> Tuple[int, ...]:
    """Parse ``"500,1000"`` into ``(500, 1000)``."""
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise typer.BadParameter(f"Sizes must be integers: {text!r}") from None


def parse_z(values: Optional[Sequence[str]]) -> Tuple[complex, ...]:
    """Parse complex literals; ``i`` is accepted for ``j``."""
    out = []
    for text in values or ():
        try:
            out.append(complex(text.strip().replace(" ", "").replace("i", "j")))
        except ValueError:
            raise typer.BadParameter(f"Not a complex number: {text!r}") from None
    return tuple(out)


def parse_grid(
    grid: Optional[str], etas: Optional[Sequence[float]]
) -> Tuple[complex, ...]:
    """Expand ``start,stop,count`` and the ``--eta`` values into a grid."""
    if not grid:
        return ()
    try:
        start, stop, count = grid.split(",")
        energies = np.linspace(float(start), float(stop), int(count))
    except ValueError:
        message = f"Grid must read 'start,stop,count': {grid!r}"
        raise typer.BadParameter(message) from None
    if not etas:
        raise typer.BadParameter("--e-grid needs at least one --eta.")
    return tuple(complex(float(e), float(eta)) for eta in etas for e in energies)


def build_config(ctx: typer.Context, subcommand: str, **flags: Any) -> RunConfig:
    """Merge flags over the loaded settings into a validated :class:`RunConfig`.

    ``None`` flags fall back to the settings resolved by the app callback;
    without ``--n`` the first of ``--sizes`` is the nominal size.
    """
    settings: Settings = ctx.obj["settings"]

    def pick(name: str) -> Any:
        value = flags.get(name)
        return getattr(settings, name) if value is None else value

    sizes = tuple(flags.get("sizes") or ())
    n = pick("n") if flags.get("n") is not None or not sizes else sizes[0]
    z = tuple(flags.get("z") or ()) + tuple(flags.get("grid") or ())
    return RunConfig(
        subcommand=subcommand,
        n=int(n),
        d=int(pick("d")),
        ell=int(pick("ell")),
        c=float(pick("c")),
        a=float(pick("a")),
        omega_d=int(pick("omega_d")),
        z=z,
        samples=int(pick("samples")),
        seed=int(pick("seed")),
        output=str(flags["output"]) if flags.get("output") else None,
        format=str(pick("format")),
        workers=int(settings.workers),
        sizes=sizes or (int(n),),
    )


def write_rows(
    ctx: typer.Context,
    config: RunConfig,
    schema: str,
    rows: Sequence[Mapping[str, Any]],
    summary: Optional[Mapping[str, Any]] = None,
) -> Optional[Path]:
    """Persist schema rows as CSV or JSON, or print them when no output is set."""
    if config.format == "json":
        payload = {"kind": schema, "summary": dict(summary or {}), "rows": list(rows)}
        if config.output is None:
            emit({"config": config.as_dict(), "result": payload}, OutputFormat.JSON)
            return None
        return write_json(config.output, payload, config.as_dict())
    if config.output is None:
        typer.echo(render_csv(schema, rows, config.as_dict()), nl=False)
        return None
    return write_csv(config.output, schema, rows, config.as_dict())


def write_result(
    ctx: typer.Context,
    config: RunConfig,
    payload: Mapping[str, Any],
    display: Optional[Any] = None,
) -> Optional[Path]:
    """Write the JSON result document and print a view of it.

    ``display`` is the compact view shown as a table or CSV. Without
    ``--output`` the JSON and YAML formats print the whole payload instead.
    """
    fmt = ctx.obj["output_format"]
    if config.output is not None:
        path = write_json(config.output, payload, config.as_dict())
        if display is not None:
            emit(display, fmt, obj=ctx.obj)
        return path
    whole = display is None or fmt in (OutputFormat.JSON, OutputFormat.YAML)
    emit(dict(payload) if whole else display, fmt, obj=ctx.obj)
    return None


def finish(ctx: typer.Context, line: str, path: Optional[Path] = None) -> None:
    """Echo the one-line summary, naming the written file if any."""
    echo_summary(ctx.obj, f"{line} -> {path}" if path else line)


__all__ = [
    "build_config",
    "finish",
    "parse_grid",
    "parse_sizes",
    "parse_z",
    "write_result",
    "write_rows",
]

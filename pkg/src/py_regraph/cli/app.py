"""Command line interface application for ``py-regraph``.

This module initializes the Typer application, registers every subcommand
and maps outcomes to exit statuses in :func:`dispatch`. It is imported by
:mod:`py_regraph.__main__` to provide a single entry point for the CLI.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import typer

try:  # typer >= 0.26 vendors click and raises its own exception classes
    from typer._click import exceptions as click
except ImportError:  # pragma: no cover
    import click
from dotenv import load_dotenv
from numpy.linalg import LinAlgError

from py_regraph.settings import load_settings

from . import graphs, report, resolvent, scans, switching
from .output import LOGGER_NAME, OutputFormat, configure_logging

load_dotenv()

logger = logging.getLogger(LOGGER_NAME)

app = typer.Typer(
    help="A desk-scale laboratory for random regular graphs and their spectra.",
    # With this setting, subcommands are required.
    context_settings={"help_option_names": ["-h", "--help"]},
    no_args_is_help=True,
)


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(
        None,
        "--config",
        help="Flat key=value file of run defaults (REGRAPH_* variables also apply).",
    ),
    workers: Optional[int] = typer.Option(
        None, "--workers", help="Worker processes for sampling (default 1)."
    ),
    output_format: OutputFormat = typer.Option(
        OutputFormat.TABLE,
        "--output-format",
        help="Format of the summary printed to stdout.",
    ),
    quiet: bool = typer.Option(
        False,
        "--quiet",
        "-q",
        help=(
            "Suppress the one-line run summary on stderr. Results and errors "
            "are still shown."
        ),
    ),
    no_color: bool = typer.Option(
        False,
        "--no-color",
        help=(
            "Disable ANSI colors in table output. The NO_COLOR environment "
            "variable is also respected."
        ),
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Enable verbose (INFO-level) diagnostics on stderr.",
    ),
    debug: bool = typer.Option(
        False,
        "--debug",
        help="Enable debug-level diagnostics on stderr, including file writes.",
    ),
):
    """
    Main callback for the regraph CLI.
    Resolves the run defaults and the global output/diagnostic options and
    passes them to the subcommands via ``ctx.obj``.
    """
    configure_logging(verbose=verbose, debug=debug)
    ctx.ensure_object(dict)
    ctx.obj = {
        "settings": load_settings(config, overrides={"workers": workers}),
        "output_format": output_format,
        "quiet": quiet,
        "no_color": no_color,
        "verbose": verbose,
        "debug": debug,
    }


app.command("sample")(graphs.sample_cmd)
app.command("spectrum")(graphs.spectrum_cmd)
app.command("gamma")(graphs.gamma_cmd)
app.command("greens")(resolvent.greens_cmd)
app.command("moments")(resolvent.moments_cmd)
app.command("rigidity")(scans.rigidity_cmd)
app.command("edge-scan")(scans.edge_scan_cmd)
app.command("stieltjes-scan")(scans.stieltjes_scan_cmd)
app.command("resample")(switching.resample_cmd)
app.command("woodbury-check")(switching.woodbury_check_cmd)
app.command("report")(report.report_cmd)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI on ``argv`` and return its exit status.

    Returns:
        int: 0 on success, 1 on usage and validation errors (bad flags,
        parity, schema mismatch), 2 on runtime failures (eigensolver,
        sampling budget, I/O).
    """
    command = typer.main.get_command(app)
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        status = command.main(args=args, prog_name="py-regraph", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        typer.echo("Aborted.", err=True)
        return 1
    except LinAlgError as exc:
        logger.debug("Linear algebra failure", exc_info=True)
        typer.echo(f"Error: {exc}", err=True)
        return 2
    except ValueError as exc:
        logger.debug("Validation failure", exc_info=True)
        typer.echo(f"Error: {exc}", err=True)
        return 1
    except Exception as exc:
        logger.debug("Runtime failure", exc_info=True)
        typer.echo(f"Error: {exc}", err=True)
        return 2
    return status if isinstance(status, int) else 0


def main() -> None:
    """Console-script entry point."""
    sys.exit(dispatch())


__all__ = ["app", "dispatch", "main"]

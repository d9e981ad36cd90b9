"""Aggregation and acceptance command for ``py-regraph``."""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from py_regraph.acceptance import CheckStatus, run_self_checks
from py_regraph.config import DEFAULT_QUANTILE
from py_regraph.report import build_report

from .common import SEED_OPTION, build_config, finish
from .output import OutputFormat, emit, get_console

_STATUS_STYLE = {
    CheckStatus.PASS: "green",
    CheckStatus.WARN: "yellow",
    CheckStatus.FAIL: "red",
}


def _render_table(checks, obj=None) -> None:
    """Render acceptance checks as a rich table.

    Args:
        checks: List of ``{"criterion", "name", "status", "message"}`` dicts,
            as returned by ``AcceptanceReport.as_dicts()``.
    """
    table = Table("Criterion", "Check", "Status", "Message", title="Acceptance")
    for check in checks:
        style = _STATUS_STYLE.get(CheckStatus(check["status"]), "")
        status_text = check["status"]
        if style:
            status_text = f"[{style}]{status_text}[/{style}]"
        table.add_row(check["criterion"], check["name"], status_text, check["message"])
    get_console(obj).print(table)


def report_cmd(
    ctx: typer.Context,
    inputs: Optional[List[Path]] = typer.Argument(
        None, help="CSV and JSON result files written by the other subcommands."
    ),
    output_dir: Optional[Path] = typer.Option(
        None,
        "--output-dir",
        help="Directory for summary.json, the .dat files and plots.gp.",
    ),
    level: float = typer.Option(
        DEFAULT_QUANTILE, "--level", help="Quantile level for Stieltjes rows."
    ),
    self_check: bool = typer.Option(
        False, "--self-check", help="Also run the exact identity checks."
    ),
    seed: Optional[int] = SEED_OPTION,
    strict: bool = typer.Option(
        False, "--strict", help="Exit with status 1 when any check fails."
    ),
):
    """Aggregate result files into fits, plot data and an acceptance table."""
    config = build_config(
        ctx,
        "report",
        seed=seed,
        output=str(output_dir) if output_dir else None,
        format="json",
    )
    paths = list(inputs or ())
    extra = run_self_checks(seed=config.seed) if self_check else None
    report = build_report(paths, output_dir, level=level, extra_checks=extra)

    fmt = ctx.obj["output_format"]
    if fmt == OutputFormat.TABLE:
        _render_table(report.acceptance.as_dicts(), ctx.obj)
    else:
        emit(report.as_dict(), fmt, obj=ctx.obj)

    failed = sum(1 for c in report.acceptance.checks if c.status == CheckStatus.FAIL)
    summary_path = output_dir / "summary.json" if output_dir else None
    finish(
        ctx,
        f"{len(paths)} input(s), {len(report.acceptance.checks)} check(s), "
        f"{failed} failed.",
        summary_path,
    )
    if strict:
        raise typer.Exit(report.acceptance.exit_code)


__all__ = ["report_cmd"]

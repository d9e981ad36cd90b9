"""Scaling scans over graph sizes: rigidity, edge fluctuations, Stieltjes."""

from typing import List, Optional

import typer

from py_regraph.config import DEFAULT_QUANTILE, MIN_FIT_SIZES
from py_regraph.experiments import (
    edge_fluctuation_scan,
    edge_window,
    edge_window_test,
    rigidity_profile,
    rigidity_rows,
    rigidity_scan,
    sample_spectra,
    stieltjes_concentration_scan,
)
from py_regraph.models import RunConfig
from py_regraph.report import summarize_rigidity

from .common import (
    A_OPTION,
    C_OPTION,
    D_OPTION,
    ELL_OPTION,
    ETA_OPTION,
    FORMAT_OPTION,
    GRID_OPTION,
    N_OPTION,
    OUTPUT_OPTION,
    SAMPLES_OPTION,
    SEED_OPTION,
    SIZES_OPTION,
    Z_OPTION,
    build_config,
    finish,
    parse_grid,
    parse_sizes,
    parse_z,
    write_result,
    write_rows,
)


def _single_size_rigidity(config: RunConfig) -> list:
    rows = []
    for rec in sample_spectra(
        config.sizes[0], config.d, config.samples, config.seed, workers=config.workers
    ):
        rows.extend(rigidity_rows(rec, rigidity_profile(rec)))
    return rows


def rigidity_cmd(
    ctx: typer.Context,
    sizes: Optional[str] = SIZES_OPTION,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    fmt: Optional[str] = FORMAT_OPTION,
):
    """Normalized eigenvalue deviations from the classical locations.

    With two or more sizes the median of max_i r_i is fitted against N.
    """
    config = build_config(
        ctx,
        "rigidity",
        sizes=parse_sizes(sizes),
        n=n,
        d=d,
        samples=samples,
        seed=seed,
        output=output,
        format=fmt,
    )
    if len(config.sizes) >= MIN_FIT_SIZES:
        rows = rigidity_scan(
            config.sizes, config.samples, config.d, config.seed, workers=config.workers
        ).rows
    else:
        rows = _single_size_rigidity(config)
    summary, _ = summarize_rigidity(rows)
    path = write_rows(ctx, config, "rigidity", rows, summary)
    worst = summary["max_r"]
    finish(ctx, f"Rigidity at sizes {list(config.sizes)}: max r {worst:.4g}.", path)


def edge_scan_cmd(
    ctx: typer.Context,
    sizes: Optional[str] = SIZES_OPTION,
    d: Optional[int] = D_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    fmt: Optional[str] = FORMAT_OPTION,
):
    """Fluctuation exponents of lambda_2 and lambda_N across sizes."""
    config = build_config(
        ctx,
        "edge-scan",
        sizes=parse_sizes(sizes),
        d=d,
        samples=samples,
        seed=seed,
        output=output,
        format=fmt,
    )
    scan = edge_fluctuation_scan(
        config.sizes, config.samples, config.d, config.seed, workers=config.workers
    )
    summary = scan.as_dict()
    path = write_rows(ctx, config, "edge_scan", scan.rows, summary)
    finish(
        ctx,
        f"std(lambda_2 - 2) ~ N^{scan.lambda2.loglog_slope:.3f}, "
        f"std(|lambda_N| - 2) ~ N^{scan.lambda_n.loglog_slope:.3f}.",
        path,
    )


def _edge_window_run(ctx: typer.Context, config: RunConfig) -> None:
    runs = []
    for size in config.sizes:
        report = edge_window_test(
            size, config.d, config.samples, config.seed, workers=config.workers
        )
        runs.append(
            {
                "n": report.n,
                "samples": report.samples,
                "hits": report.hits,
                "lower": report.lower,
                "upper": report.upper,
                "clear_fraction": report.clear_fraction,
            }
        )
    path = write_result(ctx, config, {"kind": "edge_window", "runs": runs}, runs)
    clear = min(r["clear_fraction"] for r in runs)
    finish(ctx, f"Edge window clear in at least {clear:.1%} of samples.", path)


def stieltjes_scan_cmd(
    ctx: typer.Context,
    sizes: Optional[str] = SIZES_OPTION,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    ell: Optional[int] = ELL_OPTION,
    c: Optional[float] = C_OPTION,
    a: Optional[float] = A_OPTION,
    z: Optional[List[str]] = Z_OPTION,
    grid: Optional[str] = GRID_OPTION,
    eta: Optional[List[float]] = ETA_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    level: float = typer.Option(
        DEFAULT_QUANTILE, "--level", help="Reported quantile level."
    ),
    window: bool = typer.Option(
        False,
        "--edge-window",
        help="Instead count eigenvalues in the edge window just above 2.",
    ),
    output: Optional[str] = OUTPUT_OPTION,
    fmt: Optional[str] = FORMAT_OPTION,
):
    """Concentration of the Stieltjes transform m(z) around m_d(z).

    With --edge-window no z is needed: the window centre 2 + kappa + i eta of
    the smallest size is recorded instead and the result is JSON.
    """
    parsed = parse_sizes(sizes)
    points = parse_z(z) + parse_grid(grid, eta)
    if window:
        if not parsed and n is None:
            n = ctx.obj["settings"].n
        kappa, width = edge_window(parsed[0] if parsed else n)
        points = points or (complex(2.0 + kappa, width),)
    config = build_config(
        ctx,
        "stieltjes-scan",
        sizes=parsed,
        n=n,
        d=d,
        ell=ell,
        c=c,
        a=a,
        z=points,
        samples=samples,
        seed=seed,
        output=output,
        format="json" if window else fmt,
    )
    if window:
        _edge_window_run(ctx, config)
        return
    rows: list = []
    summaries = []
    for index, size in enumerate(config.sizes):
        scan = stieltjes_concentration_scan(
            size,
            config.d,
            config.z,
            config.samples,
            config.seed,
            params=config.law_params(),
            level=level,
            size_index=index,
            workers=config.workers,
        )
        rows.extend(scan.rows)
        summaries.append(scan.as_dict())
    path = write_rows(ctx, config, "stieltjes", rows, {"scans": summaries})
    worst = max(p["ratio"] for s in summaries for p in s["points"])
    finish(ctx, f"Largest quantile/envelope ratio {worst:.3g}.", path)


__all__ = ["edge_scan_cmd", "rigidity_cmd", "stieltjes_scan_cmd"]

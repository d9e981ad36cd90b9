"""Green's function and self-consistent moment commands for ``py-regraph``."""

from dataclasses import asdict
from typing import List, Optional

import typer

from py_regraph.config import DEFAULT_R_FRAC
from py_regraph.experiments import (
    ExperimentError,
    moment_ratio_fit,
    sc_moment_estimate,
)
from py_regraph.graph import sample_uniform
from py_regraph.graphio import read_graph
from py_regraph.greens import SpectralDecomposition, greens, sc_residuals, ward_check
from py_regraph.km import error_params, in_spectral_domain, m_d
from py_regraph.models import RunConfig

from .common import (
    A_OPTION,
    C_OPTION,
    D_OPTION,
    ELL_OPTION,
    ETA_OPTION,
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
)

GRAPH_OPTION = typer.Option(
    None, "--graph", help="Read the graph from a regraph v1 file instead of sampling."
)


def _load_graph(config: RunConfig, graph: Optional[str], n: Optional[int] = None):
    n = config.n if n is None else n
    if graph is None:
        return sample_uniform(n, config.d, config.seed)
    g = read_graph(graph)
    if (g.n, g.d) != (n, config.d):
        raise typer.BadParameter(
            f"{graph} holds a {g.d}-regular graph on {g.n} vertices, "
            f"expected n={n}, d={config.d}."
        )
    return g


def greens_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    ell: Optional[int] = ELL_OPTION,
    c: Optional[float] = C_OPTION,
    a: Optional[float] = A_OPTION,
    z: Optional[List[str]] = Z_OPTION,
    grid: Optional[str] = GRID_OPTION,
    eta: Optional[List[float]] = ETA_OPTION,
    seed: Optional[int] = SEED_OPTION,
    graph: Optional[str] = GRAPH_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Green's function diagnostics: m, Q, Y(Q), X(Q) and the Ward identity."""
    config = build_config(
        ctx,
        "greens",
        n=n,
        d=d,
        ell=ell,
        c=c,
        a=a,
        z=parse_z(z),
        grid=parse_grid(grid, eta),
        seed=seed,
        output=output,
        format="json",
    )
    g = _load_graph(config, graph)
    params = config.law_params()
    log_power = ctx.obj["settings"].log_power
    decomposition = SpectralDecomposition.of_graph(g)
    points = []
    for w in config.z:
        gm = greens(g, w, decomposition)
        res = sc_residuals(g, gm, config.ell, config.c)
        errors = error_params(w, DEFAULT_R_FRAC, g.n, g.d, log_power=log_power)
        points.append(
            {
                "z": w,
                "in_domain": in_spectral_domain(w, g.n, params),
                "m": gm.m,
                "m_d": m_d(w, g.d),
                "q": res.q,
                "y_of_q": res.y_of_q,
                "x_of_q": res.x_of_q,
                "ward_dev": ward_check(gm).worst,
                "residuals": {
                    "q_minus_y": res.q_minus_y,
                    "m_minus_x": res.m_minus_x,
                    "phi": res.phi,
                    "eps_prime": errors.eps_prime,
                    "eps": errors.eps,
                    "log_power": errors.log_power,
                },
            }
        )
    display = [
        {
            "z": str(p["z"]),
            "|m - m_d|": abs(p["m"] - p["m_d"]),
            "|Q - Y(Q)|": abs(p["residuals"]["q_minus_y"]),
            "ward_dev": p["ward_dev"],
        }
        for p in points
    ]
    payload = {"kind": "greens", "n": g.n, "d": g.d, "points": points}
    path = write_result(ctx, config, payload, display=display)
    worst = max(p["ward_dev"] for p in points)
    finish(ctx, f"{len(points)} points, worst Ward deviation {worst:.2e}.", path)


def moments_cmd(
    ctx: typer.Context,
    sizes: Optional[str] = SIZES_OPTION,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    ell: Optional[int] = ELL_OPTION,
    c: Optional[float] = C_OPTION,
    a: Optional[float] = A_OPTION,
    z: Optional[List[str]] = Z_OPTION,
    p: int = typer.Option(1, "--p", help="Moment order; the power is 2p (1 or 2)."),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    graph: Optional[str] = GRAPH_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Self-consistent moment E|Q - Y(Q)|^{2p} against its control, per size."""
    points = parse_z(z)
    if len(points) != 1:
        raise typer.BadParameter("moments takes exactly one --z.")
    config = build_config(
        ctx,
        "moments",
        sizes=parse_sizes(sizes),
        n=n,
        d=d,
        ell=ell,
        c=c,
        a=a,
        z=points,
        samples=samples,
        seed=seed,
        output=output,
        format="json",
    )
    if graph is not None and len(config.sizes) > 1:
        raise typer.BadParameter("--graph fixes a single size; drop --sizes.")
    fixed = None
    if graph is not None:
        fixed = _load_graph(config, graph, config.sizes[0])
    params = config.law_params()
    reports = [
        sc_moment_estimate(
            size,
            config.d,
            config.ell,
            config.z[0],
            p,
            config.samples,
            config.seed,
            graph=fixed,
            params=params,
            size_index=index,
            workers=config.workers,
        )
        for index, size in enumerate(config.sizes)
    ]
    entries = [{**asdict(r), "ratio": r.ratio} for r in reports]
    fit = None
    if len(reports) > 1:
        try:
            slope, stderr, intercept = moment_ratio_fit(reports)
            fit = {
                "loglog_slope": slope,
                "slope_stderr": stderr,
                "intercept": intercept,
            }
        except ExperimentError as exc:
            typer.echo(f"No moment fit: {exc}", err=True)
    payload = {"kind": "moments", "reports": entries, "fit": fit}
    path = write_result(ctx, config, payload, display=entries)
    finish(ctx, f"Moment ratios at {len(entries)} size(s).", path)


__all__ = ["greens_cmd", "moments_cmd"]

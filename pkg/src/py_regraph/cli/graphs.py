"""Graph sampling and spectrum commands for ``py-regraph``."""

from dataclasses import asdict
from typing import Optional

import typer

from py_regraph.experiments import esd_vs_km, rigidity_profile, spectrum
from py_regraph.graph import omega_bar_census, sample_uniform
from py_regraph.graphio import dumps
from py_regraph.km import classical_locations
from py_regraph.records import atomic_write_text

from .common import (
    C_OPTION,
    D_OPTION,
    FORMAT_OPTION,
    N_OPTION,
    OMEGA_OPTION,
    OUTPUT_OPTION,
    SEED_OPTION,
    build_config,
    finish,
    write_result,
    write_rows,
)


def sample_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    c: Optional[float] = C_OPTION,
    omega_d: Optional[int] = OMEGA_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    fmt: Optional[str] = FORMAT_OPTION,
):
    """Sample one uniform d-regular graph.

    The csv format writes the plain ``regraph v1`` edge list; json adds the
    typical-graph census.
    """
    config = build_config(
        ctx,
        "sample",
        n=n,
        d=d,
        c=c,
        omega_d=omega_d,
        seed=seed,
        output=output,
        format=fmt,
    )
    g = sample_uniform(config.n, config.d, config.seed)
    if config.format == "json":
        census = omega_bar_census(g, config.c, omega_d=config.omega_d)
        payload = {
            "kind": "sample",
            "n": g.n,
            "d": g.d,
            "seed": config.seed,
            "edges": [list(e) for e in g.sorted_edges()],
            "census": asdict(census),
        }
        path = write_result(ctx, config, payload, display=asdict(census))
    elif config.output is None:
        typer.echo(dumps(g), nl=False)
        path = None
    else:
        path = atomic_write_text(config.output, dumps(g))
    finish(ctx, f"Sampled a {g.d}-regular graph on {g.n} vertices.", path)


def spectrum_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Spectrum of one sampled graph with its distance to Kesten-McKay."""
    config = build_config(
        ctx, "spectrum", n=n, d=d, seed=seed, output=output, format="json"
    )
    g = sample_uniform(config.n, config.d, config.seed)
    rec = spectrum(g, seed=config.seed)
    profile = rigidity_profile(rec)
    summary = {
        "n": rec.n,
        "d": rec.d,
        "seed": rec.seed,
        "lambda1": float(rec.eigenvalues[0]),
        "lambda2": float(rec.eigenvalues[1]),
        "lambdaN": float(rec.eigenvalues[-1]),
        "ks_distance": esd_vs_km(rec),
        "max_r": profile.max_r,
        "argmax_i": profile.argmax_i,
    }
    payload = {"kind": "spectrum", **summary, "eigenvalues": rec.eigenvalues}
    path = write_result(ctx, config, payload, display=summary)
    finish(
        ctx,
        f"lambda_2={summary['lambda2']:.6f}, KS distance "
        f"{summary['ks_distance']:.4f}.",
        path,
    )


def gamma_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    fmt: Optional[str] = FORMAT_OPTION,
):
    """Kesten-McKay classical locations gamma_2 > ... > gamma_N."""
    config = build_config(ctx, "gamma", n=n, d=d, output=output, format=fmt)
    gamma = classical_locations(config.n, config.d)
    rows = [{"i": i, "gamma_i": float(v)} for i, v in enumerate(gamma, start=2)]
    path = write_rows(ctx, config, "gamma", rows)
    finish(ctx, f"{len(rows)} classical locations for n={config.n}.", path)


__all__ = ["gamma_cmd", "sample_cmd", "spectrum_cmd"]

"""Local resampling commands: switching audits and the Woodbury expansion."""

from typing import List, Optional

import typer

from py_regraph.exchange import exchangeability_test
from py_regraph.experiments import switch_trials

from .common import (
    D_OPTION,
    ELL_OPTION,
    N_OPTION,
    OUTPUT_OPTION,
    SEED_OPTION,
    Z_OPTION,
    build_config,
    finish,
    parse_z,
    write_result,
)

TRIALS_OPTION = typer.Option(
    None, "--trials", "--samples", help="Independent graphs, one resampling each."
)
BIG_R_OPTION = typer.Option(
    None, "--big-r", help="Radius R of the switchability indicators."
)
K_MAX_OPTION = typer.Option(4, "--k-max", help="Highest Woodbury series order.")


def _woodbury_rows(summary: dict) -> list:
    return [
        {
            "E": w["E"],
            "eta": w["eta"],
            "monotone_fraction": w["monotone_fraction"],
            "median_decay_ratio": w["median_decay_ratio"],
            "closed_form_error_max": w["closed_form_error_max"],
            "identity_residual_max": w["identity_residual_max"],
        }
        for w in summary["woodbury"]
    ]


def resample_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    ell: Optional[int] = ELL_OPTION,
    trials: Optional[int] = TRIALS_OPTION,
    statistic: Optional[List[str]] = typer.Option(
        None,
        "--statistic",
        help="Exchangeability statistic: lambda2, triangles, m_i, block_edges, "
        "constant. Repeatable.",
    ),
    sampler: str = typer.Option(
        "uniform", "--sampler", help="Partner sampler: uniform or biased."
    ),
    big_r: Optional[int] = BIG_R_OPTION,
    z: Optional[List[str]] = Z_OPTION,
    k_max: int = K_MAX_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Resample fresh graphs: admissibility, collisions, reversal, exchangeability.

    Each --z adds a Woodbury decay table; each --statistic an exchangeability
    test on independent pairs (G, T_S(G)).
    """
    config = build_config(
        ctx,
        "resample",
        n=n,
        d=d,
        ell=ell,
        z=parse_z(z),
        samples=trials,
        seed=seed,
        output=output,
        format="json",
    )
    audit = switch_trials(
        config.n,
        config.d,
        config.ell,
        config.samples,
        config.seed,
        big_r=big_r,
        z_points=config.z,
        k_max=k_max,
        workers=config.workers,
    )
    summary = audit.as_dict()
    tests = [
        exchangeability_test(
            name,
            config.n,
            config.d,
            config.ell,
            config.samples,
            config.seed,
            big_r=audit.big_r,
            sampler=sampler,
            workers=config.workers,
        ).as_dict()
        for name in statistic or ()
    ]
    payload = {"kind": "resample", **summary, "exchangeability": tests}
    display = {
        key: summary[key]
        for key in (
            "trials",
            "switched_trials",
            "admissibility_rate",
            "collisions",
            "reversal_rate",
        )
    }
    display.update({f"sign_p[{t['statistic']}]": t["sign_p"] for t in tests})
    path = write_result(ctx, config, payload, display=display)
    rate, reversal = summary["admissibility_rate"], summary["reversal_rate"]
    finish(
        ctx,
        f"{summary['trials']} resamplings, admissibility {rate:.3f}, "
        f"reversal {reversal:.3f}.",
        path,
    )


def woodbury_check_cmd(
    ctx: typer.Context,
    n: Optional[int] = N_OPTION,
    d: Optional[int] = D_OPTION,
    ell: Optional[int] = ELL_OPTION,
    z: Optional[List[str]] = Z_OPTION,
    trials: Optional[int] = TRIALS_OPTION,
    big_r: Optional[int] = BIG_R_OPTION,
    k_max: int = K_MAX_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Truncated Woodbury series of G~ - G against two direct resolvents."""
    points = parse_z(z)
    if not points:
        raise typer.BadParameter("woodbury-check needs at least one --z.")
    config = build_config(
        ctx,
        "woodbury-check",
        n=n,
        d=d,
        ell=ell,
        z=points,
        samples=trials,
        seed=seed,
        output=output,
        format="json",
    )
    audit = switch_trials(
        config.n,
        config.d,
        config.ell,
        config.samples,
        config.seed,
        big_r=big_r,
        z_points=config.z,
        k_max=k_max,
        workers=config.workers,
    )
    summary = audit.as_dict()
    rows = _woodbury_rows(summary)
    path = write_result(ctx, config, {"kind": "woodbury", **summary}, display=rows)
    worst = min(r["monotone_fraction"] for r in rows)
    finish(ctx, f"Errors decrease in K on {worst:.1%} of switched trials.", path)


__all__ = ["resample_cmd", "woodbury_check_cmd"]

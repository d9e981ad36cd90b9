"""Pass/fail verdicts for experiment summaries and quick identity self-checks.

Summaries produced by :mod:`py_regraph.report` are compared with the accepted
bands; every verdict is a :class:`CheckResult` keyed by the id of the
acceptance criterion it belongs to. Missing data never fails a criterion: a
check that cannot be evaluated is reported as a warning.

:func:`run_self_checks` evaluates the exact identities on small sampled graphs
and finishes in seconds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Mapping, Optional, Tuple

import numpy as np

from .config import (
    EDGE_SLOPE_BAND,
    EDGE_WINDOW_CLEAR_MIN,
    EXCHANGE_CONTROL_P_MAX,
    EXCHANGE_NULL_P_MIN,
    IDENTITY_TOL,
    MOMENT_SLOPE_TOL,
    REVERSAL_RATE_MIN,
    RIGIDITY_GROWTH_MAX,
    RIGIDITY_STDERR_MAX,
    STIELTJES_SPREAD_MAX,
    WOODBURY_DECAY_MAX,
    WOODBURY_MONOTONE_MIN,
)
from .graph import sample_uniform
from .greens import greens, minor_resolvent, q_of, schur_minor, ward_check
from .km import m_d, m_sc
from .resampling import apply_switch, sample_resampling_data
from .seeding import derive_rng
from .treeext import x_ell, y_ell
from .woodbury import resolvent_identity_residual, switch_delta

logger = logging.getLogger(__name__)


class CheckStatus(str, Enum):
    """Outcome of a single check."""

    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"


@dataclass
class CheckResult:
    """Result of a single check.

    Attributes:
        criterion: Acceptance criterion id (e.g. ``"8"``).
        name: Short machine-friendly identifier (e.g. ``"edge_lambda2_slope"``).
        status: One of CheckStatus.PASS/WARN/FAIL.
        message: Human-readable detail with the measured value.
    """

    criterion: str
    name: str
    status: CheckStatus
    message: str


@dataclass
class AcceptanceReport:
    """Aggregate of all checks of one report or self-check run."""

    checks: List[CheckResult] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        """Return 1 if any check FAILed, else 0."""
        return 1 if any(c.status == CheckStatus.FAIL for c in self.checks) else 0

    def as_dicts(self) -> List[dict]:
        """Return checks as plain dicts for JSON/YAML rendering."""
        return [
            {
                "criterion": c.criterion,
                "name": c.name,
                "status": c.status.value,
                "message": c.message,
            }
            for c in self.checks
        ]

    def add(self, criterion: str, name: str, status: CheckStatus, message: str) -> None:
        self.checks.append(CheckResult(criterion, name, status, message))
        logger.debug("[%s] %s: %s (%s)", criterion, name, status.value, message)


@dataclass(frozen=True)
class AcceptanceBands:
    """Accepted ranges of the scaling and resampling statistics."""

    edge_slope: Tuple[float, float] = EDGE_SLOPE_BAND
    rigidity_growth_max: float = RIGIDITY_GROWTH_MAX
    rigidity_stderr_max: float = RIGIDITY_STDERR_MAX
    stieltjes_spread_max: float = STIELTJES_SPREAD_MAX
    edge_window_clear_min: float = EDGE_WINDOW_CLEAR_MIN
    moment_slope_tol: float = MOMENT_SLOPE_TOL
    reversal_rate_min: float = REVERSAL_RATE_MIN
    exchange_null_p_min: float = EXCHANGE_NULL_P_MIN
    exchange_control_p_max: float = EXCHANGE_CONTROL_P_MAX
    woodbury_monotone_min: float = WOODBURY_MONOTONE_MIN
    woodbury_decay_max: float = WOODBURY_DECAY_MAX


def _verdict(ok: bool) -> CheckStatus:
    return CheckStatus.PASS if ok else CheckStatus.FAIL


def _finite(value: Any) -> Optional[float]:
    if value is None or not np.isfinite(value):
        return None
    return float(value)


def _check_rigidity(
    report: AcceptanceReport, summary: Mapping[str, Any], bands
) -> None:
    fit = summary.get("fit")
    if fit is None:
        report.add(
            "7",
            "rigidity_growth",
            CheckStatus.WARN,
            "No fit: fewer than two sizes or a zero median.",
        )
        return
    slope, stderr = fit["loglog_slope"], fit["slope_stderr"]
    ok = slope < bands.rigidity_growth_max and stderr < bands.rigidity_stderr_max
    report.add(
        "7",
        "rigidity_growth",
        _verdict(ok),
        f"Median max_r grows like N^{slope:.3f} (stderr {stderr:.3f}); "
        f"accepted below {bands.rigidity_growth_max} with stderr "
        f"below {bands.rigidity_stderr_max}.",
    )


def _check_edge(report: AcceptanceReport, summary: Mapping[str, Any], bands) -> None:
    low, high = bands.edge_slope
    for key, name in (
        ("lambda2", "edge_lambda2_slope"),
        ("lambdaN", "edge_lambdaN_slope"),
    ):
        fit = summary.get(key)
        if fit is None:
            report.add("8", name, CheckStatus.WARN, "Insufficient sizes for a fit.")
            continue
        slope = fit["loglog_slope"]
        report.add(
            "8",
            name,
            _verdict(low <= slope <= high),
            f"std slope {slope:.3f}; accepted band [{low}, {high}].",
        )


def _check_stieltjes(
    report: AcceptanceReport, summary: Mapping[str, Any], bands
) -> None:
    for point in summary.get("points", []):
        name = f"stieltjes_spread_E{point['E']:g}_eta{point['eta']:g}"
        spread = point.get("spread")
        if spread is None:
            report.add("9", name, CheckStatus.WARN, "Needs at least two sizes.")
            continue
        report.add(
            "9",
            name,
            _verdict(spread < bands.stieltjes_spread_max),
            f"max/min of quantile/envelope across sizes is {spread:.3f}; "
            f"accepted below {bands.stieltjes_spread_max}.",
        )


def _check_edge_window(
    report: AcceptanceReport, summary: Mapping[str, Any], bands
) -> None:
    for entry in summary.get("runs", []):
        clear = entry["clear_fraction"]
        report.add(
            "9",
            f"edge_window_n{entry['n']}",
            _verdict(clear >= bands.edge_window_clear_min),
            f"{clear:.1%} of {entry['samples']} samples have no eigenvalue in "
            f"[{entry['lower']:.5f}, {entry['upper']:.5f}].",
        )


def _check_moments(report: AcceptanceReport, summary: Mapping[str, Any], bands) -> None:
    fit = summary.get("fit")
    if fit is None:
        report.add(
            "10", "moment_ratio_slope", CheckStatus.WARN, "Needs at least two sizes."
        )
        return
    slope = fit["loglog_slope"]
    report.add(
        "10",
        "moment_ratio_slope",
        _verdict(abs(slope) <= bands.moment_slope_tol),
        f"log moment ratio slope {slope:.3f}; accepted within "
        f"+-{bands.moment_slope_tol}.",
    )


def _check_resample(
    report: AcceptanceReport, summary: Mapping[str, Any], bands
) -> None:
    for run in summary.get("runs", []):
        name = f"switch_reversal_n{run['n']}_ell{run['ell']}"
        simple, trials = run["simple_outputs"], run["trials"]
        if simple < trials:
            report.add(
                "4",
                name,
                CheckStatus.FAIL,
                f"{trials - simple} of {trials} switched graphs are not simple "
                f"{run['d']}-regular.",
            )
            continue
        rate = _finite(run["reversal_rate"])
        if rate is None:
            report.add(
                "4", name, CheckStatus.WARN, "No trial admits the reversal check."
            )
            continue
        report.add(
            "4",
            name,
            _verdict(rate >= bands.reversal_rate_min),
            f"{rate:.1%} of {run['reversal_comparable']} comparable switches "
            f"reverse; accepted from {bands.reversal_rate_min:.0%}.",
        )
    for test in summary.get("exchangeability", []):
        name = f"exchange_{test['statistic']}_{test['sampler']}_n{test['n']}"
        p = _finite(test["sign_p"])
        if p is None:
            report.add("5", name, CheckStatus.WARN, "Sign test p-value undefined.")
            continue
        if test["sampler"] == "uniform":
            ok = p > bands.exchange_null_p_min
            band = f"accepted above {bands.exchange_null_p_min}"
        else:
            ok = p < bands.exchange_control_p_max
            band = f"a biased sampler must fall below {bands.exchange_control_p_max}"
        report.add(
            "5",
            name,
            _verdict(ok),
            f"sign test p = {p:.3g} over {test['trials']} pairs; {band}.",
        )


def _check_woodbury(
    report: AcceptanceReport, summary: Mapping[str, Any], bands
) -> None:
    for point in summary.get("points", []):
        name = f"woodbury_decay_n{point['n']}_E{point['E']:g}_eta{point['eta']:g}"
        monotone = _finite(point["monotone_fraction"])
        ratio = _finite(point["median_decay_ratio"])
        if monotone is None or ratio is None:
            report.add("6", name, CheckStatus.WARN, "No switched trial to expand.")
            continue
        ok = (
            monotone >= bands.woodbury_monotone_min
            and ratio < bands.woodbury_decay_max
        )
        report.add(
            "6",
            name,
            _verdict(ok),
            f"{monotone:.1%} of series decrease strictly, median decay ratio "
            f"{ratio:.3f}; accepted from {bands.woodbury_monotone_min:.0%} with "
            f"ratio below {bands.woodbury_decay_max}.",
        )


_EVALUATORS = {
    "rigidity": _check_rigidity,
    "edge_scan": _check_edge,
    "stieltjes": _check_stieltjes,
    "edge_window": _check_edge_window,
    "moments": _check_moments,
    "resample": _check_resample,
    "woodbury": _check_woodbury,
}


def evaluate(
    summary: Mapping[str, Mapping[str, Any]],
    bands: AcceptanceBands = AcceptanceBands(),
) -> AcceptanceReport:
    """Turn report sections into acceptance checks.

    Args:
        summary: Report sections keyed by kind (``rigidity``, ``edge_scan``,
            ``stieltjes``, ``edge_window``, ``moments``, ``resample``,
            ``woodbury``); other keys are ignored.
        bands: Accepted ranges.
    """
    report = AcceptanceReport()
    for kind, section in summary.items():
        evaluator = _EVALUATORS.get(kind)
        if evaluator is not None:
            evaluator(report, section, bands)
    return report


# ---------------------------------------------------------------- self-checks


def _measure(
    report: AcceptanceReport, criterion: str, name: str, value: float, tol: float
) -> None:
    report.add(
        criterion,
        name,
        _verdict(bool(np.isfinite(value)) and value < tol),
        f"{value:.3e} (tolerance {tol:.0e})",
    )


def run_self_checks(seed: int = 0, n: int = 60, d: int = 3) -> AcceptanceReport:
    """Evaluate the exact identities on a few small sampled graphs.

    Covers the Ward identity, the semicircle fixed point, the tree recursions
    at ``m_sc``, Schur-complement minors, Q by rank-one updates, and a local
    resampling with its resolvent identity.
    """
    report = AcceptanceReport()
    points = (0.3 + 0.5j, -1.2 + 0.1j, 2.4 + 0.05j)
    graphs = [sample_uniform(n, d, derive_rng(seed, k)) for k in range(3)]

    ward = max(ward_check(greens(g, z)).worst for g in graphs for z in points)
    _measure(report, "1", "ward_identity", ward, IDENTITY_TOL)

    quadratic = max(abs(m_sc(z) ** 2 + z * m_sc(z) + 1.0) for z in points)
    _measure(report, "1", "msc_fixed_point", quadratic, 1e-13)

    recursion = max(
        max(
            abs(y_ell(m_sc(z), z, ell) - m_sc(z)),
            abs(x_ell(m_sc(z), z, ell, d) - m_d(z, d)),
        )
        for z in points
        for ell in (1, 5, 20)
    )
    _measure(report, "1", "tree_recursions_at_msc", recursion, 1e-12)

    g, z = graphs[0], points[0]
    gm = greens(g, z)
    s = (0, 1, 2)
    minor = schur_minor(gm, s)
    direct = minor_resolvent(g, s, z)
    gap = float(np.max(np.abs(minor.entries - direct.entries)))
    _measure(report, "2", "schur_minor", gap, 1e-9)

    per_edge = [minor_resolvent(g, (i,), z).entry(j, j) for i, j in g.oriented_edges()]
    q_direct = complex(np.mean(per_edge))
    _measure(report, "2", "q_rank_one", abs(q_of(gm, g) - q_direct), IDENTITY_TOL)

    rng = derive_rng(seed, len(graphs))
    for _ in range(20):
        rd = sample_resampling_data(g, int(rng.integers(n)), 1, rng)
        result = apply_switch(g, rd, big_r=4)
        if result.applied:
            break
    _measure(
        report,
        "4",
        "resolvent_identity",
        resolvent_identity_residual(g, result.graph, z),
        1e-9,
    )
    if result.applied:
        delta = switch_delta(g, result, z)
        dh = result.graph.normalized_adjacency() - g.normalized_adjacency()
        gap = float(np.max(np.abs(delta.xi_sum(n) + dh)))
        _measure(report, "4", "xi_sum", gap, IDENTITY_TOL)
    else:
        report.add(
            "4", "xi_sum", CheckStatus.WARN, "No admissible switch in this draw."
        )
    return report


__all__ = [
    "AcceptanceBands",
    "AcceptanceReport",
    "CheckResult",
    "CheckStatus",
    "evaluate",
    "run_self_checks",
]

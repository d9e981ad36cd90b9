"""Desk-scale Monte-Carlo experiments on random regular graphs.

Each experiment samples graphs on deterministic per-sample seed streams,
reduces per-sample statistics in task order and returns a typed report
together with the rows persisted by the CLI. The scans cover:

* eigenvalue rigidity against the Kesten--McKay classical locations;
* fluctuations of the extreme eigenvalues ``lambda_2`` and ``lambda_N``;
* concentration of the Stieltjes transform around ``m_d``;
* the edge window free of eigenvalues just outside ``2``;
* high moments of the self-consistent equation residual;
* local resamplings: admissibility, reversal and the Woodbury series.

Row seeds are the integer seeds of the sample streams, so a single row is
enough to rebuild its graph with :func:`py_regraph.graph.sample_uniform`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigvalsh
from scipy.stats import kstest, linregress

from .config import (
    DEFAULT_A,
    DEFAULT_C,
    DEFAULT_ELL,
    DEFAULT_QUANTILE,
    DEFAULT_R_FRAC,
    EDGE_WINDOW_ETA_POWER,
    EDGE_WINDOW_KAPPA_SHIFT,
    MIN_FIT_SIZES,
)
from .graph import RegularGraph, census_radius, sample_uniform
from .greens import GreensError, greens, sc_residuals
from .km import (
    ZLike,
    classical_locations,
    error_params,
    in_spectral_domain,
    km_cdf,
    m_d,
    m_sc,
)
from .models import (
    ErrorParams,
    LawParams,
    RigidityProfile,
    ScalingFit,
    SpectralPoint,
    SpectrumRecord,
)
from .resampling import apply_switch, reverse_switch, sample_resampling_data
from .seeding import as_generator, run_tasks, sample_seed
from .treeext import y_ell_derivative
from .woodbury import resolvent_identity_residual, woodbury_delta

logger = logging.getLogger(__name__)

Row = Dict[str, Any]


class ExperimentError(ValueError):
    """Raised when an experiment is called outside its preconditions."""


# ---------------------------------------------------------------- spectra


def _descending_spectrum(g: RegularGraph) -> np.ndarray:
    try:
        lam = eigvalsh(g.normalized_adjacency(), check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise GreensError(f"Eigensolver failed on n={g.n}: {exc}") from exc
    return lam[::-1].copy()


def spectrum(g: RegularGraph, seed: Optional[int] = None) -> SpectrumRecord:
    """Full spectrum of ``H = A / sqrt(d - 1)`` in descending order.

    Args:
        g: Graph.
        seed: Provenance seed stored on the record.

    Raises:
        GreensError: If the eigensolver fails.
        ModelValidationError: If ``lambda_1`` is not ``d / sqrt(d - 1)``.
    """
    return SpectrumRecord(n=g.n, d=g.d, seed=seed, eigenvalues=_descending_spectrum(g))


def _spectrum_task(task: Tuple[int, int, int]) -> np.ndarray:
    n, d, s = task
    return _descending_spectrum(sample_uniform(n, d, s))


def sample_spectra(
    n: int, d: int, samples: int, seed: int, *, size_index: int = 0, workers: int = 1
) -> List[SpectrumRecord]:
    """Spectra of ``samples`` uniform graphs.

    Sample ``k`` draws from the stream ``(seed, size_index, k)``.
    """
    seeds = [sample_seed(seed, size_index, k) for k in range(samples)]
    spectra = run_tasks(_spectrum_task, [(n, d, s) for s in seeds], workers)
    return [
        SpectrumRecord(n=n, d=d, seed=s, eigenvalues=lam)
        for s, lam in zip(seeds, spectra)
    ]


def rigidity_profile(rec: SpectrumRecord) -> RigidityProfile:
    """Normalized deviations from the classical locations, ``2 <= i <= N``."""
    n = rec.n
    gamma = classical_locations(n, rec.d)
    i = np.arange(2, n + 1)
    weight = n ** (2.0 / 3.0) * np.minimum(i, n - i + 1) ** (1.0 / 3.0)
    r = np.abs(rec.eigenvalues[1:] - gamma) * weight
    k = int(np.argmax(r))
    return RigidityProfile(indices=i, r=r, max_r=float(r[k]), argmax_i=int(i[k]))


def rigidity_rows(rec: SpectrumRecord, profile: RigidityProfile) -> List[Row]:
    """Rows of the ``rigidity`` schema for one spectrum."""
    gamma = classical_locations(rec.n, rec.d)
    return [
        {
            "n": rec.n,
            "d": rec.d,
            "seed": rec.seed,
            "i": int(i),
            "lambda_i": float(lam),
            "gamma_i": float(gam),
            "r_i": float(r),
        }
        for i, lam, gam, r in zip(
            profile.indices, rec.eigenvalues[1:], gamma, profile.r
        )
    ]


def esd_vs_km(rec: SpectrumRecord) -> float:
    """Kolmogorov--Smirnov distance of ``lambda_2..lambda_N`` to Kesten--McKay."""
    d = rec.d
    return float(kstest(rec.eigenvalues[1:], lambda x: km_cdf(d, x)).statistic)


# ---------------------------------------------------------------- fits


def _check_sizes(sizes: Sequence[int]) -> Tuple[int, ...]:
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) < MIN_FIT_SIZES:
        raise ExperimentError(
            f"Insufficient sizes: a log-log fit needs at least {MIN_FIT_SIZES} "
            f"(got {len(sizes)})."
        )
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ExperimentError(f"Sizes must be strictly ascending (got {list(sizes)}).")
    return sizes


def fit_loglog(
    sizes: Sequence[int], values: Sequence[float]
) -> Tuple[float, float, float]:
    """Least-squares line through ``(log N, log value)``.

    Returns:
        Tuple[float, float, float]: Slope, its standard error and the intercept.

    Raises:
        ExperimentError: With fewer than two points or a non-positive value.
    """
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.asarray(values, dtype=float)
    if x.size < MIN_FIT_SIZES or x.size != y.size:
        raise ExperimentError(f"Insufficient sizes for a log-log fit ({x.size}).")
    if np.any(~(y > 0)):
        raise ExperimentError("Log-log fit needs positive values.")
    fit = linregress(x, np.log(y))
    stderr = float(fit.stderr) if math.isfinite(fit.stderr) else 0.0
    return float(fit.slope), stderr, float(fit.intercept)


def scaling_fit(
    sizes: Sequence[int], samples: Sequence[np.ndarray], use: str = "std"
) -> ScalingFit:
    """Fit the per-size standard deviation (``use="std"``) or median against ``N``."""
    means = np.array([np.mean(s) for s in samples])
    stds = np.array([np.std(s, ddof=1) if len(s) > 1 else 0.0 for s in samples])
    if use == "std":
        values = stds
    elif use == "median":
        values = np.array([np.median(s) for s in samples])
    else:
        raise ExperimentError(f"Unknown fitted statistic {use!r}.")
    slope, stderr, intercept = fit_loglog(sizes, values)
    return ScalingFit(
        sizes=tuple(sizes),
        means=means,
        stds=stds,
        values=values,
        loglog_slope=slope,
        slope_stderr=stderr,
        intercept=intercept,
    )


# ---------------------------------------------------------------- rigidity scan


@dataclass(frozen=True, eq=False)
class RigidityScan:
    """Rigidity over several sizes.

    Attributes:
        fit: Median ``max_r`` per size against ``N``.
        max_r: Per-size arrays of ``max_r``.
        rows: ``rigidity`` rows of every sample.
    """

    fit: ScalingFit
    max_r: Tuple[np.ndarray, ...] = field(repr=False)
    rows: List[Row] = field(repr=False, default_factory=list)


def rigidity_scan(
    sizes: Sequence[int], samples_per_size: int, d: int, seed: int, *, workers: int = 1
) -> RigidityScan:
    """Median of ``max_i r_i`` per size and its growth exponent in ``N``."""
    sizes = _check_sizes(sizes)
    per_size: List[np.ndarray] = []
    rows: List[Row] = []
    for index, n in enumerate(sizes):
        logger.info("Rigidity: n=%d, %d samples", n, samples_per_size)
        maxima = []
        records = sample_spectra(
            n, d, samples_per_size, seed, size_index=index, workers=workers
        )
        for rec in records:
            profile = rigidity_profile(rec)
            maxima.append(profile.max_r)
            rows.extend(rigidity_rows(rec, profile))
        per_size.append(np.array(maxima))
    return RigidityScan(
        fit=scaling_fit(sizes, per_size, use="median"),
        max_r=tuple(per_size),
        rows=rows,
    )


# ---------------------------------------------------------------- edge fluctuations


def _edge_task(task: Tuple[int, int, int]) -> Tuple[float, float]:
    n, d, s = task
    lam = eigvalsh(sample_uniform(n, d, s).normalized_adjacency())
    return float(lam[-2]), float(lam[0])


@dataclass(frozen=True, eq=False)
class EdgeScan:
    """Extreme-eigenvalue fluctuation scan.

    Attributes:
        lambda2: Fit of ``std(lambda_2 - 2)`` against ``N``.
        lambda_n: Fit of ``std(|lambda_N| - 2)`` against ``N``.
        centering: Per-size mean of ``N^{2/3} (lambda_2 - 2)``.
        rows: ``edge_scan`` rows.
    """

    lambda2: ScalingFit
    lambda_n: ScalingFit
    centering: Tuple[float, ...]
    rows: List[Row] = field(repr=False, default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "lambda2": self.lambda2.as_dict(),
            "lambdaN": self.lambda_n.as_dict(),
            "centering": list(self.centering),
        }


def edge_fluctuation_scan(
    sizes: Sequence[int], samples_per_size: int, d: int, seed: int, *, workers: int = 1
) -> EdgeScan:
    """Fluctuation exponents of ``lambda_2`` and ``lambda_N``.

    Args:
        sizes: Strictly ascending graph sizes.
        samples_per_size: Graphs per size, at least 2.
        d: Degree.
        seed: Run seed; sample ``k`` of size ``j`` uses the stream ``(seed, j, k)``.
        workers: Worker processes.

    Returns:
        EdgeScan: Both fits, the empirical centering and the rows.

    Raises:
        ExperimentError: Fewer than two sizes or samples.
    """
    sizes = _check_sizes(sizes)
    if samples_per_size < 2:
        raise ExperimentError("A standard deviation needs at least 2 samples per size.")
    top: List[np.ndarray] = []
    bottom: List[np.ndarray] = []
    centering: List[float] = []
    rows: List[Row] = []
    for index, n in enumerate(sizes):
        logger.info("Edge scan: n=%d, %d samples", n, samples_per_size)
        seeds = [sample_seed(seed, index, k) for k in range(samples_per_size)]
        pairs = run_tasks(_edge_task, [(n, d, s) for s in seeds], workers)
        lam2 = np.array([p[0] for p in pairs])
        lam_n = np.array([p[1] for p in pairs])
        top.append(lam2 - 2.0)
        bottom.append(np.abs(lam_n) - 2.0)
        centering.append(float(np.mean(n ** (2.0 / 3.0) * (lam2 - 2.0))))
        rows.extend(
            {"n": n, "d": d, "seed": s, "lambda2": float(a), "lambdaN": float(b)}
            for s, a, b in zip(seeds, lam2, lam_n)
        )
    return EdgeScan(
        lambda2=scaling_fit(sizes, top),
        lambda_n=scaling_fit(sizes, bottom),
        centering=tuple(centering),
        rows=rows,
    )


def edge_fits_from_rows(rows: Sequence[Row]) -> EdgeScan:
    """Rebuild :class:`EdgeScan` fits from persisted ``edge_scan`` rows."""
    by_size: Dict[int, List[Tuple[float, float]]] = {}
    for row in rows:
        pair = (float(row["lambda2"]), float(row["lambdaN"]))
        by_size.setdefault(int(row["n"]), []).append(pair)
    sizes = _check_sizes(sorted(by_size))
    top = [np.array([a for a, _ in by_size[n]]) - 2.0 for n in sizes]
    bottom = [np.abs(np.array([b for _, b in by_size[n]])) - 2.0 for n in sizes]
    centering = tuple(float(np.mean(n ** (2.0 / 3.0) * t)) for n, t in zip(sizes, top))
    return EdgeScan(
        lambda2=scaling_fit(sizes, top),
        lambda_n=scaling_fit(sizes, bottom),
        centering=centering,
        rows=list(rows),
    )


# ---------------------------------------------------------------- Stieltjes transform


def stieltjes_envelope(z: ZLike, n: int) -> float:
    """Concentration envelope of ``|m - m_d|`` without its ``N^{o(1)}`` factor.

    ``1/(N eta)`` for ``|E| <= 2``, and outside the bulk
    ``(kappa + eta)^{-1/2} (1/(N eta^{1/2}) + 1/(N eta)^2)``.
    """
    p = SpectralPoint.of(z)
    if abs(p.E) <= 2.0:
        return 1.0 / (n * p.eta)
    tail = 1.0 / (n * math.sqrt(p.eta)) + (n * p.eta) ** -2
    return tail / math.sqrt(p.kappa + p.eta)


def _default_params(d: int, ell: int = DEFAULT_ELL) -> LawParams:
    return LawParams(d=d, a=DEFAULT_A, c=DEFAULT_C, ell=ell)


def _check_domain(points: Sequence[SpectralPoint], n: int, params: LawParams) -> None:
    outside = [str(p) for p in points if not in_spectral_domain(p, n, params)]
    if outside:
        raise ExperimentError(
            f"Spectral parameter(s) outside the domain at n={n}: {', '.join(outside)}."
        )


@dataclass(frozen=True)
class StieltjesPoint:
    """Summary of ``|m - m_d|`` at one spectral parameter.

    Attributes:
        E: Energy.
        eta: Imaginary part.
        quantile: Empirical quantile of ``|m - m_d|``.
        envelope: :func:`stieltjes_envelope` at this point.
        ratio: ``quantile / envelope``.
        errors: Error parameters of the a priori bound.
    """

    E: float
    eta: float
    quantile: float
    envelope: float
    ratio: float
    errors: ErrorParams


@dataclass(frozen=True, eq=False)
class StieltjesScan:
    """Per-``z`` summaries and the raw ``stieltjes`` rows."""

    n: int
    d: int
    level: float
    points: Tuple[StieltjesPoint, ...]
    rows: List[Row] = field(repr=False, default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "level": self.level,
            "points": [
                {
                    "E": p.E,
                    "eta": p.eta,
                    "quantile": p.quantile,
                    "envelope": p.envelope,
                    "ratio": p.ratio,
                    "eps_prime": p.errors.eps_prime,
                    "eps": p.errors.eps,
                }
                for p in self.points
            ],
        }


def stieltjes_concentration_scan(
    n: int,
    d: int,
    z_grid: Sequence[ZLike],
    samples: int,
    seed: int,
    *,
    params: Optional[LawParams] = None,
    level: float = DEFAULT_QUANTILE,
    size_index: int = 0,
    workers: int = 1,
) -> StieltjesScan:
    """Quantiles of ``|m(z) - m_d(z)|`` against the concentration envelope.

    Args:
        n: Vertex count.
        d: Degree.
        z_grid: Spectral parameters, all inside the spectral domain.
        samples: Graphs sampled.
        seed: Run seed.
        params: Domain constants; defaults from :mod:`py_regraph.config`.
        level: Reported quantile level.
        size_index: Stream coordinate distinguishing sizes of one run.
        workers: Worker processes.

    Raises:
        ExperimentError: If a point lies outside the spectral domain.
    """
    params = params or _default_params(d)
    points = [SpectralPoint.of(z) for z in z_grid]
    _check_domain(points, n, params)
    records = sample_spectra(
        n, d, samples, seed, size_index=size_index, workers=workers
    )
    deviations = np.empty((len(records), len(points)))
    rows: List[Row] = []
    for k, rec in enumerate(records):
        for j, p in enumerate(points):
            m = complex(np.mean(1.0 / (rec.eigenvalues - p.z)))
            deviations[k, j] = abs(m - m_d(p, d))
            rows.append(
                {
                    "n": n,
                    "d": d,
                    "seed": rec.seed,
                    "E": p.E,
                    "eta": p.eta,
                    "abs_m_minus_md": deviations[k, j],
                }
            )
    summary = []
    for j, p in enumerate(points):
        q = float(np.quantile(deviations[:, j], level))
        env = stieltjes_envelope(p, n)
        summary.append(
            StieltjesPoint(
                E=p.E,
                eta=p.eta,
                quantile=q,
                envelope=env,
                ratio=q / env,
                errors=error_params(p, DEFAULT_R_FRAC, n, d),
            )
        )
    return StieltjesScan(n=n, d=d, level=level, points=tuple(summary), rows=rows)


# ---------------------------------------------------------------- edge window


def edge_window(n: int) -> Tuple[float, float]:
    """``(kappa, eta)`` of the eigenvalue-free window ``[2+kappa-eta, 2+kappa+eta]``."""
    kappa = n ** (-2.0 / 3.0 + EDGE_WINDOW_KAPPA_SHIFT)
    eta = n**EDGE_WINDOW_ETA_POWER / (n * math.sqrt(kappa))
    return kappa, eta


@dataclass(frozen=True)
class EdgeWindowReport:
    """How often ``lambda_2..lambda_N`` avoid the edge window.

    Attributes:
        n: Vertex count.
        lower: Left end of the window.
        upper: Right end of the window.
        samples: Graphs sampled.
        hits: Samples with an eigenvalue inside the window.
    """

    n: int
    lower: float
    upper: float
    samples: int
    hits: int

    @property
    def clear_fraction(self) -> float:
        return 1.0 - self.hits / self.samples if self.samples else math.nan


def edge_window_test(
    n: int, d: int, samples: int, seed: int, *, workers: int = 1
) -> EdgeWindowReport:
    """Count samples with some ``lambda_i``, ``i >= 2``, inside the edge window."""
    kappa, eta = edge_window(n)
    lower, upper = 2.0 + kappa - eta, 2.0 + kappa + eta
    hits = 0
    for rec in sample_spectra(n, d, samples, seed, workers=workers):
        rest = rec.eigenvalues[1:]
        if np.any((rest >= lower) & (rest <= upper)):
            hits += 1
    logger.info(
        "Edge window [%.5f, %.5f] at n=%d: %d/%d hits", lower, upper, n, hits, samples
    )
    return EdgeWindowReport(n=n, lower=lower, upper=upper, samples=samples, hits=hits)


# ---------------------------------------------------------------- moments


MomentTask = Tuple[int, int, int, complex, int, int, Optional[RegularGraph]]


def _moment_task(task: MomentTask) -> Tuple[float, float, float]:
    n, d, ell, z, p, s, fixed = task
    g = fixed if fixed is not None else sample_uniform(n, d, s)
    gm = greens(g, z)
    res = sc_residuals(g, gm, ell)
    im_m = gm.m.imag
    slope = y_ell_derivative(res.q, gm.z, ell)
    spread = (im_m + math.sqrt(abs(1.0 - slope) * im_m)) / (n * gm.z.eta)
    control = spread + abs(res.q - m_sc(gm.z)) ** 2
    power = 2 * p
    return abs(res.q_minus_y) ** power, abs(res.m_minus_x) ** power, control**power


@dataclass(frozen=True)
class MomentReport:
    """Empirical self-consistent moments at one ``(n, z, p)``.

    Attributes:
        n: Vertex count.
        d: Degree.
        ell: Tree depth.
        E: Energy.
        eta: Imaginary part.
        p: Moment order; the moments are of power ``2p``.
        samples: Graphs sampled.
        q_minus_y: Mean of ``|Q - Y_ell(Q)|^{2p}``.
        m_minus_x: Mean of ``|m - X_ell(Q)|^{2p}``.
        comparator: Mean of the control quantity raised to ``2p``.
    """

    n: int
    d: int
    ell: int
    E: float
    eta: float
    p: int
    samples: int
    q_minus_y: float
    m_minus_x: float
    comparator: float

    @property
    def ratio(self) -> float:
        return self.q_minus_y / self.comparator if self.comparator > 0 else math.inf


def sc_moment_estimate(
    n: int,
    d: int,
    ell: int,
    z: ZLike,
    p: int,
    samples: int,
    seed: int,
    *,
    graph: Optional[RegularGraph] = None,
    params: Optional[LawParams] = None,
    size_index: int = 0,
    workers: int = 1,
) -> MomentReport:
    """Compare ``E|Q - Y_ell(Q)|^{2p}`` with its high-moment control.

    The control quantity is
    ``((Im m + sqrt(|1 - Y'_ell(Q)| Im m)) / (N eta) + |Q - m_sc|^2)^{2p}``.
    Passing ``graph`` repeats that graph for every sample.

    Raises:
        ExperimentError: If ``p`` is not 1 or 2 or ``z`` is outside the domain.
    """
    if p not in (1, 2):
        raise ExperimentError(f"Moment order p must be 1 or 2 (got {p}).")
    if samples < 1:
        raise ExperimentError("At least one sample is required.")
    params = params or _default_params(d, ell)
    point = SpectralPoint.of(z)
    _check_domain([point], n, params)
    if graph is not None and (graph.n, graph.d) != (n, d):
        raise ExperimentError(
            f"Fixed graph has (n, d)=({graph.n}, {graph.d}), expected ({n}, {d})."
        )
    tasks = [
        (n, d, ell, point.z, p, sample_seed(seed, size_index, k), graph)
        for k in range(samples)
    ]
    values = np.array(run_tasks(_moment_task, tasks, workers))
    return MomentReport(
        n=n,
        d=d,
        ell=ell,
        E=point.E,
        eta=point.eta,
        p=p,
        samples=samples,
        q_minus_y=float(np.mean(values[:, 0])),
        m_minus_x=float(np.mean(values[:, 1])),
        comparator=float(np.mean(values[:, 2])),
    )


def moment_ratio_fit(reports: Sequence[MomentReport]) -> Tuple[float, float, float]:
    """Log-log fit of the moment ratio against ``N``."""
    ordered = sorted(reports, key=lambda r: r.n)
    sizes = _check_sizes([r.n for r in ordered])
    return fit_loglog(sizes, [r.ratio for r in ordered])


# ---------------------------------------------------------------- switching trials


SwitchTask = Tuple[int, int, int, int, int, Tuple[complex, ...], int]


@dataclass(frozen=True)
class SwitchTrial:
    """One local resampling of a freshly sampled graph.

    The per-``z`` tuples follow the order of the trial's spectral points.

    Attributes:
        seed: Sample seed; rebuilds the graph, the center and the partners.
        mu: Boundary edges of the ball.
        admissible: ``|W_S|``.
        applied: Pairs actually switched.
        collisions: Admissible pairs dropped by the simplicity guard.
        comparable: The reversal check applies (same admissible set).
        recovered: Switching back restored the graph.
        simple: The switched graph is simple and d-regular.
        errors: Woodbury truncation errors for ``K = 0..k_max``.
        scales: Entrywise max of ``G~ - G``.
        closed_form_errors: Error of the closed-form Woodbury update.
        identity_residuals: Residual of ``G~ - G = -G~ (H~ - H) G``.
        converged: Contraction spectral radius below one.
        fell_back: The tree extension was singular.
    """

    seed: int
    mu: int
    admissible: int
    applied: int
    collisions: int
    comparable: bool
    recovered: bool
    simple: bool = True
    errors: Tuple[Tuple[float, ...], ...] = ()
    scales: Tuple[float, ...] = ()
    closed_form_errors: Tuple[float, ...] = ()
    identity_residuals: Tuple[float, ...] = ()
    converged: Tuple[bool, ...] = ()
    fell_back: Tuple[bool, ...] = ()


def _is_simple_regular(g: RegularGraph, d: int) -> bool:
    """Whether the adjacency lists of ``g`` recount to a simple d-regular graph."""
    counts = np.zeros((g.n, g.n), dtype=int)
    for u, nbrs in enumerate(g.adj):
        np.add.at(counts[u], list(nbrs), 1)
    return (
        g.d == d
        and int(counts.max(initial=0)) <= 1
        and not counts.diagonal().any()
        and bool((counts == counts.T).all())
        and bool((counts.sum(axis=1) == d).all())
        and 2 * len(g.edges) == g.n * d
    )


def _switch_task(task: SwitchTask) -> SwitchTrial:
    n, d, ell, big_r, s, points, k_max = task
    rng = as_generator(s)
    g = sample_uniform(n, d, rng)
    rd = sample_resampling_data(g, int(rng.integers(n)), ell, rng)
    result = apply_switch(g, rd, big_r)
    back = reverse_switch(g, result, big_r)
    expansions = [woodbury_delta(greens(g, z), g, result, k_max) for z in points]
    return SwitchTrial(
        seed=s,
        mu=rd.mu,
        admissible=len(result.admissible.indices),
        applied=len(result.applied),
        collisions=len(result.collisions),
        comparable=back.comparable,
        recovered=back.recovered,
        simple=_is_simple_regular(result.graph, d),
        errors=tuple(e.errors for e in expansions),
        scales=tuple(e.scale for e in expansions),
        closed_form_errors=tuple(e.closed_form_error for e in expansions),
        identity_residuals=tuple(
            resolvent_identity_residual(g, result.graph, z) for z in points
        ),
        converged=tuple(e.converged for e in expansions),
        fell_back=tuple(e.fell_back for e in expansions),
    )


@dataclass(frozen=True, eq=False)
class SwitchTrials:
    """Repeated local resamplings with reversal and Woodbury diagnostics."""

    n: int
    d: int
    ell: int
    big_r: int
    k_max: int
    points: Tuple[SpectralPoint, ...]
    trials: Tuple[SwitchTrial, ...] = field(repr=False)

    @property
    def boundary_edges(self) -> int:
        return sum(t.mu for t in self.trials)

    @property
    def admissible(self) -> int:
        return sum(t.admissible for t in self.trials)

    @property
    def collisions(self) -> int:
        return sum(t.collisions for t in self.trials)

    @property
    def admissibility_rate(self) -> float:
        total = self.boundary_edges
        return self.admissible / total if total else math.nan

    @property
    def simple_outputs(self) -> int:
        return sum(1 for t in self.trials if t.simple)

    @property
    def reversal_rate(self) -> float:
        """Recovered fraction among trials where the reversal check applies."""
        comparable = [t for t in self.trials if t.comparable]
        if not comparable:
            return math.nan
        return sum(1 for t in comparable if t.recovered) / len(comparable)

    def _expanded(self, j: int) -> List[SwitchTrial]:
        return [t for t in self.trials if t.applied and not t.fell_back[j]]

    def decay_table(self, j: int) -> List[Row]:
        """Median truncation error per order ``K`` at the ``j``-th point."""
        expanded = self._expanded(j)
        table = []
        for k in range(self.k_max + 1):
            errors = [t.errors[j][k] for t in expanded]
            relative = [t.errors[j][k] / t.scales[j] for t in expanded if t.scales[j]]
            table.append(
                {
                    "K": k,
                    "median_error": float(np.median(errors)) if errors else math.nan,
                    "median_relative_error": (
                        float(np.median(relative)) if relative else math.nan
                    ),
                }
            )
        return table

    def monotone_fraction(self, j: int) -> float:
        """Share of switched trials whose errors strictly decrease in ``K``."""
        expanded = self._expanded(j)
        if not expanded:
            return math.nan
        decreasing = sum(
            1
            for t in expanded
            if all(b < a for a, b in zip(t.errors[j], t.errors[j][1:]))
        )
        return decreasing / len(expanded)

    def median_decay_ratio(self, j: int) -> float:
        """Median geometric decay ``(err_K / err_0)^{1/K}`` with ``K = k_max``."""
        ratios = [
            (t.errors[j][-1] / t.errors[j][0]) ** (1.0 / self.k_max)
            for t in self._expanded(j)
            if t.errors[j][0] > 0
        ]
        return float(np.median(ratios)) if ratios else math.nan

    def as_dict(self) -> Dict[str, Any]:
        woodbury = []
        for j, p in enumerate(self.points):
            woodbury.append(
                {
                    "E": p.E,
                    "eta": p.eta,
                    "decay": self.decay_table(j),
                    "monotone_fraction": self.monotone_fraction(j),
                    "median_decay_ratio": self.median_decay_ratio(j),
                    "converged": sum(1 for t in self.trials if t.converged[j]),
                    "fell_back": sum(1 for t in self.trials if t.fell_back[j]),
                    "closed_form_error_max": max(
                        (t.closed_form_errors[j] for t in self.trials), default=0.0
                    ),
                    "identity_residual_max": max(
                        (t.identity_residuals[j] for t in self.trials), default=0.0
                    ),
                }
            )
        return {
            "n": self.n,
            "d": self.d,
            "ell": self.ell,
            "big_r": self.big_r,
            "trials": len(self.trials),
            "switched_trials": sum(1 for t in self.trials if t.applied),
            "simple_outputs": self.simple_outputs,
            "boundary_edges": self.boundary_edges,
            "admissible": self.admissible,
            "admissibility_rate": self.admissibility_rate,
            "collisions": self.collisions,
            "reversal_comparable": sum(1 for t in self.trials if t.comparable),
            "reversal_rate": self.reversal_rate,
            "woodbury": woodbury,
        }


def switch_trials(
    n: int,
    d: int,
    ell: int,
    trials: int,
    seed: int,
    *,
    big_r: Optional[int] = None,
    z_points: Sequence[ZLike] = (),
    k_max: int = 4,
    size_index: int = 0,
    workers: int = 1,
) -> SwitchTrials:
    """Resample ``trials`` fresh graphs once each and audit every switch.

    Every trial checks reversibility; at each of ``z_points`` it also
    compares the truncated Woodbury series with the direct resolvent
    difference.

    Args:
        n: Vertex count.
        d: Degree.
        ell: Resampling radius.
        trials: Independent graphs.
        seed: Run seed; trial ``k`` uses the stream ``(seed, size_index, k)``.
        big_r: Radius ``R`` of the indicators; the census radius by default.
        z_points: Spectral parameters of the Woodbury audit.
        k_max: Highest series order.
        size_index: Stream coordinate distinguishing sizes of one run.
        workers: Worker processes.

    Raises:
        ExperimentError: If ``trials`` or ``k_max`` is below 1.
    """
    if trials < 1 or k_max < 1:
        raise ExperimentError("Switch trials need trials >= 1 and k_max >= 1.")
    if big_r is None:
        big_r = census_radius(n, d, DEFAULT_C)
    points = tuple(SpectralPoint.of(z) for z in z_points)
    zs = tuple(p.z for p in points)
    tasks = [
        (n, d, ell, big_r, sample_seed(seed, size_index, k), zs, k_max)
        for k in range(trials)
    ]
    results = run_tasks(_switch_task, tasks, workers)
    report = SwitchTrials(
        n=n,
        d=d,
        ell=ell,
        big_r=big_r,
        k_max=k_max,
        points=points,
        trials=tuple(results),
    )
    logger.info(
        "Switch trials n=%d: admissibility %.3f, %d collisions, reversal %.3f",
        n,
        report.admissibility_rate,
        report.collisions,
        report.reversal_rate,
    )
    return report


__all__ = [
    "EdgeScan",
    "EdgeWindowReport",
    "ExperimentError",
    "MomentReport",
    "RigidityScan",
    "StieltjesPoint",
    "StieltjesScan",
    "SwitchTrial",
    "SwitchTrials",
    "edge_fits_from_rows",
    "edge_fluctuation_scan",
    "edge_window",
    "edge_window_test",
    "esd_vs_km",
    "fit_loglog",
    "moment_ratio_fit",
    "rigidity_profile",
    "rigidity_rows",
    "rigidity_scan",
    "sample_spectra",
    "scaling_fit",
    "sc_moment_estimate",
    "spectrum",
    "stieltjes_concentration_scan",
    "stieltjes_envelope",
    "switch_trials",
]

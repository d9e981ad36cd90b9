"""Exchangeability of ``(G, T_S(G))`` under local resampling.

For a uniform random regular graph and uniform resampling data the pair
``(G, T_S(G))`` is exchangeable, so ``f(G) - f(T_S(G))`` is symmetric about
zero for every graph functional ``f``. The test draws independent pairs and
reports a sign test, a Wilcoxon signed-rank test and a Mann-Whitney rank test.
A label-biased partner sampler serves as the negative control.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigvalsh
from scipy.stats import binomtest, mannwhitneyu, wilcoxon

from .config import DEFAULT_C
from .graph import Edge, RegularGraph, census_radius, sample_uniform
from .resampling import (
    PartnerSampler,
    apply_switch,
    sample_resampling_data,
    uniform_partners,
)
from .seeding import derive_rng, run_tasks

logger = logging.getLogger(__name__)

Statistic = Callable[[RegularGraph], float]


def lambda2(g: RegularGraph) -> float:
    """Second largest eigenvalue of ``H``."""
    return float(eigvalsh(g.normalized_adjacency())[-2])


def triangles(g: RegularGraph) -> float:
    """Number of triangles."""
    a = g.adjacency_matrix()
    return float(np.sum((a @ a) * a) / 6.0)


def m_at_i(g: RegularGraph) -> float:
    """``Im m(i)``, the Stieltjes transform of the spectrum at ``z = i``."""
    lam = eigvalsh(g.normalized_adjacency())
    return float(np.mean(1.0 / (lam - 1j)).imag)


def block_edges(g: RegularGraph) -> float:
    """Edges with both endpoints among the lowest-labelled quarter of vertices."""
    cut = g.n // 4
    return float(sum(1 for u, v in g.edges if u < cut and v < cut))


def constant(g: RegularGraph) -> float:
    """The zero functional."""
    return 0.0


#: Statistics selectable by name.
STATISTICS: Dict[str, Statistic] = {
    "lambda2": lambda2,
    "triangles": triangles,
    "m_i": m_at_i,
    "block_edges": block_edges,
    "constant": constant,
}


def biased_partners(
    g: RegularGraph, oriented: Sequence[Edge], count: int, rng: np.random.Generator
) -> List[Edge]:
    """Partners drawn only from edges inside the lowest-labelled quarter.

    Falls back to the lowest-labelled available edge when the quarter holds
    none.
    """
    cut = g.n // 4
    pool = [e for e in oriented if max(e) < cut]
    if not pool:
        pool = [min(oriented, key=lambda e: (max(e), e))]
    picks = rng.integers(0, len(pool), size=count)
    return [pool[k] for k in picks]


#: Partner samplers selectable by name.
PARTNER_SAMPLERS: Dict[str, PartnerSampler] = {
    "uniform": uniform_partners,
    "biased": biased_partners,
}


class ExchangeError(ValueError):
    """Raised for an unknown statistic or partner sampler."""


def _lookup(table: Dict[str, object], key: str, what: str):
    try:
        return table[key]
    except KeyError:
        raise ExchangeError(
            f"Unknown {what} {key!r}; expected one of {sorted(table)}."
        ) from None


@dataclass(frozen=True)
class ExchangeReport:
    """Result of an exchangeability test.

    Attributes:
        statistic: Name of the functional.
        sampler: Name of the partner sampler.
        trials: Number of ``(G, T_S(G))`` pairs.
        switched: Pairs in which at least one switch was applied.
        positive: Pairs with ``f(G) > f(T_S(G))``.
        negative: Pairs with ``f(G) < f(T_S(G))``.
        sign_p: Two-sided sign test p-value.
        wilcoxon_p: Wilcoxon signed-rank p-value on the non-zero differences.
        mannwhitney_p: Mann-Whitney p-value of ``f(G)`` against ``f(T_S(G))``.
    """

    statistic: str
    sampler: str
    trials: int
    switched: int
    positive: int
    negative: int
    sign_p: float
    wilcoxon_p: float
    mannwhitney_p: float

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def _pair_task(
    task: Tuple[int, int, int, int, int, int, str, str]
) -> Tuple[float, float, bool]:
    n, d, ell, big_r, seed, k, statistic, sampler = task
    rng = derive_rng(seed, k)
    g = sample_uniform(n, d, rng)
    o = int(rng.integers(n))
    rd = sample_resampling_data(
        g, o, ell, rng, partner_sampler=PARTNER_SAMPLERS[sampler]
    )
    result = apply_switch(g, rd, big_r)
    f = STATISTICS[statistic]
    return f(g), f(result.graph), bool(result.applied)


def symmetry_pvalues(
    before: np.ndarray, after: np.ndarray
) -> Tuple[int, int, float, float, float]:
    """Sign, Wilcoxon and Mann-Whitney tests of ``before - after`` about zero.

    Every p-value is 1 when the differences vanish identically.
    """
    diff = before - after
    positive = int(np.sum(diff > 0))
    negative = int(np.sum(diff < 0))
    nonzero = positive + negative
    if nonzero == 0:
        return positive, negative, 1.0, 1.0, 1.0
    sign_p = float(binomtest(positive, nonzero, 0.5).pvalue)
    wilcoxon_p = float(wilcoxon(diff[diff != 0]).pvalue)
    pooled = np.concatenate([before, after])
    if np.ptp(pooled) == 0:
        mannwhitney_p = 1.0
    else:
        test = mannwhitneyu(before, after, alternative="two-sided")
        mannwhitney_p = float(test.pvalue)
    return positive, negative, sign_p, wilcoxon_p, mannwhitney_p


def exchangeability_test(
    statistic: str,
    n: int,
    d: int,
    ell: int,
    trials: int,
    seed: int,
    *,
    big_r: Optional[int] = None,
    sampler: str = "uniform",
    workers: int = 1,
) -> ExchangeReport:
    """Test whether ``(G, T_S(G))`` is exchangeable for ``statistic``.

    Args:
        statistic: Key of :data:`STATISTICS`.
        n: Vertex count.
        d: Degree.
        ell: Resampling radius.
        trials: Number of independent pairs.
        seed: Run seed; pair ``k`` uses the stream ``(seed, k)``.
        big_r: Radius ``R`` of the switchability indicators; defaults to
            ``floor((c/4) log_{d-1} n)`` with the default ``c``.
        sampler: Key of :data:`PARTNER_SAMPLERS`.
        workers: Worker processes.

    Returns:
        ExchangeReport: Counts and p-values.
    """
    _lookup(STATISTICS, statistic, "statistic")
    if big_r is None:
        big_r = census_radius(n, d, DEFAULT_C)
    _lookup(PARTNER_SAMPLERS, sampler, "partner sampler")
    tasks = [(n, d, ell, big_r, seed, k, statistic, sampler) for k in range(trials)]
    results = run_tasks(_pair_task, tasks, workers)
    before = np.array([r[0] for r in results])
    after = np.array([r[1] for r in results])
    switched = sum(1 for r in results if r[2])
    positive, negative, sign_p, wilcoxon_p, mw_p = symmetry_pvalues(before, after)
    logger.info(
        "Exchangeability %s/%s: %d trials, %d switched, sign p=%.3g",
        statistic,
        sampler,
        trials,
        switched,
        sign_p,
    )
    return ExchangeReport(
        statistic=statistic,
        sampler=sampler,
        trials=trials,
        switched=switched,
        positive=positive,
        negative=negative,
        sign_p=sign_p,
        wilcoxon_p=wilcoxon_p,
        mannwhitney_p=mw_p,
    )


__all__ = [
    "ExchangeError",
    "ExchangeReport",
    "PARTNER_SAMPLERS",
    "STATISTICS",
    "biased_partners",
    "block_edges",
    "constant",
    "exchangeability_test",
    "lambda2",
    "m_at_i",
    "symmetry_pvalues",
    "triangles",
]

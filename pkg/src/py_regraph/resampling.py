"""Local resampling of a regular graph around a center vertex.

The boundary edges ``(l, a)`` of the ball ``T = B_ell(o)`` are paired with
independent uniform oriented edges ``(b, c)`` of the graph with ``T`` removed.
Each pair whose neighborhood is tree-like and isolated from all other pairs is
switched: ``{l, a}, {b, c}`` become ``{l, c}, {a, b}``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from .graph import (
    Edge,
    RegularGraph,
    Subgraph,
    ball,
    ball_of_set,
    bfs_depths,
    edge_key,
    excess,
)
from .models import AdmissibleSet, ResamplingData
from .seeding import SeedLike, as_generator

#: ``(graph, oriented_edges, count, rng) -> chosen oriented edges``.
PartnerSampler = Callable[
    [RegularGraph, Sequence[Edge], int, np.random.Generator], List[Edge]
]

logger = logging.getLogger(__name__)


class ResamplingError(ValueError):
    """Raised when resampling data cannot be formed or does not fit the graph."""


def uniform_partners(
    g: RegularGraph, oriented: Sequence[Edge], count: int, rng: np.random.Generator
) -> List[Edge]:
    """Independent uniform draws, repetitions allowed."""
    picks = rng.integers(0, len(oriented), size=count)
    return [oriented[k] for k in picks]


def boundary_data(g: RegularGraph, o: int, ell: int) -> Tuple[Subgraph, List[Edge]]:
    """Ball ``B_ell(o)`` and its edge boundary oriented from inside to outside.

    The boundary is sorted lexicographically by ``(l, a)``.

    Raises:
        ResamplingError: If ``ell < 1``.
    """
    if ell < 1:
        raise ResamplingError(f"Resampling radius must be at least 1 (got {ell}).")
    t = ball(g, o, ell)
    inside = t.vertices
    boundary = sorted((l, a) for l in inside for a in g.adj[l] if a not in inside)
    return t, boundary


def outside_oriented_edges(g: RegularGraph, inside: Set[int]) -> List[Edge]:
    """Oriented edges of ``g`` with neither endpoint in ``inside``."""
    return [
        (u, v)
        for u, v in g.oriented_edges()
        if u not in inside and v not in inside
    ]


def sample_resampling_data(
    g: RegularGraph,
    o: int,
    ell: int,
    seed: SeedLike = None,
    *,
    partner_sampler: PartnerSampler = uniform_partners,
) -> ResamplingData:
    """Draw resampling data around ``o``.

    Args:
        g: Graph.
        o: Center vertex.
        ell: Ball radius.
        seed: Integer seed or generator.
        partner_sampler: How partner edges are chosen; uniform by default.

    Returns:
        ResamplingData: Boundary edges and one partner per boundary edge.

    Raises:
        ResamplingError: If the ball leaves no edge to pair with.
    """
    t, boundary = boundary_data(g, o, ell)
    if not boundary:
        return ResamplingData(center=o, ell=ell, boundary=(), partners=())
    pool = outside_oriented_edges(g, set(t.vertices))
    if not pool:
        raise ResamplingError(f"Ball B_{ell}({o}) leaves no edge outside it.")
    partners = partner_sampler(g, pool, len(boundary), as_generator(seed))
    return ResamplingData(
        center=o,
        ell=ell,
        boundary=tuple(boundary),
        partners=tuple((int(b), int(c)) for b, c in partners),
    )


def validate_data(g: RegularGraph, rd: ResamplingData) -> Set[int]:
    """Check ``rd`` against ``g`` and return the ball vertex set.

    Raises:
        ResamplingError: If a boundary or partner edge is not where it should be.
    """
    inside = set(ball(g, rd.center, rd.ell).vertices)
    for l, a in rd.boundary:
        if not g.has_edge(l, a) or l not in inside or a in inside:
            raise ResamplingError(
                f"({l}, {a}) is not a boundary edge of B_{rd.ell}({rd.center})."
            )
    for b, c in rd.partners:
        if not g.has_edge(b, c) or b in inside or c in inside:
            raise ResamplingError(f"({b}, {c}) is not an edge outside the ball.")
    return inside


def quarter_radius(big_r: int) -> int:
    """``R/4`` rounded down and clamped to at least 1."""
    return max(1, int(math.floor(big_r / 4)))


def _triple(rd: ResamplingData, alpha: int) -> Tuple[int, int, int]:
    (_, a), (b, c) = rd.boundary[alpha], rd.partners[alpha]
    return a, b, c


def _tree_condition(
    g: RegularGraph, rd: ResamplingData, alpha: int, radius: int, inside: Set[int]
) -> bool:
    a, b, c = _triple(rd, alpha)
    if a == b:
        return False
    local = ball_of_set(g, (a, b, c), radius, removed=inside)
    new = (a, b) if a < b else (b, a)
    if new in local.edges:
        return False
    joined = Subgraph(vertices=local.vertices, edges=local.edges | {new})
    return len(joined.edges) == len(joined.vertices) - 1 and excess(joined) == 0


def _isolated(
    g: RegularGraph, rd: ResamplingData, alpha: int, radius: int, inside: Set[int]
) -> bool:
    reach = bfs_depths(g.adj, _triple(rd, alpha), radius, frozenset(inside))
    return all(
        not any(v in reach for v in _triple(rd, j)) for j in range(rd.mu) if j != alpha
    )


def indicator_alpha(
    g: RegularGraph, rd: ResamplingData, alpha: int, big_r: int
) -> bool:
    """Switchability indicator ``I_alpha``.

    Both conditions are evaluated in the graph with the ball removed, at
    radius ``R/4`` (at least 1):

    1. the ball around ``{a, b, c}`` plus the edge ``{a, b}`` is a tree;
    2. ``{a, b, c}`` is farther than ``R/4`` from every other triple.
    """
    if not 0 <= alpha < rd.mu:
        raise ResamplingError(f"alpha={alpha} outside 0..{rd.mu - 1}.")
    inside = set(ball(g, rd.center, rd.ell).vertices)
    radius = quarter_radius(big_r)
    return _isolated(g, rd, alpha, radius, inside) and _tree_condition(
        g, rd, alpha, radius, inside
    )


def admissible_set(g: RegularGraph, rd: ResamplingData, big_r: int) -> AdmissibleSet:
    """Evaluate ``I_alpha`` for every ``alpha``."""
    inside = set(ball(g, rd.center, rd.ell).vertices)
    radius = quarter_radius(big_r)
    return AdmissibleSet.from_flags(
        _isolated(g, rd, k, radius, inside)
        and _tree_condition(g, rd, k, radius, inside)
        for k in range(rd.mu)
    )


@dataclass(frozen=True)
class SwitchResult:
    """Outcome of one local resampling.

    Attributes:
        graph: The switched graph ``T_S(G)``.
        data: The resampling data ``T(S)`` of the switched graph.
        admissible: ``W_S`` as computed on the input graph.
        applied: Indices actually switched, ascending.
        collisions: Admissible indices dropped because the switch would
            repeat an edge or reuse a vertex.
        removed: Edges removed, in switching order.
        added: Edges added, in switching order.
        source: The resampling data the switch was drawn from.
    """

    graph: RegularGraph
    data: ResamplingData
    admissible: AdmissibleSet
    applied: Tuple[int, ...]
    collisions: Tuple[int, ...]
    removed: Tuple[Edge, ...]
    added: Tuple[Edge, ...]
    source: ResamplingData


def apply_switch(g: RegularGraph, rd: ResamplingData, big_r: int) -> SwitchResult:
    """Apply ``T_S``: switch every admissible pair in ascending order.

    A pair is skipped and recorded as a collision when its four vertices are
    not distinct, when an edge it creates already exists, or when an edge it
    removes is already gone.

    Args:
        g: Graph.
        rd: Resampling data drawn on ``g``.
        big_r: Radius ``R``; the indicators use ``R/4``.

    Returns:
        SwitchResult: Switched graph, reversed data and bookkeeping.
    """
    validate_data(g, rd)
    admissible = admissible_set(g, rd, big_r)
    edges = set(g.edges)
    applied: List[int] = []
    collisions: List[int] = []
    removed: List[Edge] = []
    added: List[Edge] = []
    for k in admissible.indices:
        (l, a), (b, c) = rd.boundary[k], rd.partners[k]
        old = (edge_key(l, a), edge_key(b, c))
        new = (edge_key(l, c), edge_key(a, b))
        if (
            len({l, a, b, c}) != 4
            or any(e in edges for e in new)
            or any(e not in edges for e in old)
        ):
            collisions.append(k)
            continue
        edges.difference_update(old)
        edges.update(new)
        applied.append(k)
        removed.extend(old)
        added.extend(new)
    if collisions:
        logger.info(
            "Dropped %d colliding switch(es) at center %d", len(collisions), rd.center
        )
    logger.debug(
        "Center %d: mu=%d admissible=%d applied=%d",
        rd.center,
        rd.mu,
        len(admissible.indices),
        len(applied),
    )
    switched = RegularGraph.from_edges(g.n, g.d, edges) if applied else g
    return SwitchResult(
        graph=switched,
        data=rd.switched(applied),
        admissible=admissible,
        applied=tuple(applied),
        collisions=tuple(collisions),
        removed=tuple(removed),
        added=tuple(added),
        source=rd,
    )


class Reversal(NamedTuple):
    """Outcome of switching a switched graph back with its reversed data.

    Attributes:
        comparable: The admissible set recomputed on ``T_S(G)`` equals ``W_S``.
        recovered: Switching back reproduced the original graph.
    """

    comparable: bool
    recovered: bool


def reverse_switch(g: RegularGraph, result: SwitchResult, big_r: int) -> Reversal:
    """Apply ``T_{T(S)}`` to ``T_S(G)`` and compare with ``g``.

    Data that no longer fit the switched graph (a partner edge consumed by
    another switch) count as neither comparable nor recovered.
    """
    try:
        back = apply_switch(result.graph, result.data, big_r)
    except ResamplingError as exc:
        logger.debug("Reversed data do not fit the switched graph: %s", exc)
        return Reversal(comparable=False, recovered=False)
    return Reversal(
        comparable=back.admissible.indices == result.admissible.indices,
        recovered=back.graph.edges == g.edges,
    )


class AdmissibilityStats(NamedTuple):
    """Totals over repeated resamplings.

    Attributes:
        trials: Number of resamplings.
        boundary_edges: Sum of ``mu``.
        admissible: Sum of ``|W_S|``.
        collisions: Admissible pairs dropped by the simplicity guard.
    """

    trials: int
    boundary_edges: int
    admissible: int
    collisions: int

    @property
    def rate(self) -> float:
        """Fraction of boundary edges that were admissible."""
        if not self.boundary_edges:
            return math.nan
        return self.admissible / self.boundary_edges

    @property
    def collision_rate(self) -> float:
        """Fraction of admissible pairs dropped as collisions."""
        return self.collisions / self.admissible if self.admissible else 0.0


def admissibility_rate(
    g: RegularGraph,
    ell: int,
    big_r: int,
    trials: int,
    seed: SeedLike = None,
    centers: Optional[Sequence[int]] = None,
) -> AdmissibilityStats:
    """Resample ``trials`` times around random (or given) centers and count."""
    rng = as_generator(seed)
    mu_total = admissible_total = collision_total = 0
    for k in range(trials):
        o = int(centers[k % len(centers)]) if centers else int(rng.integers(g.n))
        rd = sample_resampling_data(g, o, ell, rng)
        result = apply_switch(g, rd, big_r)
        mu_total += rd.mu
        admissible_total += len(result.admissible.indices)
        collision_total += len(result.collisions)
    return AdmissibilityStats(trials, mu_total, admissible_total, collision_total)


__all__ = [
    "AdmissibilityStats",
    "PartnerSampler",
    "ResamplingError",
    "Reversal",
    "SwitchResult",
    "admissibility_rate",
    "admissible_set",
    "apply_switch",
    "boundary_data",
    "indicator_alpha",
    "outside_oriented_edges",
    "quarter_radius",
    "reverse_switch",
    "sample_resampling_data",
    "uniform_partners",
    "validate_data",
]

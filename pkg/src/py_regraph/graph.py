"""Simple d-regular graphs: sampling, balls, excess, minors and distances.

Graphs are immutable. ``RegularGraph`` enforces regularity and simplicity on
construction; ``Subgraph`` is the general bounded-degree object produced by
balls, minors and the explicit truncated trees used as oracles.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import DEFAULT_MAX_PAIRING_ATTEMPTS, DEFAULT_OMEGA_D
from .models import OmegaBarReport
from .seeding import SeedLike, as_generator

Edge = Tuple[int, int]

logger = logging.getLogger(__name__)


class GraphError(ValueError):
    """Raised when graph parameters or structure are invalid."""


class SamplingBudgetExceeded(RuntimeError):
    """Raised when the pairing sampler exhausts its rejection budget.

    Attributes:
        attempts: Number of rejected pairings.
    """

    def __init__(self, n: int, d: int, attempts: int) -> None:
        """Build the message for the exhausted ``(n, d)`` pair."""
        self.attempts = attempts
        super().__init__(
            f"No simple {d}-regular graph on {n} vertices after {attempts} pairings."
        )


def edge_key(u: int, v: int) -> Edge:
    """Unordered edge ``{u, v}`` as the sorted pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Subgraph:
    """Bounded-degree graph on an explicit vertex set.

    Attributes:
        vertices: Vertex ids (labels of the parent graph).
        edges: Unordered edges ``(u, v)`` with ``u < v``, both in ``vertices``.
        root: Optional center vertex.
    """

    vertices: FrozenSet[int]
    edges: FrozenSet[Edge]
    root: Optional[int] = None

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u >= v or u not in self.vertices or v not in self.vertices:
                raise GraphError(f"Edge ({u}, {v}) is not inside the vertex set.")
        if self.root is not None and self.root not in self.vertices:
            raise GraphError(f"Root {self.root} is not a vertex of the subgraph.")

    @cached_property
    def order(self) -> Tuple[int, ...]:
        """Sorted vertex ids; row/column order of every matrix built here."""
        return tuple(sorted(self.vertices))

    @cached_property
    def index(self) -> Dict[int, int]:
        """Map from vertex id to its position in :attr:`order`."""
        return {v: k for k, v in enumerate(self.order)}

    def degree(self, v: int) -> int:
        """Return the degree of ``v`` inside the subgraph."""
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> np.ndarray:
        """Return the degree vector in :attr:`order`."""
        deg = np.zeros(len(self.order), dtype=int)
        for u, v in self.edges:
            deg[self.index[u]] += 1
            deg[self.index[v]] += 1
        return deg

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix in :attr:`order`."""
        size = len(self.order)
        a = np.zeros((size, size))
        for u, v in self.edges:
            i, j = self.index[u], self.index[v]
            a[i, j] = a[j, i] = 1.0
        return a

    def neighbors(self) -> Dict[int, List[int]]:
        """Sorted adjacency lists keyed by vertex id."""
        adj: Dict[int, List[int]] = {v: [] for v in self.order}
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return {v: sorted(nbrs) for v, nbrs in adj.items()}


@dataclass(frozen=True)
class RegularGraph:
    """Immutable simple d-regular graph on vertices ``0..n-1``.

    Attributes:
        n: Vertex count.
        d: Common degree.
        adj: Sorted neighbor tuple per vertex.
        edges: Unordered edges ``(u, v)`` with ``u < v``.
    """

    n: int
    d: int
    adj: Tuple[Tuple[int, ...], ...] = field(repr=False)
    edges: FrozenSet[Edge] = field(repr=False)

    def __post_init__(self) -> None:
        if (self.n * self.d) % 2:
            raise GraphError(f"n*d must be even (n={self.n}, d={self.d}).")
        if len(self.adj) != self.n:
            raise GraphError("Adjacency list count does not match n.")
        for u, nbrs in enumerate(self.adj):
            if len(nbrs) != self.d or len(set(nbrs)) != self.d:
                raise GraphError(
                    f"Vertex {u} does not have {self.d} distinct neighbors."
                )
            if u in nbrs:
                raise GraphError(f"Vertex {u} has a self-loop.")
            for v in nbrs:
                if not 0 <= v < self.n or u not in self.adj[v]:
                    raise GraphError(f"Adjacency of {u} and {v} is not symmetric.")
        if len(self.edges) * 2 != self.n * self.d:
            raise GraphError("Edge set does not match the adjacency lists.")

    @classmethod
    def from_edges(
        cls, n: int, d: int, edges: Iterable[Sequence[int]]
    ) -> "RegularGraph":
        """Build and validate a graph from an edge list.

        Raises:
            GraphError: On loops, repeated edges, or a non-regular degree profile.
        """
        canon: Set[Edge] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"Self-loop at vertex {u}.")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"Edge ({u}, {v}) leaves the vertex range 0..{n - 1}.")
            e = edge_key(u, v)
            if e in canon:
                raise GraphError(f"Repeated edge {e}.")
            canon.add(e)
        nbrs: List[List[int]] = [[] for _ in range(n)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adj = tuple(tuple(sorted(x)) for x in nbrs)
        return cls(n=n, d=d, adj=adj, edges=frozenset(canon))

    def has_edge(self, u: int, v: int) -> bool:
        """Return whether ``{u, v}`` is an edge."""
        return edge_key(u, v) in self.edges

    def sorted_edges(self) -> List[Edge]:
        """Edges in lexicographic order."""
        return sorted(self.edges)

    def oriented_edges(self) -> List[Edge]:
        """Both orientations of every edge, lexicographically sorted."""
        return sorted([(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges])

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix ``A``."""
        a = np.zeros((self.n, self.n))
        if self.edges:
            idx = np.array(sorted(self.edges))
            a[idx[:, 0], idx[:, 1]] = 1.0
            a[idx[:, 1], idx[:, 0]] = 1.0
        return a

    def normalized_adjacency(self) -> np.ndarray:
        """Return ``H = A / sqrt(d - 1)``, bulk spectrum on ``[-2, 2]``."""
        return self.adjacency_matrix() / math.sqrt(self.d - 1)

    def switched(
        self, removed: Iterable[Edge], added: Iterable[Edge]
    ) -> "RegularGraph":
        """Return the graph with ``removed`` edges replaced by ``added`` ones."""
        edges = set(self.edges)
        for e in removed:
            edges.discard(edge_key(*e))
        edges.update(edge_key(*e) for e in added)
        return RegularGraph.from_edges(self.n, self.d, edges)


# ---------------------------------------------------------------- sampling


def _check_parameters(n: int, d: int) -> None:
    if (n * d) % 2:
        raise GraphError(f"n*d must be even (n={n}, d={d}): handshake parity violated.")
    if d < 3:
        raise GraphError(f"Degree must be at least 3 (got d={d}).")
    if d >= n:
        raise GraphError(f"Degree must be smaller than n (got d={d}, n={n}).")


def _random_pairing(n: int, d: int, rng: np.random.Generator) -> Optional[np.ndarray]:
    """Draw one configuration-model pairing; ``None`` if it is not simple."""
    stubs = rng.permutation(np.repeat(np.arange(n), d)).reshape(-1, 2)
    stubs.sort(axis=1)
    if np.any(stubs[:, 0] == stubs[:, 1]):
        return None
    keys = stubs[:, 0].astype(np.int64) * n + stubs[:, 1]
    if np.unique(keys).size != keys.size:
        return None
    return stubs


def sample_uniform(
    n: int,
    d: int,
    seed: SeedLike = None,
    *,
    max_attempts: int = DEFAULT_MAX_PAIRING_ATTEMPTS,
) -> RegularGraph:
    """Draw a uniform simple d-regular graph on ``n`` labeled vertices.

    The configuration model pairs ``n*d`` stubs uniformly; any pairing with a
    loop or a repeated edge is rejected as a whole. Every simple graph arises
    from exactly ``(d!)^n`` pairings, so the accepted output is exactly uniform.

    Args:
        n: Vertex count.
        d: Degree, ``3 <= d < n``.
        seed: Integer seed or ``numpy`` generator.
        max_attempts: Rejection budget.

    Returns:
        RegularGraph: The sampled graph.

    Raises:
        GraphError: On parity or range violations.
        SamplingBudgetExceeded: When no simple pairing is found in budget.
    """
    _check_parameters(n, d)
    rng = as_generator(seed)
    for attempt in range(1, max_attempts + 1):
        pairs = _random_pairing(n, d, rng)
        if pairs is not None:
            logger.debug(
                "Accepted pairing for n=%d d=%d after %d attempts", n, d, attempt
            )
            return RegularGraph.from_edges(n, d, pairs.tolist())
    raise SamplingBudgetExceeded(n, d, max_attempts)


def acceptance_rate(n: int, d: int, trials: int, seed: SeedLike = None) -> float:
    """Fraction of raw pairings that are simple graphs.

    For fixed ``d`` it tends to ``exp(-(d^2 - 1) / 4)``, i.e. ``e^-2`` for ``d = 3``.
    """
    _check_parameters(n, d)
    rng = as_generator(seed)
    accepted = sum(_random_pairing(n, d, rng) is not None for _ in range(trials))
    return accepted / trials


# ---------------------------------------------------------------- structure


def bfs_depths(
    adj: Sequence[Sequence[int]],
    sources: Iterable[int],
    radius: Optional[float] = None,
    removed: FrozenSet[int] = frozenset(),
) -> Dict[int, int]:
    """Breadth-first depths from ``sources``, avoiding ``removed``, up to ``radius``."""
    depth: Dict[int, int] = {}
    queue: deque = deque()
    for s in sources:
        if s not in removed and s not in depth:
            depth[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        if radius is not None and depth[u] >= radius:
            continue
        for v in adj[u]:
            if v not in depth and v not in removed:
                depth[v] = depth[u] + 1
                queue.append(v)
    return depth


def induced_subgraph(
    g: RegularGraph, vertices: Iterable[int], root: Optional[int] = None
) -> Subgraph:
    """Return the subgraph induced by ``vertices``."""
    vs = frozenset(vertices)
    edges = frozenset(
        edge_key(u, v) for u in vs for v in g.adj[u] if v in vs and u < v
    )
    return Subgraph(vertices=vs, edges=edges, root=root)


def ball(g: RegularGraph, v: int, r: int) -> Subgraph:
    """Induced subgraph within distance ``r`` of ``v``, rooted at ``v``."""
    if not 0 <= v < g.n:
        raise GraphError(f"Vertex {v} outside 0..{g.n - 1}.")
    if r < 0:
        raise GraphError(f"Radius must be non-negative (got {r}).")
    return induced_subgraph(g, bfs_depths(g.adj, [v], r), root=v)


def ball_of_set(
    g: RegularGraph,
    centers: Iterable[int],
    r: int,
    removed: Iterable[int] = (),
) -> Subgraph:
    """Ball of radius ``r`` around a vertex set inside ``g`` minus ``removed``."""
    gone = frozenset(removed)
    return induced_subgraph(g, bfs_depths(g.adj, centers, r, gone))


def excess(s: Subgraph) -> int:
    """Number of independent cycles: ``|E| - |V| + components``."""
    if not s.vertices:
        return 0
    size = len(s.order)
    if s.edges:
        rows = [s.index[u] for u, _ in s.edges]
        cols = [s.index[v] for _, v in s.edges]
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    else:
        graph = coo_matrix((size, size))
    components, _ = connected_components(graph, directed=False)
    return len(s.edges) - size + int(components)


def census_radius(n: int, d: int, c: float) -> int:
    """Return ``R = floor((c/4) log_{d-1} n)`` clamped to at least 1."""
    return max(1, int(math.floor((c / 4.0) * math.log(n) / math.log(d - 1))))


def omega_bar_census(
    g: RegularGraph,
    c: float,
    *,
    omega_d: int = DEFAULT_OMEGA_D,
    radius: Optional[int] = None,
) -> OmegaBarReport:
    """Evaluate both conditions of the typical-graph event.

    Condition (1): at most ``N^c`` vertices lack a radius-R tree neighborhood.
    Condition (2): every radius-R ball has excess at most ``omega_d``.

    Args:
        g: Graph under test.
        c: Small constant in ``(0, 1)``.
        omega_d: Excess cap.
        radius: Override for ``R``.

    Returns:
        OmegaBarReport: Census counts and the verdict.
    """
    if not 0 < c < 1:
        raise GraphError(f"Census constant must lie in (0, 1) (got {c}).")
    big_r = radius if radius is not None else census_radius(g.n, g.d, c)
    excesses = [excess(ball(g, v, big_r)) for v in range(g.n)]
    bad = sum(1 for x in excesses if x > 0)
    max_excess = max(excesses) if excesses else 0
    threshold = g.n**c
    return OmegaBarReport(
        radius=big_r,
        excess_cap=omega_d,
        bad_vertex_count=bad,
        max_excess=max_excess,
        threshold=threshold,
        holds=bad <= threshold and max_excess <= omega_d,
    )


def remove_vertices(
    g: RegularGraph, s: Iterable[int]
) -> Tuple[Subgraph, Dict[int, int]]:
    """Induced graph on the complement of ``s`` and its relabeling map.

    Returns:
        Tuple[Subgraph, Dict[int, int]]: The minor (original labels kept) and
        the map from original label to compact index ``0..n-|s|-1``.
    """
    gone = set(s)
    for v in gone:
        if not 0 <= v < g.n:
            raise GraphError(f"Vertex {v} outside 0..{g.n - 1}.")
    minor = induced_subgraph(g, (v for v in range(g.n) if v not in gone))
    return minor, dict(minor.index)


def distance(g: RegularGraph, u: int, v: int) -> float:
    """Breadth-first graph distance; ``math.inf`` when disconnected."""
    depth = bfs_depths(g.adj, [u])
    return float(depth[v]) if v in depth else math.inf


def set_distance(
    g: RegularGraph,
    a: Iterable[int],
    b: Iterable[int],
    removed: Iterable[int] = (),
    limit: Optional[int] = None,
) -> float:
    """Distance between two vertex sets inside ``g`` minus ``removed``.

    Search stops at ``limit``; anything farther reports ``math.inf``.
    """
    targets = set(b)
    depth = bfs_depths(g.adj, a, limit, frozenset(removed))
    hits = [depth[t] for t in targets if t in depth]
    return float(min(hits)) if hits else math.inf


# ---------------------------------------------------------------- fixtures


def complete_graph(n: int) -> RegularGraph:
    """The complete graph ``K_n`` as an ``(n-1)``-regular graph."""
    return RegularGraph.from_edges(
        n, n - 1, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def petersen_graph() -> RegularGraph:
    """The Petersen graph: 3-regular, 10 vertices, girth 5."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return RegularGraph.from_edges(10, 3, outer + spokes + inner)


def truncated_tree(d: int, depth: int, root_degree: Optional[int] = None) -> Subgraph:
    """Depth-``depth`` ball of the infinite tree, rooted at vertex 0.

    ``root_degree = d`` gives the d-regular tree; ``d - 1`` the (d-1)-ary tree.
    Every non-root internal vertex has ``d - 1`` children.
    """
    root_degree = d if root_degree is None else root_degree
    edges: List[Edge] = []
    frontier = [0]
    count = 1
    for level in range(depth):
        nxt: List[int] = []
        for parent in frontier:
            for _ in range(root_degree if level == 0 else d - 1):
                edges.append((parent, count))
                nxt.append(count)
                count += 1
        frontier = nxt
    return Subgraph(vertices=frozenset(range(count)), edges=frozenset(edges), root=0)


__all__ = [
    "Edge",
    "GraphError",
    "RegularGraph",
    "SamplingBudgetExceeded",
    "Subgraph",
    "acceptance_rate",
    "ball",
    "ball_of_set",
    "bfs_depths",
    "census_radius",
    "complete_graph",
    "distance",
    "edge_key",
    "excess",
    "induced_subgraph",
    "omega_bar_census",
    "petersen_graph",
    "remove_vertices",
    "sample_uniform",
    "set_distance",
    "truncated_tree",
]

"""Low-rank update of the Green's function across a local resampling.

The switched adjacency differs from the original by a sum of rank-4 blocks
``xi_alpha`` supported on ``{l, a, b, c}``. With ``P`` and ``P~`` the tree
extensions of the support graph before and after the switch, and

    F = sum xi + (sum xi) P~ (sum xi),

the Woodbury identity expands

    G~ - G = sum_k G F ((G|_F - P) F)^k G,

which converges when the spectral radius of ``(G|_F - P) F`` is below one and
sums to ``G F (I - (G|_F - P) F)^{-1} G`` in any case.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.linalg import LinAlgError, eigvals, solve

from .graph import RegularGraph, Subgraph, ball, edge_key
from .greens import GreensMatrix, greens
from .km import ZLike, m_sc
from .models import TreeWeight
from .resampling import SwitchResult
from .treeext import (
    RootCompensation,
    TreeExtension,
    TreeExtensionError,
    tree_extension_P,
)

logger = logging.getLogger(__name__)


def support_graphs(g: RegularGraph, result: SwitchResult) -> Tuple[Subgraph, Subgraph]:
    """Support graph before and after the switch.

    Before: ``B_{ell+1}(o)`` together with every partner edge ``{b, c}``.
    After: the same with the applied switches carried out.
    """
    rd = result.source
    local = ball(g, rd.center, rd.ell + 1)
    vertices = set(local.vertices)
    edges = set(local.edges)
    for b, c in rd.partners:
        vertices.update((b, c))
        edges.add(edge_key(b, c))
    before = Subgraph(
        vertices=frozenset(vertices), edges=frozenset(edges), root=rd.center
    )
    after_edges = (edges - {edge_key(*e) for e in result.removed}) | {
        edge_key(*e) for e in result.added
    }
    after = Subgraph(
        vertices=before.vertices, edges=frozenset(after_edges), root=rd.center
    )
    return before, after


def xi_matrix(n: int, d: int, l: int, a: int, b: int, c: int) -> sparse.csr_matrix:
    """``(1/sqrt(d-1)) (D_la + D_bc - D_lc - D_ab)`` as a sparse ``n x n`` matrix.

    ``D_uv`` has ones at ``(u, v)`` and ``(v, u)``.
    """
    s = 1.0 / math.sqrt(d - 1)
    rows = [l, a, b, c, l, c, a, b]
    cols = [a, l, c, b, c, l, b, a]
    data = [s, s, s, s, -s, -s, -s, -s]
    return sparse.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


@dataclass(frozen=True, eq=False)
class SwitchDelta:
    """Rank decomposition of a switch.

    Attributes:
        xi_list: One sparse ``xi_alpha`` per applied switch.
        support: Vertex order of :attr:`F` and of ``P``.
        F: Dense ``F`` on the support.
        p: Tree extension of the support graph before the switch.
        p_tilde: Tree extension after the switch.
    """

    xi_list: Tuple[sparse.csr_matrix, ...]
    support: Tuple[int, ...]
    F: np.ndarray = field(repr=False)
    p: TreeExtension = field(repr=False)
    p_tilde: TreeExtension = field(repr=False)

    def xi_sum(self, n: int) -> np.ndarray:
        """Dense ``sum_alpha xi_alpha``, equal to ``H - H~``."""
        total = sparse.csr_matrix((n, n))
        for xi in self.xi_list:
            total = total + xi
        return total.toarray()


def switch_delta(g: RegularGraph, result: SwitchResult, z: ZLike) -> SwitchDelta:
    """Build ``xi_alpha``, ``P``, ``P~`` and ``F`` for an applied switch.

    Both tree extensions use full compensation with ``Delta = m_sc(z)``.

    Raises:
        TreeExtensionError: If either extension is singular.
    """
    rd = result.source
    xi_list = tuple(
        xi_matrix(g.n, g.d, *rd.boundary[k], *rd.partners[k]) for k in result.applied
    )
    before, after = support_graphs(g, result)
    weight = TreeWeight(delta=m_sc(z))
    p = tree_extension_P(before, z, weight, g.d, RootCompensation.FULL)
    p_tilde = tree_extension_P(after, z, weight, g.d, RootCompensation.FULL)
    support = before.order
    y = np.zeros((len(support), len(support)))
    for xi in xi_list:
        y += xi[support, :][:, support].toarray()
    f = y + y @ p_tilde.matrix @ y
    return SwitchDelta(xi_list=xi_list, support=support, F=f, p=p, p_tilde=p_tilde)


def direct_delta(g: RegularGraph, g_tilde: RegularGraph, z: ZLike) -> np.ndarray:
    """``G~ - G`` from two independent resolvents."""
    return greens(g_tilde, z).entries - greens(g, z).entries


def resolvent_identity_residual(
    g: RegularGraph, g_tilde: RegularGraph, z: ZLike
) -> float:
    """Entrywise max of ``(G~ - G) + G~ (H~ - H) G``."""
    gm = greens(g, z).entries
    gt = greens(g_tilde, z).entries
    dh = g_tilde.normalized_adjacency() - g.normalized_adjacency()
    return float(np.max(np.abs(gt - gm + gt @ dh @ gm)))


@dataclass(frozen=True, eq=False)
class WoodburyExpansion:
    """Truncated Woodbury series against the direct difference.

    Attributes:
        direct: ``G~ - G`` from two resolvents.
        partial_sums: Sum of the terms ``k <= K`` for ``K = 0..k_max``.
        errors: Entrywise max distance of each partial sum to :attr:`direct`.
        closed_form: ``G F (I - (G|_F - P) F)^{-1} G``.
        closed_form_error: Its entrywise max distance to :attr:`direct`.
        spectral_radius: Spectral radius of ``(G|_F - P) F``.
        converged: Whether the spectral radius is below one.
        fell_back: The tree extension was singular; only :attr:`direct` is set.
    """

    direct: np.ndarray = field(repr=False)
    partial_sums: Tuple[np.ndarray, ...] = field(repr=False, default=())
    errors: Tuple[float, ...] = ()
    closed_form: Optional[np.ndarray] = field(repr=False, default=None)
    closed_form_error: float = math.nan
    spectral_radius: float = math.nan
    converged: bool = True
    fell_back: bool = False

    @property
    def scale(self) -> float:
        """Entrywise max of the direct difference."""
        return float(np.max(np.abs(self.direct))) if self.direct.size else 0.0

    @property
    def relative_errors(self) -> Tuple[float, ...]:
        """:attr:`errors` divided by :attr:`scale` (zero when nothing switched)."""
        s = self.scale
        return tuple(e / s if s > 0 else 0.0 for e in self.errors)

    @property
    def decay_ratios(self) -> Tuple[float, ...]:
        """``err(K+1) / err(K)``."""
        return tuple(
            b / a if a > 0 else 0.0 for a, b in zip(self.errors, self.errors[1:])
        )


def woodbury_delta(
    gm: GreensMatrix, g: RegularGraph, result: SwitchResult, k_max: int = 4
) -> WoodburyExpansion:
    """Expand ``G~ - G`` through the Woodbury series up to order ``k_max``.

    Args:
        gm: Green's function of ``g``.
        g: Graph before the switch.
        result: The applied switch.
        k_max: Highest series order.

    Returns:
        WoodburyExpansion: Partial sums, their errors against the direct
        difference, the closed form and the contraction diagnostic.
    """
    z = gm.z
    direct = greens(result.graph, z).entries - gm.entries
    if not result.applied:
        zero = np.zeros_like(direct)
        return WoodburyExpansion(
            direct=direct,
            partial_sums=tuple(zero for _ in range(k_max + 1)),
            errors=tuple(0.0 for _ in range(k_max + 1)),
            closed_form=zero,
            closed_form_error=0.0,
            spectral_radius=0.0,
        )
    try:
        delta = switch_delta(g, result, z)
    except TreeExtensionError as exc:
        logger.warning("Falling back to the direct difference: %s", exc)
        return WoodburyExpansion(direct=direct, converged=False, fell_back=True)

    support = list(delta.support)
    g_support = gm.block(support, support)
    g_rows = gm.block(range(g.n), support)
    contraction = (g_support - delta.p.matrix) @ delta.F
    radius = float(np.max(np.abs(eigvals(contraction))))
    converged = radius < 1.0
    if not converged:
        logger.warning(
            "Woodbury contraction has spectral radius %.3f >= 1 at z=%s", radius, z
        )

    partial_sums: List[np.ndarray] = []
    errors: List[float] = []
    running = np.zeros_like(direct)
    left = g_rows @ delta.F
    for _ in range(k_max + 1):
        running = running + left @ g_rows.T
        partial_sums.append(running)
        errors.append(float(np.max(np.abs(running - direct))))
        left = left @ contraction

    try:
        closed = g_rows @ delta.F @ solve(np.eye(len(support)) - contraction, g_rows.T)
        closed_error = float(np.max(np.abs(closed - direct)))
    except (LinAlgError, ValueError) as exc:
        logger.warning("Woodbury closed form is singular: %s", exc)
        closed, closed_error = None, math.nan

    return WoodburyExpansion(
        direct=direct,
        partial_sums=tuple(partial_sums),
        errors=tuple(errors),
        closed_form=closed,
        closed_form_error=closed_error,
        spectral_radius=radius,
        converged=converged,
    )


__all__ = [
    "SwitchDelta",
    "WoodburyExpansion",
    "direct_delta",
    "resolvent_identity_residual",
    "support_graphs",
    "switch_delta",
    "woodbury_delta",
    "xi_matrix",
]

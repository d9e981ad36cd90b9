"""Dense Green's functions of normalized adjacency matrices.

``G(z) = (H - z)^{-1}`` is evaluated through one real-symmetric
eigendecomposition ``H = U diag(lambda) U^T`` per graph; every spectral
parameter afterwards costs only the weights ``1 / (lambda - z)``. Single
entries and diagonals are formed without materializing ``G`` so that sums over
edges stay ``O(N d N)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh, solve

from .config import DEFAULT_C, MAX_SCHUR_BLOCK
from .graph import RegularGraph
from .km import ZLike
from .models import ScResiduals, SpectralPoint

logger = logging.getLogger(__name__)


class GreensError(RuntimeError):
    """Raised when a resolvent or one of its minors cannot be computed."""


def _point(z: ZLike) -> SpectralPoint:
    return z if isinstance(z, SpectralPoint) else SpectralPoint.from_complex(complex(z))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a real symmetric matrix, eigenvalues ascending.

    Attributes:
        eigenvalues: Ascending eigenvalues.
        eigenvectors: Orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, h: np.ndarray) -> "SpectralDecomposition":
        """Diagonalize ``h``.

        Raises:
            GreensError: Non-finite input or eigensolver failure.
        """
        try:
            values, vectors = eigh(h, check_finite=True)
        except (LinAlgError, ValueError) as exc:
            raise GreensError(f"Eigendecomposition failed: {exc}") from exc
        logger.debug("Diagonalized %dx%d matrix", *h.shape)
        return cls(eigenvalues=values, eigenvectors=vectors)

    @classmethod
    def of_graph(cls, g: RegularGraph) -> "SpectralDecomposition":
        """Diagonalize the normalized adjacency ``H`` of ``g``."""
        return cls.of(g.normalized_adjacency())

    @property
    def size(self) -> int:
        return int(self.eigenvalues.shape[0])

    def weights(self, z: complex) -> np.ndarray:
        """Resolvent weights ``1 / (lambda_k - z)``."""
        return 1.0 / (self.eigenvalues - z)


@dataclass(frozen=True, eq=False)
class GreensMatrix:
    """Green's function ``G(z)`` of one graph at one spectral point.

    Attributes:
        z: Spectral point.
        decomposition: Eigenpairs of ``H``.
    """

    z: SpectralPoint
    decomposition: SpectralDecomposition = field(repr=False)

    @property
    def n(self) -> int:
        return self.decomposition.size

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.decomposition.weights(self.z.z)

    @cached_property
    def entries(self) -> np.ndarray:
        """The dense complex symmetric matrix ``G``."""
        u = self.decomposition.eigenvectors
        return (u * self._weights) @ u.T

    @cached_property
    def diagonal(self) -> np.ndarray:
        """``G_ii`` for every ``i``."""
        u = self.decomposition.eigenvectors
        return (u * u) @ self._weights

    @cached_property
    def m(self) -> complex:
        """Normalized trace ``(1/N) sum_i 1 / (lambda_i - z)``."""
        return complex(np.mean(self._weights))

    def pair_entries(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """``G_{rows[k], cols[k]}`` for every ``k``."""
        u = self.decomposition.eigenvectors
        rows = np.asarray(rows, dtype=int)
        cols = np.asarray(cols, dtype=int)
        return np.einsum("kj,j,kj->k", u[rows], self._weights, u[cols])

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Dense sub-block ``G[rows, cols]``."""
        u = self.decomposition.eigenvectors
        return (u[list(rows)] * self._weights) @ u[list(cols)].T


def greens(
    g: RegularGraph,
    z: ZLike,
    decomposition: Optional[SpectralDecomposition] = None,
) -> GreensMatrix:
    """Green's function of ``g`` at ``z``.

    Args:
        g: Graph.
        z: Spectral point in the upper half-plane.
        decomposition: Precomputed eigenpairs of ``H``, reused across ``z``.

    Returns:
        GreensMatrix: Lazily evaluated ``G(z)``.

    Raises:
        GreensError: If the eigensolver fails.
    """
    point = _point(z)
    if decomposition is None:
        decomposition = SpectralDecomposition.of_graph(g)
    elif decomposition.size != g.n:
        raise GreensError(
            f"Decomposition of size {decomposition.size} does not fit n={g.n}."
        )
    return GreensMatrix(z=point, decomposition=decomposition)


def resolvent_residual(g: RegularGraph, gm: GreensMatrix) -> float:
    """Entrywise max of ``(H - z) G - I``."""
    h = g.normalized_adjacency() - gm.z.z * np.eye(g.n)
    return float(np.max(np.abs(h @ gm.entries - np.eye(g.n))))


class WardDeviation(NamedTuple):
    """Deviations from the Ward identity.

    Attributes:
        row: ``max_i |(1/N) sum_j |G_ij|^2 - Im G_ii / (N eta)|``.
        aggregate: ``|(1/N^2) sum_ij |G_ij|^2 - Im m / (N eta)|``.
    """

    row: float
    aggregate: float

    @property
    def worst(self) -> float:
        return max(self.row, self.aggregate)


def ward_check(gm: GreensMatrix) -> WardDeviation:
    """Measure both forms of the Ward identity ``sum_j |G_ij|^2 = Im G_ii / eta``."""
    n, eta = gm.n, gm.z.eta
    squares = np.abs(gm.entries) ** 2
    row_sums = squares.sum(axis=1) / n
    row = float(np.max(np.abs(row_sums - gm.diagonal.imag / (n * eta))))
    aggregate = abs(float(squares.sum()) / n**2 - gm.m.imag / (n * eta))
    return WardDeviation(row=row, aggregate=aggregate)


@dataclass(frozen=True, eq=False)
class MinorGreens:
    """Green's entries of the graph with a vertex set removed.

    Attributes:
        removed: Removed vertices.
        vertices: Remaining vertices, the row/column order of :attr:`entries`.
        entries: ``G^(s)`` restricted to the remaining vertices.
    """

    removed: Tuple[int, ...]
    vertices: Tuple[int, ...]
    entries: np.ndarray = field(repr=False)

    def entry(self, x: int, y: int) -> complex:
        index = {v: k for k, v in enumerate(self.vertices)}
        return complex(self.entries[index[x], index[y]])


def schur_minor(gm: GreensMatrix, s: Iterable[int]) -> MinorGreens:
    """Minor Green's function by the Schur complement formula.

    ``G^(s)_xy = G_xy - G_{x,s} (G|_s)^{-1} G_{s,y}`` for ``x, y`` outside ``s``.

    Raises:
        GreensError: If ``s`` is larger than the supported block or ``G|_s``
            is singular.
    """
    removed = tuple(sorted(set(s)))
    if len(removed) > MAX_SCHUR_BLOCK:
        raise GreensError(
            f"Schur block of size {len(removed)} exceeds {MAX_SCHUR_BLOCK}."
        )
    gone = set(removed)
    keep = tuple(v for v in range(gm.n) if v not in gone)
    g = gm.entries
    if not removed:
        return MinorGreens(removed=(), vertices=keep, entries=g.copy())
    rs = list(removed)
    ks = list(keep)
    try:
        correction = g[np.ix_(ks, rs)] @ solve(g[np.ix_(rs, rs)], g[np.ix_(rs, ks)])
    except (LinAlgError, ValueError) as exc:
        raise GreensError(f"Block G|_s is singular for s={removed}: {exc}") from exc
    entries = g[np.ix_(ks, ks)] - correction
    return MinorGreens(removed=removed, vertices=keep, entries=entries)


def minor_resolvent(g: RegularGraph, s: Iterable[int], z: ZLike) -> MinorGreens:
    """``(H^(s) - z)^{-1}`` by direct inversion; oracle for :func:`schur_minor`."""
    point = _point(z)
    gone = set(s)
    keep = [v for v in range(g.n) if v not in gone]
    h = g.normalized_adjacency()[np.ix_(keep, keep)]
    try:
        entries = np.linalg.inv(h - point.z * np.eye(len(keep)))
    except np.linalg.LinAlgError as exc:
        raise GreensError(f"Minor resolvent is singular: {exc}") from exc
    return MinorGreens(
        removed=tuple(sorted(gone)), vertices=tuple(keep), entries=entries
    )


def q_of(gm: GreensMatrix, g: RegularGraph) -> complex:
    """``Q = (1/(N d)) sum over ordered adjacent (i, j) of G^(i)_jj``.

    Each summand uses the single-vertex Schur identity
    ``G^(i)_jj = G_jj - G_ij^2 / G_ii``.
    """
    pairs = np.array(g.oriented_edges(), dtype=int)
    if pairs.size == 0:
        raise GreensError("Q needs at least one edge.")
    i, j = pairs[:, 0], pairs[:, 1]
    diag = gm.diagonal
    gij = gm.pair_entries(i, j)
    total = np.sum(diag[j] - gij * gij / diag[i])
    return complex(total / (g.n * g.d))


def sc_residuals(
    g: RegularGraph, gm: GreensMatrix, ell: int, c: float = DEFAULT_C
) -> ScResiduals:
    """Self-consistent equation residuals and the control parameter ``Phi``.

    Args:
        g: Graph.
        gm: Its Green's function.
        ell: Tree depth.
        c: Constant in ``Phi = N^c Im m / (N eta)``.
    """
    from .treeext import x_ell, y_ell

    q = q_of(gm, g)
    y = y_ell(q, gm.z, ell)
    x = x_ell(q, gm.z, ell, g.d)
    phi = g.n**c * gm.m.imag / (g.n * gm.z.eta)
    return ScResiduals(
        q=q,
        y_of_q=y,
        x_of_q=x,
        q_minus_y=q - y,
        m_minus_x=gm.m - x,
        phi=phi,
    )


def stieltjes_from_eigenvalues(eigenvalues: np.ndarray, z: ZLike) -> complex:
    """``(1/N) sum_i 1 / (lambda_i - z)`` from a bare spectrum."""
    point = _point(z)
    return complex(np.mean(1.0 / (np.asarray(eigenvalues) - point.z)))


def spectral_weight(gm: GreensMatrix) -> float:
    """``Im m / (N eta)``, the Ward scale of off-diagonal entries."""
    return gm.m.imag / (gm.n * gm.z.eta)


__all__ = [
    "GreensError",
    "GreensMatrix",
    "MinorGreens",
    "SpectralDecomposition",
    "WardDeviation",
    "greens",
    "minor_resolvent",
    "q_of",
    "resolvent_residual",
    "sc_residuals",
    "schur_minor",
    "spectral_weight",
    "stieltjes_from_eigenvalues",
]

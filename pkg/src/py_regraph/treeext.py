"""Tree extensions of local graph neighborhoods.

A finite graph ``t`` with degrees at most ``d`` is extended by attaching, at
every vertex with missing degree, the self-energy ``Delta / (d - 1)`` per
missing edge. The resulting Green's function ``P`` is the finite-volume
stand-in for the infinite tree. On truncated trees the root entry reduces to
scalar iterations of ``phi(w) = 1 / (-z - w)``:

* ``Y_ell(Delta) = phi^(ell + 1)(Delta)`` for the ``(d-1)``-ary tree,
* ``X_ell(Delta) = 1 / (-z - d/(d-1) phi^ell(Delta))`` for the d-regular tree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, inv

from .graph import Subgraph
from .greens import GreensError
from .km import LawError, ZLike, as_z, m_d, m_sc
from .models import TreeWeight


class TreeExtensionError(GreensError):
    """Raised when the extended operator cannot be formed or inverted."""


class RootCompensation(str, enum.Enum):
    """How the root's missing degree is compensated.

    Attributes:
        FULL: Every vertex is topped up to degree ``d``.
        BOUNDARY: The root is topped up to ``d - 1`` only, so a truncated
            ``(d-1)``-ary tree is compensated exactly at its leaves.
    """

    FULL = "full"
    BOUNDARY = "boundary"


@dataclass(frozen=True, eq=False)
class TreeExtension:
    """Green's function of an extended subgraph.

    Attributes:
        vertices: Row/column order of :attr:`matrix`.
        matrix: Dense complex ``P``.
        root: Root vertex, if the subgraph had one.
    """

    vertices: Tuple[int, ...]
    matrix: np.ndarray
    root: Optional[int] = None

    def entry(self, u: int, v: int) -> complex:
        """``P_uv`` by vertex id."""
        index = {x: k for k, x in enumerate(self.vertices)}
        return complex(self.matrix[index[u], index[v]])

    @property
    def root_entry(self) -> complex:
        """``P_oo`` at the root."""
        if self.root is None:
            raise TreeExtensionError("Extension has no root.")
        return self.entry(self.root, self.root)


def _compensation(t: Subgraph, d: int, mode: RootCompensation) -> np.ndarray:
    caps = np.full(len(t.order), d)
    if mode is RootCompensation.BOUNDARY:
        if t.root is None:
            raise TreeExtensionError("Boundary compensation needs a rooted subgraph.")
        caps[t.index[t.root]] = d - 1
    deficiency = caps - t.degrees()
    if np.any(deficiency < 0):
        bad = [t.order[k] for k in np.flatnonzero(deficiency < 0)]
        raise TreeExtensionError(
            f"Vertices {bad} exceed their degree cap in {mode.value} mode."
        )
    return deficiency


def tree_extension_P(
    t: Subgraph,
    z: ZLike,
    w: TreeWeight,
    d: int,
    mode: RootCompensation = RootCompensation.BOUNDARY,
) -> TreeExtension:
    """Green's function of ``t`` with every degree deficit filled by ``w``.

    ``P = (-z + H(t) - (Delta/(d-1)) diag(cap - deg))^{-1}`` where ``H(t)`` is
    the adjacency of ``t`` over ``sqrt(d-1)`` and ``cap`` is ``d`` except at
    the root in :attr:`RootCompensation.BOUNDARY` mode.

    Args:
        t: Subgraph with degrees at most ``d``.
        z: Spectral parameter.
        w: Boundary weight.
        d: Degree.
        mode: Root compensation.

    Returns:
        TreeExtension: ``P`` with its vertex order.

    Raises:
        TreeExtensionError: Degree cap exceeded, or the matrix is singular.
    """
    zc = as_z(z)
    deficiency = _compensation(t, d, mode)
    size = len(t.order)
    m = (
        -zc * np.eye(size)
        + t.adjacency_matrix() / math.sqrt(d - 1)
        - np.diag(w.delta / (d - 1) * deficiency)
    )
    try:
        p = inv(m, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise TreeExtensionError(
            f"Tree extension is singular at z={zc}: {exc}"
        ) from exc
    return TreeExtension(vertices=t.order, matrix=p, root=t.root)


# ---------------------------------------------------------------- scalar recursions


def _orbit(delta: complex, z: complex, steps: int) -> List[complex]:
    orbit = [complex(delta)]
    for _ in range(steps):
        orbit.append(1.0 / (-z - orbit[-1]))
    return orbit


def _check_depth(ell: int) -> None:
    if ell < 0:
        raise LawError(f"Depth must be non-negative (got {ell}).")


def y_ell(delta: complex, z: ZLike, ell: int) -> complex:
    """``Y_ell(Delta) = phi^(ell + 1)(Delta)``."""
    _check_depth(ell)
    return _orbit(delta, as_z(z), ell + 1)[-1]


def x_ell(delta: complex, z: ZLike, ell: int, d: int) -> complex:
    """``X_ell(Delta) = 1 / (-z - d/(d-1) phi^ell(Delta))``."""
    _check_depth(ell)
    zc = as_z(z)
    inner = _orbit(delta, zc, ell)[-1]
    return 1.0 / (-zc - d / (d - 1.0) * inner)


def y_ell_derivative(delta: complex, z: ZLike, ell: int) -> complex:
    """``d Y_ell / d Delta`` as the chain-rule product of ``phi'(w) = phi(w)^2``.

    Returns the product of ``w_k^2`` over the orbit ``w_k = phi(w_{k-1})``,
    ``k = 1..ell+1``.
    """
    _check_depth(ell)
    orbit = _orbit(delta, as_z(z), ell + 1)
    out = 1.0 + 0.0j
    for w in orbit[1:]:
        out *= w * w
    return out


class TaylorResiduals(NamedTuple):
    """Remainders of the expansions of ``X_ell`` and ``Y_ell`` around ``m_sc``."""

    x_residual: complex
    y_residual: complex


def taylor_check_recurbound(
    delta: complex, z: ZLike, ell: int, d: int
) -> TaylorResiduals:
    """Compare ``X_ell`` and ``Y_ell`` with their expansions around ``m_sc``.

    ``X_ell`` is expanded to first order and ``Y_ell`` to second order, so the
    residuals are ``O(ell |Delta - m_sc|^2)`` and ``O(ell^2 |Delta - m_sc|^3)``.

    Raises:
        LawError: If ``ell |Delta - m_sc| >= 0.1``.
    """
    _check_depth(ell)
    zc = as_z(z)
    m = m_sc(zc)
    md = m_d(zc, d)
    h = complex(delta) - m
    if ell * abs(h) >= 0.1:
        raise LawError(
            f"Expansion needs ell*|Delta - m_sc| < 0.1 (got {ell * abs(h)!r})."
        )
    x_linear = md + d / (d - 1.0) * md * md * m ** (2 * ell) * h
    geometric = (1.0 - m ** (2 * ell + 2)) / (1.0 - m * m)
    y_quadratic = m + m ** (2 * ell + 2) * h + m ** (2 * ell + 3) * geometric * h * h
    return TaylorResiduals(
        x_residual=x_ell(delta, zc, ell, d) - x_linear,
        y_residual=y_ell(delta, zc, ell) - y_quadratic,
    )


__all__ = [
    "RootCompensation",
    "TaylorResiduals",
    "TreeExtension",
    "TreeExtensionError",
    "taylor_check_recurbound",
    "tree_extension_P",
    "x_ell",
    "y_ell",
    "y_ell_derivative",
]

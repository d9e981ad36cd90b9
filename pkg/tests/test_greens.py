import math

import numpy as np
import pytest

from py_regraph.greens import (
    GreensError,
    SpectralDecomposition,
    greens,
    minor_resolvent,
    q_of,
    resolvent_residual,
    sc_residuals,
    schur_minor,
    spectral_weight,
    stieltjes_from_eigenvalues,
    ward_check,
)
from py_regraph.treeext import x_ell, y_ell

Z = 0.3 + 0.5j


def test_entries_invert_shifted_matrix(cubic60):
    gm = greens(cubic60, Z)
    expected = np.linalg.inv(cubic60.normalized_adjacency() - Z * np.eye(60))
    assert np.allclose(gm.entries, expected, atol=1e-10)
    assert np.allclose(gm.diagonal, np.diag(expected), atol=1e-10)
    assert gm.m == pytest.approx(np.trace(expected) / 60)
    assert resolvent_residual(cubic60, gm) < 1e-10


def test_petersen_trace_closed_form(petersen):
    s = math.sqrt(2)
    expected = (1 / (3 / s - Z) + 5 / (1 / s - Z) + 4 / (-2 / s - Z)) / 10
    assert greens(petersen, Z).m == pytest.approx(expected, abs=1e-12)


def test_pair_entries_and_blocks(cubic60):
    gm = greens(cubic60, Z)
    rows, cols = [0, 5, 7], [3, 5, 59]
    assert np.allclose(gm.pair_entries(rows, cols), gm.entries[rows, cols])
    assert np.allclose(gm.block(rows, cols), gm.entries[np.ix_(rows, cols)])


def test_decomposition_is_reused(cubic60):
    decomposition = SpectralDecomposition.of_graph(cubic60)
    a = greens(cubic60, Z, decomposition)
    b = greens(cubic60, 1.1 + 0.2j, decomposition)
    assert a.decomposition is b.decomposition
    with pytest.raises(GreensError):
        greens(cubic60, Z, SpectralDecomposition.of(np.eye(3)))


def test_decomposition_rejects_non_finite():
    with pytest.raises(GreensError):
        SpectralDecomposition.of(np.full((2, 2), np.nan))


@pytest.mark.parametrize("z", [Z, -1.9 + 0.01j, 2.3 + 0.2j])
def test_ward_identity(cubic60, z):
    assert ward_check(greens(cubic60, z)).worst < 1e-8


def test_schur_minor_matches_direct_inversion(cubic60):
    gm = greens(cubic60, Z)
    s = (0, 1, 2, 17)
    minor = schur_minor(gm, s)
    direct = minor_resolvent(cubic60, s, Z)
    assert minor.vertices == direct.vertices
    assert np.max(np.abs(minor.entries - direct.entries)) < 1e-9
    assert minor.entry(3, 4) == pytest.approx(direct.entry(3, 4))


def test_schur_minor_limits(cubic60):
    gm = greens(cubic60, Z)
    assert np.allclose(schur_minor(gm, ()).entries, gm.entries)
    with pytest.raises(GreensError):
        schur_minor(gm, range(17))


def test_q_by_rank_one_updates(petersen):
    gm = greens(petersen, Z)
    per_edge = [
        minor_resolvent(petersen, (i,), Z).entry(j, j)
        for i, j in petersen.oriented_edges()
    ]
    assert abs(q_of(gm, petersen) - np.mean(per_edge)) < 1e-10


def test_sc_residuals(cubic60):
    gm = greens(cubic60, Z)
    res = sc_residuals(cubic60, gm, ell=2, c=0.3)
    assert res.q == q_of(gm, cubic60)
    assert res.y_of_q == y_ell(res.q, Z, 2)
    assert res.x_of_q == x_ell(res.q, Z, 2, 3)
    assert res.q_minus_y == res.q - res.y_of_q
    assert res.m_minus_x == gm.m - res.x_of_q
    assert res.phi == pytest.approx(60**0.3 * spectral_weight(gm))


def test_stieltjes_from_eigenvalues(cubic60):
    lam = np.linalg.eigvalsh(cubic60.normalized_adjacency())
    assert stieltjes_from_eigenvalues(lam, Z) == pytest.approx(greens(cubic60, Z).m)

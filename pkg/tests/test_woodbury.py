import math

import numpy as np
import pytest

from py_regraph.greens import greens
from py_regraph.resampling import apply_switch, sample_resampling_data
from py_regraph.woodbury import (
    direct_delta,
    resolvent_identity_residual,
    support_graphs,
    switch_delta,
    woodbury_delta,
    xi_matrix,
)

BIG_R = 4


@pytest.fixture(scope="module")
def switch(cubic200):
    rng = np.random.default_rng(21)
    for _ in range(200):
        rd = sample_resampling_data(cubic200, int(rng.integers(200)), 1, rng)
        result = apply_switch(cubic200, rd, BIG_R)
        if result.applied:
            return result
    pytest.fail("no admissible switch in 200 draws")


def test_xi_matrix_shape():
    xi = xi_matrix(6, 3, 0, 1, 2, 3).toarray()
    s = 1 / math.sqrt(2)
    assert np.allclose(xi, xi.T)
    assert np.count_nonzero(xi) == 8
    assert xi[0, 1] == pytest.approx(s) and xi[0, 3] == pytest.approx(-s)
    assert xi.sum() == pytest.approx(0.0)


def test_xi_sum_is_the_adjacency_change(cubic200, switch):
    delta = switch_delta(cubic200, switch, 0.3 + 0.5j)
    dh = switch.graph.normalized_adjacency() - cubic200.normalized_adjacency()
    assert np.max(np.abs(delta.xi_sum(200) + dh)) < 1e-12
    assert len(delta.xi_list) == len(switch.applied)


def test_support_graphs(cubic200, switch):
    before, after = support_graphs(cubic200, switch)
    assert before.vertices == after.vertices
    assert before.root == switch.source.center
    assert len(before.edges) == len(after.edges)
    for u, v in switch.added:
        assert (u, v) in after.edges


@pytest.mark.parametrize("z", [0.3 + 0.5j, 1.5 + 0.1j])
def test_resolvent_identity(cubic200, switch, z):
    assert resolvent_identity_residual(cubic200, switch.graph, z) < 1e-9


@pytest.mark.parametrize("z", [0.3 + 0.5j, -0.8 + 0.2j])
def test_closed_form_is_exact(cubic200, switch, z):
    expansion = woodbury_delta(greens(cubic200, z), cubic200, switch, k_max=3)
    assert not expansion.fell_back
    assert expansion.closed_form_error < 1e-8
    assert len(expansion.errors) == len(expansion.partial_sums) == 4
    direct = direct_delta(cubic200, switch.graph, z)
    assert np.allclose(expansion.direct, direct, atol=1e-12)


def test_series_converges_far_from_the_spectrum(cubic200, switch):
    expansion = woodbury_delta(greens(cubic200, 0.5 + 3.0j), cubic200, switch, k_max=4)
    assert expansion.converged
    assert expansion.spectral_radius < 1.0
    assert all(b < a for a, b in zip(expansion.errors, expansion.errors[1:]))
    assert all(0 < r < 1 for r in expansion.decay_ratios)
    assert expansion.relative_errors[-1] < 0.1


def test_no_switch_gives_zero_update(petersen):
    rd = sample_resampling_data(petersen, 0, 1, 0)
    result = apply_switch(petersen, rd, BIG_R)
    expansion = woodbury_delta(greens(petersen, 0.3 + 0.5j), petersen, result)
    assert expansion.errors == (0.0,) * 5
    assert expansion.scale == 0.0
    assert expansion.relative_errors == (0.0,) * 5

import math

import numpy as np
import pytest
from scipy.integrate import quad

from py_regraph.km import (
    LawError,
    as_z,
    classical_level,
    classical_locations,
    error_params,
    in_spectral_domain,
    km_cdf,
    km_tail,
    m_d,
    m_sc,
    rho_d,
    stability_factors,
)
from py_regraph.models import LawParams, SpectralPoint

POINTS = [0.3 + 0.5j, -1.2 + 0.1j, 2.4 + 0.05j, 0.0 + 3.0j]


@pytest.mark.parametrize("d", [3, 4, 7])
def test_density_is_normalized(d):
    total, _ = quad(lambda x: rho_d(d, x), -2.0, 2.0, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)
    assert km_cdf(d, 0.0) == pytest.approx(0.5, abs=1e-10)


def test_density_vanishes_outside_and_keeps_shape():
    values = rho_d(3, np.array([-3.0, -2.0, 0.0, 2.0, 2.5]))
    assert values.shape == (5,)
    assert values[0] == values[1] == values[3] == values[4] == 0.0
    assert values[2] > 0
    assert isinstance(rho_d(3, 0.1), float)


def test_tail_limits():
    assert km_tail(3, 2.5) == 0.0
    assert km_tail(3, -2.5) == 1.0
    assert km_tail(3, 1.0) + km_cdf(3, 1.0) == pytest.approx(1.0)


@pytest.mark.parametrize("z", POINTS)
def test_semicircle_transform_fixed_point(z):
    m = m_sc(z)
    assert abs(m * m + z * m + 1.0) < 1e-13
    assert m.imag > 0
    assert abs(m) < 1.0


@pytest.mark.parametrize("z", POINTS[:2])
@pytest.mark.parametrize("d", [3, 5])
def test_kesten_mckay_transform_matches_density(z, d):
    real, _ = quad(lambda x: (rho_d(d, x) / (x - z)).real, -2.0, 2.0, limit=400)
    imag, _ = quad(lambda x: (rho_d(d, x) / (x - z)).imag, -2.0, 2.0, limit=400)
    assert abs(m_d(z, d) - complex(real, imag)) < 1e-6


def test_as_z_rejects_real_axis():
    with pytest.raises(LawError):
        as_z(0.5)
    assert as_z(SpectralPoint(E=0.5, eta=0.1)) == 0.5 + 0.1j


def test_degree_must_be_three_or_more():
    with pytest.raises(LawError):
        m_d(1j, 2)
    with pytest.raises(LawError):
        rho_d(2, 0.0)


def test_stability_factors_positive():
    outer, inner = stability_factors(0.3 + 0.5j, 3)
    assert outer > 0 and inner > 0


def test_classical_locations_small_case():
    gamma = classical_locations(10, 3)
    assert gamma.shape == (9,)
    assert np.all(np.diff(gamma) < 0)
    assert np.all(np.abs(gamma) < 2)
    assert np.allclose(gamma, -gamma[::-1], atol=1e-9)
    assert gamma[4] == pytest.approx(0.0, abs=1e-9)


def test_classical_locations_hit_their_levels():
    n, d = 25, 4
    for k, g in enumerate(classical_locations(n, d)):
        assert km_tail(d, g) == pytest.approx(classical_level(k + 2, n), abs=1e-9)


def test_classical_locations_need_three_vertices():
    with pytest.raises(LawError):
        classical_locations(2, 3)


def test_spectral_domain():
    params = LawParams(d=3, a=0.5, c=0.4, ell=1)
    assert in_spectral_domain(0.5 + 0.5j, 1000, params)
    assert not in_spectral_domain(0.5 + 3.0j, 1000, params)
    assert not in_spectral_domain(0.5 + 0.001j, 1000, params)
    assert not in_spectral_domain(2.6 + 0.5j, 1000, params)


def test_error_params():
    errors = error_params(0.5 + 0.5j, 0.5, 1000, 3)
    assert errors.log_power == 1.0
    assert errors.eps_prime > 0 and errors.eps > 0
    assert errors.eps_prime_asymptotic > errors.eps_prime
    assert errors.eps == pytest.approx(
        errors.eps_prime / math.sqrt(1.5 + 0.5 + errors.eps_prime)
    )
    with pytest.raises(LawError):
        error_params(0.5 + 0.5j, 1.0, 1000, 3)

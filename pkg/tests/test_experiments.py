import math

import numpy as np
import pytest

from py_regraph.config import DEFAULT_C
from py_regraph.experiments import (
    ExperimentError,
    edge_fits_from_rows,
    edge_fluctuation_scan,
    edge_window,
    edge_window_test,
    esd_vs_km,
    fit_loglog,
    moment_ratio_fit,
    rigidity_profile,
    rigidity_rows,
    rigidity_scan,
    sample_spectra,
    sc_moment_estimate,
    scaling_fit,
    spectrum,
    stieltjes_concentration_scan,
    stieltjes_envelope,
    switch_trials,
)
from py_regraph.graph import census_radius, sample_uniform
from py_regraph.greens import greens, sc_residuals


def test_spectrum_of_petersen(petersen):
    rec = spectrum(petersen)
    assert rec.eigenvalues[0] == pytest.approx(3 / math.sqrt(2))
    assert np.allclose(rec.eigenvalues[1:6], 1 / math.sqrt(2))
    assert np.allclose(rec.eigenvalues[6:], -math.sqrt(2))


def test_row_seed_rebuilds_the_sample():
    records = sample_spectra(30, 3, 3, seed=4)
    assert len({r.seed for r in records}) == 3
    for rec in records:
        again = spectrum(sample_uniform(30, 3, rec.seed))
        assert np.allclose(again.eigenvalues, rec.eigenvalues)


def test_sample_spectra_independent_of_workers():
    one = sample_spectra(20, 3, 4, seed=8)
    two = sample_spectra(20, 3, 4, seed=8, workers=2)
    assert [r.seed for r in one] == [r.seed for r in two]
    assert all(np.array_equal(a.eigenvalues, b.eigenvalues) for a, b in zip(one, two))


def test_rigidity_profile_and_rows():
    (rec,) = sample_spectra(40, 3, 1, seed=2)
    profile = rigidity_profile(rec)
    assert list(profile.indices) == list(range(2, 41))
    assert profile.max_r == profile.r.max()
    assert profile.r[profile.argmax_i - 2] == profile.max_r
    rows = rigidity_rows(rec, profile)
    assert len(rows) == 39
    assert rows[0]["i"] == 2 and rows[0]["seed"] == rec.seed
    assert 0.0 <= esd_vs_km(rec) <= 1.0


def test_fit_loglog_recovers_exponent():
    sizes = [100, 200, 400, 800]
    slope, stderr, intercept = fit_loglog(sizes, [3.0 * n**-0.5 for n in sizes])
    assert slope == pytest.approx(-0.5)
    assert stderr == pytest.approx(0.0, abs=1e-9)
    assert intercept == pytest.approx(math.log(3.0))


def test_fit_loglog_preconditions():
    with pytest.raises(ExperimentError, match="Insufficient"):
        fit_loglog([100], [1.0])
    with pytest.raises(ExperimentError, match="positive"):
        fit_loglog([100, 200], [1.0, 0.0])
    with pytest.raises(ExperimentError):
        scaling_fit([100, 200], [np.ones(2), np.ones(2)], use="mean")


def test_scans_need_two_ascending_sizes():
    with pytest.raises(ExperimentError, match="Insufficient"):
        rigidity_scan([20], 2, 3, 0)
    with pytest.raises(ExperimentError, match="ascending"):
        edge_fluctuation_scan([40, 20], 2, 3, 0)
    with pytest.raises(ExperimentError):
        edge_fluctuation_scan([20, 40], 1, 3, 0)


def test_rigidity_scan_small():
    scan = rigidity_scan([20, 40], 2, 3, 1)
    assert scan.fit.sizes == (20, 40)
    assert [len(m) for m in scan.max_r] == [2, 2]
    assert len(scan.rows) == 2 * 19 + 2 * 39


def test_edge_scan_rows_rebuild_the_fit():
    scan = edge_fluctuation_scan([20, 40], 3, 3, 6)
    assert len(scan.rows) == 6
    assert {r["n"] for r in scan.rows} == {20, 40}
    rebuilt = edge_fits_from_rows(scan.rows)
    assert rebuilt.lambda2.loglog_slope == pytest.approx(scan.lambda2.loglog_slope)
    assert rebuilt.lambda_n.loglog_slope == pytest.approx(scan.lambda_n.loglog_slope)
    assert set(scan.as_dict()) == {"lambda2", "lambdaN", "centering"}


def test_stieltjes_envelope():
    assert stieltjes_envelope(0.5 + 0.1j, 100) == pytest.approx(0.1)
    outside = stieltjes_envelope(2.5 + 0.1j, 100)
    expected = (1 / (100 * math.sqrt(0.1)) + 10.0**-2) / math.sqrt(0.6)
    assert outside == pytest.approx(expected)


def test_stieltjes_scan():
    scan = stieltjes_concentration_scan(200, 3, [0.5 + 0.5j, -1.0 + 0.3j], 4, 0)
    assert len(scan.rows) == 8
    for point in scan.points:
        assert point.ratio == pytest.approx(point.quantile / point.envelope)
        assert point.errors.eps_prime > 0
    assert [p["E"] for p in scan.as_dict()["points"]] == [0.5, -1.0]


def test_stieltjes_scan_rejects_points_outside_the_domain():
    with pytest.raises(ExperimentError, match="outside the domain"):
        stieltjes_concentration_scan(200, 3, [0.5 + 0.001j], 2, 0)


def test_edge_window():
    kappa, eta = edge_window(1000)
    assert kappa == pytest.approx(1000 ** (-2 / 3 + 0.2))
    assert 0 < eta < kappa
    report = edge_window_test(60, 3, 3, 0)
    assert report.samples == 3
    assert 0 <= report.hits <= 3
    assert report.clear_fraction == 1 - report.hits / 3
    assert report.lower < 2 + edge_window(60)[0] < report.upper


def test_moment_estimate_with_a_fixed_graph(petersen):
    z = 0.5 + 1.5j
    report = sc_moment_estimate(10, 3, 1, z, 1, 3, 0, graph=petersen)
    res = sc_residuals(petersen, greens(petersen, z), 1)
    assert report.samples == 3
    assert report.q_minus_y == pytest.approx(abs(res.q_minus_y) ** 2)
    assert report.m_minus_x == pytest.approx(abs(res.m_minus_x) ** 2)
    assert report.comparator > 0


def test_moment_estimate_preconditions(petersen):
    with pytest.raises(ExperimentError, match="order"):
        sc_moment_estimate(10, 3, 1, 0.5 + 1.5j, 3, 2, 0)
    with pytest.raises(ExperimentError, match="Fixed graph"):
        sc_moment_estimate(12, 3, 1, 0.5 + 1.5j, 1, 2, 0, graph=petersen)


def test_moment_ratio_fit():
    reports = [sc_moment_estimate(n, 3, 1, 0.5 + 1.5j, 1, 2, 3) for n in (40, 20)]
    slope, stderr, _ = moment_ratio_fit(reports)
    assert math.isfinite(slope) and stderr == 0.0


def test_switch_trials():
    audit = switch_trials(120, 3, 1, 6, 0, big_r=4, z_points=[0.5 + 1.0j], k_max=3)
    assert len(audit.trials) == 6
    assert audit.boundary_edges == sum(t.mu for t in audit.trials)
    assert audit.admissible <= audit.boundary_edges
    summary = audit.as_dict()
    assert summary["trials"] == 6
    assert summary["big_r"] == 4
    assert summary["simple_outputs"] == audit.simple_outputs == 6
    (point,) = summary["woodbury"]
    assert [row["K"] for row in point["decay"]] == [0, 1, 2, 3]
    assert point["identity_residual_max"] < 1e-9
    for trial in audit.trials:
        assert trial.applied + trial.collisions <= trial.admissible
        assert len(trial.errors[0]) == 4
        if trial.comparable and not trial.collisions:
            assert trial.recovered
    again = switch_trials(120, 3, 1, 6, 0, big_r=4, k_max=3)
    assert [t.seed for t in again.trials] == [t.seed for t in audit.trials]
    assert [t.applied for t in again.trials] == [t.applied for t in audit.trials]


@pytest.mark.slow
def test_switchings_reverse_at_scale():
    audit = switch_trials(500, 3, 1, 1000, 0)
    assert all(t.simple for t in audit.trials)
    assert audit.simple_outputs == 1000
    assert audit.reversal_rate >= 0.95


def test_switch_trials_default_to_the_census_radius():
    audit = switch_trials(400, 3, 1, 1, 0)
    assert audit.big_r == census_radius(400, 3, DEFAULT_C)


def test_switch_trials_preconditions():
    with pytest.raises(ExperimentError):
        switch_trials(60, 3, 1, 0, 0)
    with pytest.raises(ExperimentError):
        switch_trials(60, 3, 1, 2, 0, k_max=0)

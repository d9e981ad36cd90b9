import numpy as np
import pytest

from py_regraph.exchange import (
    PARTNER_SAMPLERS,
    STATISTICS,
    ExchangeError,
    biased_partners,
    block_edges,
    constant,
    exchangeability_test,
    lambda2,
    m_at_i,
    symmetry_pvalues,
    triangles,
)
from py_regraph.graph import complete_graph


def test_statistics_on_fixtures(petersen):
    assert triangles(petersen) == 0
    assert triangles(complete_graph(4)) == 4
    assert block_edges(petersen) == 1
    assert constant(petersen) == 0.0
    assert lambda2(petersen) == pytest.approx(1 / np.sqrt(2))
    assert m_at_i(petersen) > 0


def test_registries():
    assert set(STATISTICS) == {"lambda2", "triangles", "m_i", "block_edges", "constant"}
    assert set(PARTNER_SAMPLERS) == {"uniform", "biased"}


def test_biased_partners_stay_in_the_block(cubic200):
    rng = np.random.default_rng(0)
    picks = biased_partners(cubic200, cubic200.oriented_edges(), 50, rng)
    assert len(picks) == 50
    assert all(max(e) < 50 for e in picks)


def test_symmetry_pvalues_degenerate():
    values = np.arange(5.0)
    assert symmetry_pvalues(values, values) == (0, 0, 1.0, 1.0, 1.0)


def test_symmetry_pvalues_detect_a_shift():
    before = np.arange(30.0) + 1.0
    positive, negative, sign_p, wilcoxon_p, _ = symmetry_pvalues(before, before - 1.0)
    assert (positive, negative) == (30, 0)
    assert sign_p < 1e-6
    assert wilcoxon_p < 1e-4


def test_unknown_names_are_rejected():
    with pytest.raises(ExchangeError, match="statistic"):
        exchangeability_test("girth", 20, 3, 1, 2, 0)
    with pytest.raises(ExchangeError, match="sampler"):
        exchangeability_test("constant", 20, 3, 1, 2, 0, sampler="greedy")


def test_constant_statistic_has_no_signal():
    report = exchangeability_test("constant", 40, 3, 1, 5, 1, big_r=4)
    assert report.trials == 5
    assert (report.positive, report.negative) == (0, 0)
    assert report.sign_p == 1.0
    assert report.as_dict()["statistic"] == "constant"


def test_exchangeability_is_reproducible():
    a = exchangeability_test("triangles", 60, 3, 1, 6, 2, big_r=4)
    b = exchangeability_test("triangles", 60, 3, 1, 6, 2, big_r=4)
    assert a == b


@pytest.mark.slow
def test_uniform_partners_are_exchangeable():
    report = exchangeability_test("block_edges", 200, 3, 1, 300, 5, big_r=4)
    assert report.switched > 100
    assert report.sign_p > 1e-3


@pytest.mark.slow
def test_second_eigenvalue_is_exchangeable():
    report = exchangeability_test("lambda2", 200, 3, 1, 2000, 5)
    assert report.trials == 2000
    assert report.sign_p > 0.01


@pytest.mark.slow
def test_biased_partners_break_exchangeability():
    report = exchangeability_test(
        "block_edges", 200, 3, 1, 300, 5, big_r=4, sampler="biased"
    )
    assert report.positive > report.negative
    assert report.sign_p < 1e-3

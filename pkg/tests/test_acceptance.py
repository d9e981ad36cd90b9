from py_regraph.acceptance import (
    AcceptanceBands,
    AcceptanceReport,
    CheckStatus,
    evaluate,
    run_self_checks,
)


def _by_name(report):
    return {c.name: c.status for c in report.checks}


def test_empty_summary_passes():
    report = evaluate({})
    assert report.checks == []
    assert report.exit_code == 0


def test_verdicts():
    summary = {
        "rigidity": {"fit": {"loglog_slope": 0.05, "slope_stderr": 0.02}},
        "edge_scan": {"lambda2": {"loglog_slope": -0.67}, "lambdaN": None},
        "stieltjes": {"points": [{"E": 0.5, "eta": 0.1, "spread": None}]},
        "edge_window": {
            "runs": [
                {
                    "n": 500,
                    "samples": 200,
                    "clear_fraction": 0.995,
                    "lower": 2.1,
                    "upper": 2.2,
                }
            ]
        },
        "moments": {"fit": {"loglog_slope": 0.5}},
        "gamma": {"count": 9},
    }
    report = evaluate(summary)
    statuses = _by_name(report)
    assert statuses["rigidity_growth"] == CheckStatus.PASS
    assert statuses["edge_lambda2_slope"] == CheckStatus.PASS
    assert statuses["edge_lambdaN_slope"] == CheckStatus.WARN
    assert statuses["stieltjes_spread_E0.5_eta0.1"] == CheckStatus.WARN
    assert statuses["edge_window_n500"] == CheckStatus.PASS
    assert statuses["moment_ratio_slope"] == CheckStatus.FAIL
    assert report.exit_code == 1
    assert {d["criterion"] for d in report.as_dicts()} == {"7", "8", "9", "10"}


def _run(n, simple, rate, comparable=10):
    return {
        "n": n,
        "d": 3,
        "ell": 1,
        "trials": 10,
        "simple_outputs": simple,
        "reversal_comparable": comparable,
        "reversal_rate": rate,
    }


def _exchange(sampler, p):
    return {
        "n": 200,
        "statistic": "lambda2",
        "sampler": sampler,
        "trials": 2000,
        "sign_p": p,
    }


def _decay(n, monotone, ratio):
    return {
        "n": n,
        "E": 0.5,
        "eta": 1.0,
        "monotone_fraction": monotone,
        "median_decay_ratio": ratio,
    }


def test_resampling_verdicts():
    summary = {
        "resample": {
            "runs": [
                _run(100, 10, 1.0),
                _run(200, 9, 1.0),
                _run(300, 10, 0.9),
                _run(400, 10, float("nan"), comparable=0),
            ],
            "exchangeability": [
                _exchange("uniform", 0.4),
                _exchange("biased", 1e-5),
            ],
        },
        "woodbury": {
            "points": [
                _decay(100, 1.0, 0.2),
                _decay(200, 0.98, 0.2),
                _decay(300, 1.0, 0.6),
                _decay(400, float("nan"), float("nan")),
            ]
        },
    }
    statuses = _by_name(evaluate(summary))
    assert statuses["switch_reversal_n100_ell1"] == CheckStatus.PASS
    assert statuses["switch_reversal_n200_ell1"] == CheckStatus.FAIL
    assert statuses["switch_reversal_n300_ell1"] == CheckStatus.FAIL
    assert statuses["switch_reversal_n400_ell1"] == CheckStatus.WARN
    assert statuses["exchange_lambda2_uniform_n200"] == CheckStatus.PASS
    assert statuses["exchange_lambda2_biased_n200"] == CheckStatus.PASS
    assert statuses["woodbury_decay_n100_E0.5_eta1"] == CheckStatus.PASS
    assert statuses["woodbury_decay_n200_E0.5_eta1"] == CheckStatus.FAIL
    assert statuses["woodbury_decay_n300_E0.5_eta1"] == CheckStatus.FAIL
    assert statuses["woodbury_decay_n400_E0.5_eta1"] == CheckStatus.WARN


def test_exchangeability_verdicts_depend_on_the_sampler():
    summary = {
        "resample": {
            "runs": [],
            "exchangeability": [
                _exchange("uniform", 0.001),
                _exchange("biased", 0.3),
            ],
        }
    }
    report = evaluate(summary)
    assert set(_by_name(report).values()) == {CheckStatus.FAIL}
    assert {d["criterion"] for d in report.as_dicts()} == {"5"}


def test_bands_are_configurable():
    summary = {"moments": {"fit": {"loglog_slope": 0.5}}}
    report = evaluate(summary, AcceptanceBands(moment_slope_tol=1.0))
    assert report.exit_code == 0


def test_report_add():
    report = AcceptanceReport()
    report.add("1", "x", CheckStatus.WARN, "detail")
    assert report.as_dicts() == [
        {"criterion": "1", "name": "x", "status": "warn", "message": "detail"}
    ]
    assert report.exit_code == 0


def test_self_checks_hold():
    report = run_self_checks(seed=0)
    names = _by_name(report)
    expected = {"ward_identity", "msc_fixed_point", "schur_minor", "q_rank_one"}
    assert expected <= set(names)
    assert CheckStatus.FAIL not in names.values(), report.as_dicts()

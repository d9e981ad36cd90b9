import json

import pytest

from py_regraph.acceptance import AcceptanceReport, CheckStatus
from py_regraph.exchange import exchangeability_test
from py_regraph.experiments import edge_fluctuation_scan, rigidity_scan, switch_trials
from py_regraph.km import classical_locations
from py_regraph.records import RecordSchemaError, write_csv, write_json
from py_regraph.report import (
    PlotSeries,
    build_report,
    gnuplot_script,
    render_dat,
    summarize_rigidity,
)


def _gamma_csv(path):
    rows = [{"i": i, "gamma_i": g} for i, g in enumerate(classical_locations(10, 3), 2)]
    return write_csv(path, "gamma", rows, {"subcommand": "gamma"})


def test_empty_report():
    report = build_report([])
    assert report.sections == {}
    assert report.acceptance.exit_code == 0
    assert report.files == []


def test_gamma_section_and_artifacts(tmp_path):
    path = _gamma_csv(tmp_path / "gamma.csv")
    out = tmp_path / "report"
    report = build_report([path], out)
    assert report.sections["gamma"] == {"count": 9, "strictly_decreasing": True}
    names = sorted(p.name for p in out.iterdir())
    assert names == ["gamma.dat", "plots.gp", "summary.json"]
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["result"]["sections"]["gamma"]["count"] == 9
    assert "set output 'gamma.png'" in (out / "plots.gp").read_text(encoding="utf-8")


def test_edge_scan_section(tmp_path):
    scan = edge_fluctuation_scan([20, 40], 3, 3, 2)
    path = write_csv(tmp_path / "edge.csv", "edge_scan", scan.rows, {})
    report = build_report([path])
    section = report.sections["edge_scan"]
    assert section["sizes"] == [20, 40]
    slope = section["lambda2"]["loglog_slope"]
    assert slope == pytest.approx(scan.lambda2.loglog_slope)
    names = {c.name for c in report.acceptance.checks}
    assert {"edge_lambda2_slope", "edge_lambdaN_slope"} <= names


def test_json_rows_count_as_tables(tmp_path):
    scan = rigidity_scan([20, 40], 2, 3, 0)
    path = write_json(
        tmp_path / "rigidity.json",
        {"kind": "rigidity", "summary": {}, "rows": scan.rows},
        {},
    )
    report = build_report([path])
    assert report.sections["rigidity"]["sizes"] == [20, 40]
    assert report.sections["rigidity"]["fit"] is not None


def test_edge_window_documents(tmp_path):
    runs = [{"n": 100, "samples": 10, "hits": 1, "lower": 2.1, "upper": 2.2}]
    payload = {"kind": "edge_window", "runs": runs}
    path = write_json(tmp_path / "window.json", payload, {})
    report = build_report([path])
    (run,) = report.sections["edge_window"]["runs"]
    assert run["clear_fraction"] == pytest.approx(0.9)
    (check,) = report.acceptance.checks
    assert check.status == CheckStatus.FAIL


def _audit():
    return switch_trials(30, 3, 1, 6, 0, z_points=(0.5 + 1j,), k_max=3)


def test_resample_documents(tmp_path):
    audit = _audit()
    test = exchangeability_test("block_edges", 30, 3, 1, 6, 0, big_r=audit.big_r)
    payload = {
        "kind": "resample",
        **audit.as_dict(),
        "exchangeability": [test.as_dict()],
    }
    path = write_json(tmp_path / "resample.json", payload, {})
    out = tmp_path / "report"
    report = build_report([path], out)
    (run,) = report.sections["resample"]["runs"]
    assert run["trials"] == 6
    assert run["simple_outputs"] == 6
    (exchange,) = report.sections["resample"]["exchangeability"]
    assert exchange["n"] == 30
    assert exchange["sampler"] == "uniform"
    (point,) = report.sections["woodbury"]["points"]
    assert point["E"] == 0.5
    names = {c.name for c in report.acceptance.checks}
    assert names == {
        "switch_reversal_n30_ell1",
        "exchange_block_edges_uniform_n30",
        "woodbury_decay_n30_E0.5_eta1",
    }
    assert {c.criterion for c in report.acceptance.checks} == {"4", "5", "6"}
    assert (out / "woodbury_n30_E0.5_eta1.dat").exists()


def test_woodbury_documents(tmp_path):
    path = write_json(
        tmp_path / "woodbury.json", {"kind": "woodbury", **_audit().as_dict()}, {}
    )
    report = build_report([path])
    assert "resample" not in report.sections
    (point,) = report.sections["woodbury"]["points"]
    assert point["n"] == 30
    assert 0.0 <= point["monotone_fraction"] <= 1.0
    (series,) = report.series
    assert [k for k, _ in series.points] == [0.0, 1.0, 2.0, 3.0]
    (check,) = report.acceptance.checks
    assert check.criterion == "6"


def test_greens_documents_are_informational(tmp_path):
    point = {
        "z": 0.5 + 1j,
        "in_domain": True,
        "m": 0.1 + 0.2j,
        "m_d": 0.13 + 0.24j,
        "ward_dev": 1e-13,
        "residuals": {
            "q_minus_y": 0.03 + 0.04j,
            "m_minus_x": 0.0j,
            "phi": 0.0,
            "eps_prime": 0.1,
            "eps": 0.2,
            "log_power": 2.0,
        },
    }
    payload = {"kind": "greens", "n": 10, "d": 3, "points": [point]}
    path = write_json(tmp_path / "greens.json", payload, {})
    report = build_report([path])
    (entry,) = report.sections["greens"]["points"]
    assert (entry["E"], entry["eta"]) == (0.5, 1.0)
    assert entry["abs_m_minus_md"] == pytest.approx(0.05)
    assert entry["abs_q_minus_y"] == pytest.approx(0.05)
    assert entry["log_power"] == 2.0
    assert report.acceptance.checks == []


def test_unknown_inputs_are_rejected(tmp_path):
    path = write_json(tmp_path / "odd.json", {"kind": "spectrum"}, {})
    with pytest.raises(RecordSchemaError, match="unsupported"):
        build_report([path])
    bare = tmp_path / "bare.csv"
    bare.write_text("# config: {}\na,b\n", encoding="utf-8")
    with pytest.raises(RecordSchemaError):
        build_report([bare])


def test_extra_checks_are_appended():
    extra = AcceptanceReport()
    extra.add("1", "ward_identity", CheckStatus.PASS, "ok")
    report = build_report([], extra_checks=extra)
    assert [c.name for c in report.acceptance.checks] == ["ward_identity"]


def test_summarize_rigidity_groups_by_sample():
    rows = [
        {"n": "20", "seed": "1", "r_i": "0.5"},
        {"n": "20", "seed": "1", "r_i": "1.5"},
        {"n": "20", "seed": "2", "r_i": "0.5"},
        {"n": "40", "seed": "3", "r_i": "2.0"},
    ]
    section, (series,) = summarize_rigidity(rows)
    assert section["samples"] == [2, 1]
    assert section["median_max_r"] == [1.0, 2.0]
    assert section["max_r"] == 2.0
    assert series.points == ((20.0, 1.0), (40.0, 2.0))


def test_plot_files():
    series = PlotSeries("s", "T", "N", "y", ((1.0, 2.0), (3.0, 4.5)), loglog=True)
    assert render_dat(series) == "# N y\n1.0 2.0\n3.0 4.5\n"
    script = gnuplot_script([series])
    assert "set logscale xy" in script
    assert "plot 's.dat' using 1:2 with linespoints" in script

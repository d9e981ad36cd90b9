import json
import math

from typer.testing import CliRunner

from py_regraph.cli.app import app, dispatch
from py_regraph.graph import petersen_graph
from py_regraph.graphio import write_graph
from py_regraph.records import read_csv

runner = CliRunner()


def test_help_lists_subcommands():
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    for name in ("sample", "gamma", "edge-scan", "woodbury-check", "report"):
        assert name in result.output


def test_gamma_prints_csv(capsys):
    assert dispatch(["--quiet", "gamma", "--n", "10", "--d", "3"]) == 0
    out, err = capsys.readouterr()
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "i,gamma_i"
    values = [float(line.split(",")[1]) for line in lines[2:]]
    assert len(values) == 9
    assert all(b < a for a, b in zip(values, values[1:]))
    assert err == ""


def test_summary_line_goes_to_stderr(capsys):
    assert dispatch(["gamma", "--n", "10", "--d", "3"]) == 0
    _, err = capsys.readouterr()
    assert "9 classical locations" in err


def test_parity_is_a_usage_error(capsys):
    assert dispatch(["sample", "--n", "5", "--d", "3"]) == 1
    _, err = capsys.readouterr()
    assert "n*d must be even" in err


def test_unknown_option_exits_one(capsys):
    assert dispatch(["gamma", "--bogus"]) == 1


def test_edge_scan_is_reproducible_across_workers(tmp_path, capsys):
    base = ["edge-scan", "--sizes", "20,40", "--d", "3", "--samples", "3"]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert dispatch(["-q", *base, "--seed", "4", "--output", str(first)]) == 0
    args = ["-q", "--workers", "2", *base, "--seed", "4", "--output", str(second)]
    assert dispatch(args) == 0
    assert first.read_bytes() == second.read_bytes()
    config, rows = read_csv(first, "edge_scan")
    assert config["seed"] == 4
    assert "workers" not in config
    assert len(rows) == 6


def test_spectrum_json(capsys):
    args = ["-q", "--output-format", "json", "spectrum", "--n", "20", "--d", "3"]
    assert dispatch(args) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["kind"] == "spectrum"
    assert math.isclose(document["lambda1"], 3 / math.sqrt(2), rel_tol=1e-9)
    assert len(document["eigenvalues"]) == 20


def test_greens_on_a_graph_file(tmp_path, capsys):
    path = write_graph(petersen_graph(), tmp_path / "petersen.txt")
    args = [
        "-q",
        "--output-format",
        "json",
        "greens",
        "--graph",
        str(path),
        "--n",
        "10",
        "--d",
        "3",
        "--z",
        "0.5+1j",
    ]
    assert dispatch(args) == 0
    document = json.loads(capsys.readouterr().out)
    (point,) = document["points"]
    assert point["z"] == {"re": 0.5, "im": 1.0}
    assert point["ward_dev"] < 1e-8


def test_greens_rejects_a_mismatched_graph(tmp_path, capsys):
    path = write_graph(petersen_graph(), tmp_path / "petersen.txt")
    args = ["greens", "--graph", str(path), "--n", "12", "--z", "0.5+1j"]
    assert dispatch(args) == 1


def test_report_without_inputs(capsys):
    assert dispatch(["-q", "report"]) == 0
    assert dispatch(["-q", "report", "--strict"]) == 0


def test_report_strict_fails_on_a_failed_check(tmp_path, capsys):
    window = tmp_path / "window.json"
    window.write_text(
        json.dumps(
            {
                "config": {},
                "result": {
                    "kind": "edge_window",
                    "runs": [
                        {"n": 100, "samples": 10, "hits": 5, "lower": 2.1, "upper": 2.2}
                    ],
                },
            }
        ),
        encoding="utf-8",
    )
    assert dispatch(["-q", "report", str(window)]) == 0
    capsys.readouterr()
    args = ["-q", "--output-format", "json", "report", "--strict", str(window)]
    assert dispatch(args) == 1
    (check,) = json.loads(capsys.readouterr().out)["acceptance"]
    assert check["name"] == "edge_window_n100"


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "regraph.env"
    config.write_text("n=12\nd=4\n", encoding="utf-8")
    assert dispatch(["-q", "--config", str(config), "gamma"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 + 11
    assert json.loads(lines[0].removeprefix("# config: "))["d"] == 4


def test_missing_config_file(tmp_path, capsys):
    assert dispatch(["--config", str(tmp_path / "absent.env"), "gamma"]) == 1
    assert "Config file not found" in capsys.readouterr().err


def test_greens_records_the_log_power(tmp_path, capsys):
    config = tmp_path / "regraph.env"
    config.write_text("log_power=2.5\n", encoding="utf-8")
    args = ["-q", "--config", str(config), "--output-format", "json", "greens"]
    assert dispatch([*args, "--n", "20", "--d", "3", "--z", "0.5+1j"]) == 0
    (point,) = json.loads(capsys.readouterr().out)["points"]
    assert point["residuals"]["log_power"] == 2.5


def test_report_reads_its_own_documents(tmp_path, capsys):
    resample, greens = tmp_path / "resample.json", tmp_path / "greens.json"
    args = ["-q", "resample", "--n", "30", "--d", "3", "--trials", "4"]
    extra = ["--statistic", "triangles", "--z", "0.5+1j", "--k-max", "2"]
    assert dispatch([*args, *extra, "-o", str(resample)]) == 0
    args = ["-q", "greens", "--n", "20", "--d", "3", "--z", "0.5+1j"]
    assert dispatch([*args, "-o", str(greens)]) == 0
    capsys.readouterr()
    args = ["-q", "--output-format", "json", "report", str(resample), str(greens)]
    assert dispatch(args) == 0
    document = json.loads(capsys.readouterr().out)
    assert {"resample", "woodbury", "greens"} <= set(document["sections"])
    criteria = {check["criterion"] for check in document["acceptance"]}
    assert criteria == {"4", "5", "6"}

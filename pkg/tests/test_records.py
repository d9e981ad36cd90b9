import json

import numpy as np
import pytest

from py_regraph.records import (
    CONFIG_PREFIX,
    RecordSchemaError,
    atomic_write_text,
    detect_schema,
    format_cell,
    read_csv,
    read_json,
    render_csv,
    schema_header,
    to_jsonable,
    write_csv,
    write_json,
)

CONFIG = {"subcommand": "gamma", "n": 10, "seed": 0}


def test_render_csv_layout():
    text = render_csv("gamma", [{"i": 2, "gamma_i": 0.5}, (3, 0.25)], CONFIG)
    lines = text.splitlines()
    assert lines[0].startswith(CONFIG_PREFIX)
    assert json.loads(lines[0][len(CONFIG_PREFIX):]) == CONFIG
    assert lines[1:] == ["i,gamma_i", "2,0.5", "3,0.25"]


def test_floats_use_repr():
    value = 0.1 + 0.2
    assert format_cell(value) == repr(value)
    assert float(format_cell(np.float64(value))) == value
    assert format_cell(None) == ""
    assert format_cell(np.int64(7)) == "7"


def test_csv_round_trip(tmp_path):
    rows = [(100, 3, 42, 2.01, -2.02)]
    path = write_csv(tmp_path / "out.csv", "edge_scan", rows, CONFIG)
    assert detect_schema(path) == "edge_scan"
    config, rows = read_csv(path, "edge_scan")
    assert config == CONFIG
    assert rows == [
        {"n": "100", "d": "3", "seed": "42", "lambda2": "2.01", "lambdaN": "-2.02"}
    ]


def test_schema_errors(tmp_path):
    with pytest.raises(RecordSchemaError, match="Unknown schema"):
        schema_header("spectra")
    with pytest.raises(RecordSchemaError):
        render_csv("gamma", [(1, 2, 3)])
    with pytest.raises(RecordSchemaError, match="lacks"):
        render_csv("gamma", [{"i": 2}])
    bare = tmp_path / "bare.csv"
    bare.write_text("i,gamma_i\n2,0.5\n", encoding="utf-8")
    with pytest.raises(RecordSchemaError, match="provenance"):
        read_csv(bare, "gamma")
    with pytest.raises(RecordSchemaError):
        detect_schema(bare)
    path = write_csv(tmp_path / "g.csv", "gamma", [], CONFIG)
    with pytest.raises(RecordSchemaError, match="does not match"):
        read_csv(path, "rigidity")


def test_to_jsonable():
    data = {"z": 1 + 2j, "a": np.arange(2), "b": np.bool_(True), 3: (np.float32(0.5),)}
    assert to_jsonable(data) == {
        "z": {"re": 1.0, "im": 2.0},
        "a": [0, 1],
        "b": True,
        "3": [0.5],
    }


def test_atomic_write_leaves_no_temporaries(tmp_path):
    target = tmp_path / "nested" / "file.txt"
    atomic_write_text(target, "first\n")
    atomic_write_text(target, "second\n")
    assert target.read_text(encoding="utf-8") == "second\n"
    assert [p.name for p in target.parent.iterdir()] == ["file.txt"]


def test_json_documents(tmp_path):
    path = write_json(tmp_path / "r.json", {"kind": "moments", "m": 0.5 + 0.1j}, CONFIG)
    doc = read_json(path)
    assert doc["config"] == CONFIG
    assert doc["result"] == {"kind": "moments", "m": {"re": 0.5, "im": 0.1}}
    stray = tmp_path / "stray.json"
    stray.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(RecordSchemaError):
        read_json(stray)

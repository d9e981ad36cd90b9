import pytest

from py_regraph.settings import Settings, SettingsError, load_settings


def test_defaults():
    assert load_settings(environ={}) == Settings()


def test_environment_over_defaults():
    environ = {"REGRAPH_N": "500", "REGRAPH_C": "0.3", "OTHER": "x"}
    settings = load_settings(environ=environ)
    assert settings.n == 500
    assert settings.c == 0.3


def test_file_over_environment(tmp_path):
    path = tmp_path / "regraph.conf"
    path.write_text("n=2000\nOMEGA-D=2\n# comment\nformat=json\n", encoding="utf-8")
    settings = load_settings(path, environ={"REGRAPH_N": "500", "REGRAPH_D": "4"})
    assert settings.n == 2000
    assert settings.omega_d == 2
    assert settings.format == "json"
    assert settings.d == 4


def test_overrides_win_and_none_falls_through(tmp_path):
    path = tmp_path / "regraph.conf"
    path.write_text("workers=2\nseed=9\n", encoding="utf-8")
    settings = load_settings(path, overrides={"workers": 4, "seed": None}, environ={})
    assert settings.workers == 4
    assert settings.seed == 9


def test_errors(tmp_path):
    with pytest.raises(SettingsError, match="not found"):
        load_settings(tmp_path / "missing.conf", environ={})
    bad_key = tmp_path / "bad_key.conf"
    bad_key.write_text("colour=red\n", encoding="utf-8")
    with pytest.raises(SettingsError, match="Unknown setting"):
        load_settings(bad_key, environ={})
    with pytest.raises(SettingsError, match="Invalid value"):
        load_settings(environ={"REGRAPH_SAMPLES": "many"})

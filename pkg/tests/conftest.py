"""Shared fixtures and the opt-in switch for slow Monte-Carlo tests."""

import os

import pytest

from py_regraph.graph import petersen_graph, sample_uniform


def pytest_collection_modifyitems(config, items):
    if os.environ.get("REGRAPH_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set REGRAPH_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    """Keep user REGRAPH_* defaults and terminal colors out of every test."""
    for key in list(os.environ):
        if key.startswith("REGRAPH_") and key != "REGRAPH_RUN_SLOW":
            monkeypatch.delenv(key)
    monkeypatch.setenv("NO_COLOR", "1")


@pytest.fixture
def petersen():
    return petersen_graph()


@pytest.fixture(scope="session")
def cubic60():
    return sample_uniform(60, 3, 7)


@pytest.fixture(scope="session")
def cubic200():
    return sample_uniform(200, 3, 11)

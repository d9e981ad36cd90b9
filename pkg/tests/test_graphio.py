import pytest

from py_regraph.graph import sample_uniform
from py_regraph.graphio import GraphFormatError, dumps, loads, read_graph, write_graph


def test_dumps_canonical_layout(petersen):
    text = dumps(petersen)
    lines = text.splitlines()
    assert lines[0] == "10 3"
    assert lines[1:] == [f"{u} {v}" for u, v in sorted(petersen.edges)]
    assert text.endswith("\n")


def test_loads_inverts_dumps(petersen):
    assert loads(dumps(petersen)).edges == petersen.edges


def test_file_helpers(tmp_path):
    g = sample_uniform(30, 4, 5)
    path = write_graph(g, tmp_path / "g.txt")
    assert read_graph(path).edges == g.edges
    assert [p.name for p in tmp_path.iterdir()] == ["g.txt"]


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t[:-1],
        lambda t: t.replace("0 1\n", "1 0\n", 1),
        lambda t: t.replace("0 1\n", "0  1\n", 1),
        lambda t: t.replace("0 1\n", "00 1\n", 1),
        lambda t: t.replace("10 3\n", "10 3 \n", 1),
    ],
)
def test_loads_rejects_non_canonical(petersen, mutate):
    with pytest.raises(GraphFormatError):
        loads(mutate(dumps(petersen)))


def test_loads_rejects_non_regular(petersen):
    text = dumps(petersen)
    truncated = "\n".join(text.splitlines()[:-1]) + "\n"
    with pytest.raises(GraphFormatError, match="regular"):
        loads(truncated)

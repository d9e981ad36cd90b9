import math

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher
from scipy.stats import chisquare

from py_regraph.graph import sample_uniform

SAMPLES = 10**5


def _automorphisms(h: nx.Graph) -> int:
    return sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter())


@pytest.mark.slow
def test_cubic_graphs_on_eight_vertices_are_uniform():
    classes: list = []
    counts: list = []
    for seed in range(SAMPLES):
        h = nx.Graph(sample_uniform(8, 3, seed).sorted_edges())
        for index, rep in enumerate(classes):
            if nx.is_isomorphic(h, rep):
                counts[index] += 1
                break
        else:
            classes.append(h)
            counts.append(1)

    labeled = [math.factorial(8) // _automorphisms(rep) for rep in classes]
    assert len(classes) == 6
    assert sum(labeled) == 19355
    expected = [SAMPLES * k / sum(labeled) for k in labeled]
    _, p_value = chisquare(counts, expected)
    assert p_value > 1e-3

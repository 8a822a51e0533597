import numpy as np
import pytest

from graphlim.graphons import Graph, StepGraphon


def philox(seed):
    return np.random.Generator(np.random.Philox(seed))


def random_step_graphon(seed, m, signed=False):
    rng = philox(seed)
    raw = rng.random(m) + 0.2
    widths = raw / raw.sum()
    vals = rng.random((m, m))
    vals = 0.5 * (vals + vals.T)
    if signed:
        vals = 2.0 * vals - 1.0
    return StepGraphon(widths, vals)


def random_graph(seed, n, p=0.5):
    rng = philox(seed)
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


@pytest.fixture
def rng():
    return philox(0)

import numpy as np
import pytest

from treepcg import SpanningTree


def random_tree(n, rng, weights="uniform"):
    """Random attachment tree: parent[i] uniform in [0, i-1]."""
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    if n > 1:
        parent[1:] = rng.integers(0, np.arange(1, n))
    if weights == "unit":
        w = np.ones(n)
    elif weights == "logw":
        w = 10.0 ** rng.uniform(-1.0, 1.0, n)
    else:
        w = rng.uniform(0.5, 2.0, n)
    return SpanningTree(parent, w)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

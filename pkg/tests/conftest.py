import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "ci",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def cycle_graph():
    """Directed cycle with r parallel edges: heads(i, j) = i + 1 mod n."""

    def build(n, r=2):
        from routgraph import Digraph

        heads = np.repeat((np.arange(n) + 1) % n, r)
        return Digraph(n, r, heads)

    return build


@pytest.fixture
def all_loops_graph():
    """Every edge is a self-loop."""

    def build(n, r=2):
        from routgraph import Digraph

        heads = np.repeat(np.arange(n), r)
        return Digraph(n, r, heads)

    return build


@pytest.fixture
def two_state_chain():
    """heads(0) = {0, 1}, heads(1) = {0, 0}: stationary vector (2/3, 1/3)."""
    from routgraph import Digraph

    return Digraph(2, 2, np.array([0, 1, 0, 0]))

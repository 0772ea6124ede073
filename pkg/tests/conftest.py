import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cpkit import (  # noqa: E402
    BlockParams,
    Graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    generate_er,
    generate_sbm2,
    ideal_cp_graph,
    path_graph,
    star_graph,
)

ACCEPTANCE_LINES = []


def small_fixtures():
    """Named graphs with ``n <= 12`` used by the exhaustive-search checks."""
    fx = {
        "star5": star_graph(5),
        "star8": star_graph(8),
        "K4": complete_graph(4),
        "K5": complete_graph(5),
        "P5": path_graph(5),
        "P7": path_graph(7),
        "C6": cycle_graph(6),
        "C9": cycle_graph(9),
        "ideal_8_3": ideal_cp_graph(8, 3),
        "ideal_10_3": ideal_cp_graph(10, 3),
        "ideal_12_4": ideal_cp_graph(12, 4),
        "barbell": Graph.from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]),
        "triangle_pendant": Graph.from_edges([(0, 1), (1, 2), (0, 2), (0, 3)]),
    }
    for s in range(6):
        fx[f"er10_{s}"] = generate_er(10, 0.35, seed=100 + s)
    for s in range(4):
        fx[f"er12_{s}"] = generate_er(12, 0.25, seed=200 + s)
    for s in range(4):
        g, _ = generate_sbm2(4, 8, BlockParams(0.3, 0.9, 0.6, 0.1), seed=300 + s)
        fx[f"sbm12_{s}"] = g
    return fx


SMALL = small_fixtures()


@pytest.fixture(params=sorted(SMALL), ids=sorted(SMALL))
def small_graph(request):
    return SMALL[request.param]


def permuted(g, seed):
    """Relabel nodes by a random permutation; returns the graph and ``perm`` (old -> new)."""
    perm = np.random.default_rng(seed).permutation(g.n)
    e = g.edges()
    return Graph.from_edges(perm[e], n=g.n), perm


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

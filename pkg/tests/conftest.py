import itertools
import random

import pytest

from dyncut.graph import DynGraph


def complete(n, offset=0):
    return [(a + offset, b + offset) for a, b in itertools.combinations(range(n), 2)]


def cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def path(n):
    return [(i, i + 1) for i in range(n - 1)]


def star(leaves):
    return [(0, i) for i in range(1, leaves + 1)]


def two_cliques(k, bridges):
    """Two K_k's on 0..k-1 and k..2k-1 joined by ``bridges`` disjoint edges."""
    return complete(k) + complete(k, k) + [(i, k + i) for i in range(bridges)]


def gnp(n, p, seed):
    rnd = random.Random(seed)
    return [e for e in itertools.combinations(range(n), 2) if rnd.random() < p]


def graph(n, edges):
    return DynGraph(n, edges)


@pytest.fixture
def k4():
    return DynGraph(4, complete(4))


def threshold_preserved(g, h, k):
    """min(k, cut_H) == min(k, cut_G) over every bipartition (same vertex order)."""
    import numpy as np

    from dyncut.graph import MultiGraph
    from dyncut.oracle import all_cut_values

    g = MultiGraph.from_graph(g) if isinstance(g, DynGraph) else g
    h = MultiGraph(g.vertices, dict(h.weights))
    _, vg = all_cut_values(g)
    _, vh = all_cut_values(h)
    return bool(np.array_equal(np.minimum(vg, k), np.minimum(vh, k)))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import itertools
from collections import Counter

import numpy as np
import networkx as nx

from dyncut.graph import DynGraph
from dyncut.two_out import TwoOutState

from conftest import gnp


def test_k2_collapses():
    st = TwoOutState(DynGraph(2, [(0, 1)]), seed=1)
    assert st.samples == [[1, 1], [0, 0]]
    assert st.num_supervertices() == 1
    assert st.check()


def test_forest_spans_r_components():
    g = DynGraph(30, gnp(30, 0.15, 1))
    st = TwoOutState(g, seed=2)
    assert st.check()
    r = DynGraph(30, list(st.r))
    assert sorted(map(sorted, r.components())) == sorted(map(sorted, st.forest.components()))


def test_contraction_map_examples():
    st = TwoOutState(DynGraph(4), seed=0)
    assert st.contraction_map().num_clusters() == 4
    st = TwoOutState(DynGraph(2, [(0, 1)]), seed=0)
    assert st.contraction_map().num_clusters() == 1
    g = DynGraph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    st = TwoOutState(g, seed=3)
    clusters = sorted(sorted(c) for c in st.contraction_map().clusters())
    assert clusters == [[0, 1, 2], [3, 4, 5]]


def test_unsampled_delete_changes_nothing():
    g = DynGraph(6, list(itertools.combinations(range(6), 2)))
    st = TwoOutState(g, seed=4)
    sampled = {e for e in st.r}
    victim = next(e for e in g.edges() if e not in sampled)
    before = [list(p) for p in st.samples]
    g.delete_edge(*victim)
    assert st.on_update(*victim, False) == []
    assert st.samples == before


def test_leaf_deletion_drops_samples():
    g = DynGraph(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    st = TwoOutState(g, seed=5)
    g.delete_edge(0, 1)
    st.on_update(0, 1, False)
    assert st.samples[0] == [None, None]
    assert st.forest.members[st.forest.find(0)] == {0}
    assert st.check()


def test_samples_valid_after_random_stream():
    rnd = np.random.default_rng(0)
    g = DynGraph(20, gnp(20, 0.3, 2))
    st = TwoOutState(g, seed=6, rebuild_every=20)
    for _ in range(500):
        u, v = (int(x) for x in rnd.choice(20, 2, replace=False))
        ins = not g.has_edge(u, v)
        g.update(u, v, ins)
        st.on_update(u, v, ins)
        assert st.check()


def test_sample_uniform_after_updates():
    """Chi-square: vertex 0's first sample is uniform over its current edges."""
    counts = Counter()
    trials = 10_000
    base = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
    for s in range(trials):
        g = DynGraph(6, base)
        st = TwoOutState(g, seed=s, rebuild_every=None)
        for u, v, ins in [(0, 3, True), (0, 4, True), (0, 2, False), (0, 5, True), (0, 3, False),
                          (0, 2, True)]:
            g.update(u, v, ins)
            st.on_update(u, v, ins)
        counts[st.samples[0][0]] += 1
    nbrs = sorted(g.adj[0])
    assert set(counts) == set(nbrs)
    expected = trials / len(nbrs)
    chi2 = sum((counts[x] - expected) ** 2 / expected for x in nbrs)
    # 99.9% quantile of chi-square with 3 degrees of freedom is 16.27
    assert chi2 < 16.27


def test_regular_graph_contracts():
    sizes = []
    for s in range(20):
        g = DynGraph(200, nx.random_regular_graph(20, 200, seed=s).edges())
        sizes.append(TwoOutState(g, seed=s).num_supervertices())
    assert np.mean(sizes) <= 10 * 200 / 20

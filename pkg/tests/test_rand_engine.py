import numpy as np
import pytest

from dyncut.graph import DynGraph, MissingEdge
from dyncut.oracle import edge_connectivity
from dyncut.rand_engine import NoWitness, RandEngine, WitnessDisabled, degree_range

from conftest import complete, gnp, star, two_cliques


def test_degree_range():
    assert degree_range(1, 100) == 2
    assert degree_range(3, 100) == 4
    assert degree_range(4, 100) == 8
    assert degree_range(40, 50) == 50


def test_empty_and_small():
    assert RandEngine(5, T=2).query().lam == 0
    assert RandEngine(1, T=2).query().lam == 0
    e = RandEngine(DynGraph(4, complete(4)), T=4, seed=1)
    assert e.query().lam == 3
    e = RandEngine(DynGraph(7, star(6)), T=4, seed=1)
    assert e.query().lam == 1


def test_two_cliques_bridge_witness():
    g = DynGraph(12, two_cliques(6, 3))
    e = RandEngine(g, T=32, seed=0, report_cuts=True)
    ans = e.query()
    assert ans.lam == 3
    assert sorted(e.report_cut()) == [(0, 6), (1, 7), (2, 8)]
    assert sorted(ans.witness) == [(0, 6), (1, 7), (2, 8)]


def test_report_cut_modes():
    e = RandEngine(DynGraph(4, complete(4)), T=2)
    with pytest.raises(WitnessDisabled):
        e.report_cut()
    e = RandEngine(DynGraph(4, complete(4)), T=2, report_cuts=True)
    assert len(e.report_cut()) == 3
    with pytest.raises(NoWitness) as info:
        e.report_cut(nonsingleton=True)
    assert len(info.value.fallback) == 3


def test_insert_delete_restores_state_hash():
    g = DynGraph(16, gnp(16, 0.4, 2))
    e = RandEngine(g, T=4, seed=2, rebuild=False)
    e.query()
    h0 = e.state_hash()
    u, v = next((a, b) for a in range(16) for b in range(a + 1, 16) if not g.has_edge(a, b))
    e.insert(u, v)
    assert e.state_hash() != h0
    e.delete(u, v)
    assert e.state_hash() == h0


def test_delete_missing_edge():
    e = RandEngine(DynGraph(4, complete(3)), T=2)
    with pytest.raises(MissingEdge):
        e.delete(0, 3)


def test_never_undershoots_and_audits():
    rnd = np.random.default_rng(4)
    n = 20
    e = RandEngine(DynGraph(n, gnp(n, 0.35, 4)), T=8, seed=4)
    truth = DynGraph(n, gnp(n, 0.35, 4))
    for step in range(300):
        u, v = (int(x) for x in rnd.choice(n, 2, replace=False))
        ins = not truth.has_edge(u, v)
        truth.update(u, v, ins)
        e.update(u, v, ins)
        assert e.query().lam >= edge_connectivity(truth)
        if step % 50 == 0:
            assert e.audit()


def test_exact_on_planted_cut():
    g = DynGraph(24, two_cliques(12, 2) + gnp(24, 0.0, 0))
    e = RandEngine(g, T=32, seed=9)
    assert e.query().lam == 2
    e.delete(0, 12)
    assert e.query().lam == 1
    e.insert(5, 17)
    e.insert(6, 18)
    assert e.query().lam == 3


def test_seeded_runs_repeat():
    g = DynGraph(20, gnp(20, 0.3, 1))
    a = RandEngine(g, T=4, seed=5)
    b = RandEngine(g, T=4, seed=5)
    assert a.query() == b.query()
    assert a.state_hash() == b.state_hash()

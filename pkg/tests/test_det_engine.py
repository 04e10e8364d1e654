import numpy as np
import pytest

from dyncut.det_engine import CappedRecompute, DetEngine, ValidityError, default_tau
from dyncut.graph import DynGraph
from dyncut.harness import generate
from dyncut.oracle import edge_connectivity

from conftest import complete, gnp, two_cliques


def test_default_tau():
    assert default_tau(0, 10) == 1
    assert default_tau(10**8, 1) == 10
    assert default_tau(2**16, 2**16) == 2


def test_small_examples():
    assert DetEngine(DynGraph(3, complete(3))).query().lam == 2
    assert DetEngine(5).query().lam == 0
    assert DetEngine(1).query().lam == 0
    e = DetEngine(DynGraph(20, complete(20)))
    assert e.query().lam == 19 and e.active == "A2"


def test_capped_recompute():
    a = CappedRecompute(DynGraph(10, complete(10)), 3)
    assert a.current_lambda() == 4
    a.set_eta(20)
    assert a.current_lambda() == 9
    b = CappedRecompute(DynGraph(4, [(0, 1)]), 3)
    assert b.current_lambda() == 0


def test_switches_between_engines():
    g = DynGraph(16, two_cliques(8, 1))
    e = DetEngine(g, tau=2)
    assert e.active == "A1" and e.query().lam == 1
    for i in range(1, 4):
        e.insert(i, 8 + i)
    assert e.query().lam == 4 and e.active == "A2"
    for i in range(1, 4):
        e.delete(i, 8 + i)
    assert e.query().lam == 1 and e.active == "A1"
    assert e.switches >= 2


def test_oscillation_matches_oracle():
    s = generate("tau-oscillate", 16, 600, 2)
    e = DetEngine(s.n, phi_const=0.8)
    truth = DynGraph(s.n)
    for ev in s.events:
        if ev.kind == "q":
            continue
        ins = ev.kind == "i"
        truth.update(ev.u, ev.v, ins)
        e.update(ev.u, ev.v, ins)
        assert e.query().lam == edge_connectivity(truth)
    assert e.switches > 0
    assert e.sparsifier.dec.audit()


def test_relaxed_constants_random():
    rnd = np.random.default_rng(1)
    g = DynGraph(20, gnp(20, 0.5, 1))
    e = DetEngine(g, phi_const=0.5)
    for _ in range(300):
        u, v = (int(x) for x in rnd.choice(20, 2, replace=False))
        ins = not g.has_edge(u, v)
        g.update(u, v, ins)
        e.update(u, v, ins)
        assert e.query().lam == edge_connectivity(g)


def test_witness():
    g = DynGraph(12, two_cliques(6, 2))
    e = DetEngine(g, tau=1, report_cuts=True)
    ans = e.query()
    assert ans.lam == 2 and sorted(ans.witness) == [(0, 6), (1, 7)]
    assert DetEngine(g).query().witness is None


def test_validity_guard():
    g = DynGraph(10, complete(10))
    e = DetEngine(g, tau=2)
    e.lam = 1
    e.active = "A2"
    e.sparsifier.phase_length = 10**6
    with pytest.raises(ValidityError):
        e.delete(0, 1)

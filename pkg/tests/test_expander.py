from fractions import Fraction

import numpy as np
import pytest

from dyncut.expander import (INTER_CLUSTER_NOOP, DecExpander, EmptySide, ExpanderPartition,
                             Terminated, TooLarge, conductance, certify, min_conductance,
                             spectral_sweep, static_decompose, verify_expander, volume)
from dyncut.graph import DynGraph

from conftest import complete, cycle, gnp, path, two_cliques


def test_conductance_examples():
    k4 = DynGraph(4, complete(4))
    assert conductance(k4, {0, 1}) == Fraction(2, 3)
    assert conductance(k4, {0}) == 1
    c6 = DynGraph(6, cycle(6))
    assert conductance(c6, {0, 1, 2}) == Fraction(1, 3)
    assert min_conductance(c6, range(6))[0] == Fraction(1, 3)
    assert conductance(DynGraph(4, [(0, 1)]), {2}) == 0
    with pytest.raises(EmptySide):
        conductance(k4, set())
    with pytest.raises(EmptySide):
        conductance(k4, range(4))


def test_conductance_within_subset():
    g = DynGraph(6, two_cliques(3, 1))
    assert conductance(g, {0}, {0, 1, 2}) == 1
    assert volume(g, {0, 1, 2}) == 7
    assert volume(g, {0, 1, 2}, {0, 1, 2}) == 6


def test_min_conductance_matches_enumeration():
    rnd = np.random.default_rng(0)
    for s in range(30):
        n = int(rnd.integers(3, 9))
        g = DynGraph(n, gnp(n, 0.6, s))
        best, side = min_conductance(g, range(n))
        assert conductance(g, side) == best
        for mask in range(1, 1 << (n - 1)):
            S = {i for i in range(n) if mask >> i & 1}
            assert conductance(g, S) >= best


def test_verify_examples():
    assert verify_expander(DynGraph(5, complete(5)), range(5), Fraction(1, 2))
    assert not verify_expander(DynGraph(6, path(6)), range(6), Fraction(1, 2))
    assert verify_expander(DynGraph(3), [1], 5)
    with pytest.raises(TooLarge):
        min_conductance(DynGraph(20, complete(20)), range(20))


def test_spectral_certificate_sound():
    g = DynGraph(24, complete(24))
    lam2, side, val = spectral_sweep(g, range(24))
    assert lam2 > 1.0
    ok, _ = certify(g, range(24), Fraction(1, 2))
    assert ok
    bar = DynGraph(24, two_cliques(12, 1))
    ok, side = certify(bar, range(24), Fraction(1, 10))
    assert not ok and conductance(bar, side) < Fraction(1, 10)


def test_static_decompose_examples():
    k10 = DynGraph(10, complete(10))
    part = static_decompose(k10, Fraction(1, 2))
    assert [sorted(U) for U in part.clusters] == [list(range(10))]
    g = DynGraph(16, two_cliques(8, 1))
    part = static_decompose(g, Fraction(1, 4))
    assert sorted(sorted(U) for U in part.clusters) == [list(range(8)), list(range(8, 16))]
    assert part.inter_cluster_edges() == [(0, 8)]
    assert part.boundary_ratio() == pytest.approx(1 / (0.25 * g.m))
    singles = static_decompose(k10, 2)
    assert len(singles.clusters) == 10


def test_static_decompose_certified_clusters():
    for s in range(10):
        g = DynGraph(30, set(two_cliques(10, 2)) | set(gnp(30, 0.2, s)))
        phi = Fraction(1, 5)
        part = static_decompose(g, phi)
        assert sorted(v for U in part.clusters for v in U) == list(range(30))
        for U in part.clusters:
            if 1 < len(U) <= 16:
                assert verify_expander(g, U, phi)


def test_inter_cluster_deletion_is_noop():
    g = DynGraph(16, two_cliques(8, 2))
    dex = DecExpander(g, Fraction(1, 4))
    assert dex.delete(0, 8) is INTER_CLUSTER_NOOP
    assert dex.check_expansion() and dex.accounting_ok()


def test_prune_and_explode():
    g = DynGraph(8, complete(8))
    dex = DecExpander(g, Fraction(1, 2), ExpanderPartition(g, Fraction(1, 2), [set(range(8))]))
    cid = dex.cluster_of[0]
    assert dex.budget(cid) == 1
    ch = dex.delete(0, 1)
    assert not ch.exploded and ch.pruned == frozenset()
    ch = dex.delete(0, 2)
    assert ch.exploded
    assert all(len(U) == 1 for U in dex.clusters())
    assert dex.accounting_ok()


def test_peel_isolated_vertex():
    g = DynGraph(6, complete(5) + [(4, 5)])
    part = ExpanderPartition(g, Fraction(1, 10), [set(range(5)), {5}])
    dex = DecExpander(g, Fraction(1, 10), part)
    dex.max_deletions = 10
    for x in (1, 2, 3):
        dex.delete(0, x)
    assert dex.cluster_of[0] != dex.cluster_of[4]
    assert dex.check_expansion() and dex.accounting_ok()


def test_deletion_budget():
    g = DynGraph(8, complete(8))
    dex = DecExpander(g, Fraction(1, 4))
    assert dex.max_deletions == max(1, int(Fraction(1, 16) * 28))
    for u, v in complete(8)[: dex.max_deletions]:
        dex.delete(u, v)
    with pytest.raises(Terminated):
        dex.delete(6, 7)


def test_decremental_invariants_planted():
    rnd = np.random.default_rng(1)
    for s in range(8):
        g = DynGraph(32, set(two_cliques(12, 2)) | set(gnp(32, 0.15, s)))
        phi = Fraction(1, 3)
        dex = DecExpander(g, phi)
        edges = list(g.edges())
        for i in rnd.permutation(len(edges))[: dex.max_deletions]:
            dex.delete(*edges[i])
            assert dex.check_expansion()
            assert dex.accounting_ok()

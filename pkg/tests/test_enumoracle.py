"""Exhaustive small-graph oracle: classification and exact counts."""
import random
from fractions import Fraction
from itertools import product

import pytest

from planardeg.enumoracle import (SmallGraph, classify, enumerate_all,
                                  finite_n_distribution, has_k4_minor,
                                  has_k23_minor, is_connected, is_planar,
                                  save_counts, load_counts, TooLarge)


def G(n, edges):
    return SmallGraph.from_edges(n, edges)


def test_k4_flags():
    k4 = G(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    f = classify(k4)
    assert f.planar and not f.series_parallel and not f.outerplanar
    assert f.three_connected


def test_k5_not_planar():
    k5 = G(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert not classify(k5).planar


def test_k33_not_planar():
    k33 = G(6, [(i, 3 + j) for i in range(3) for j in range(3)])
    assert not classify(k33).planar


def test_c5_flags():
    c5 = G(5, [(i, (i + 1) % 5) for i in range(5)])
    f = classify(c5)
    assert f.connected and f.two_connected and not f.three_connected
    assert f.planar and f.series_parallel and f.outerplanar


def test_k23_is_sp_not_outerplanar():
    k23 = G(5, [(i, 2 + j) for i in range(2) for j in range(3)])
    f = classify(k23)
    assert f.series_parallel and not f.outerplanar and f.planar


def test_counts_n3_outerplanar_connected(enum_counts):
    assert enum_counts[3]["outerplanar"].connected == 4


def test_counts_n4(enum_counts):
    # every 4-vertex graph is planar; only K4 carries a K4 minor
    assert enum_counts[4]["planar"].connected == 38
    assert enum_counts[4]["series_parallel"].connected == 37
    assert enum_counts[4]["outerplanar"].connected == 37


def test_counts_n5_planar(enum_counts):
    # 728 connected graphs on 5 vertices; K5 is the only nonplanar one
    assert enum_counts[5]["planar"].connected == 727
    assert enum_counts[5]["planar"].two_connected == 237
    assert enum_counts[5]["planar"].three_connected == 25


def test_chain_outerplanar_sp_planar(enum_counts):
    for n in (4, 5, 6):
        c = enum_counts[n]
        assert c["outerplanar"].total <= c["series_parallel"].total \
            <= c["planar"].total


def test_histograms_sum(enum_counts):
    for n, counts in enum_counts.items():
        for cc in counts.values():
            cc.check()


def test_minor_tests_against_branch_set_definition():
    # exhaustive branch-set models on random n=6 graphs
    rnd = random.Random(5)

    def minor_bruteforce(adj, n, template, nverts):
        npart = nverts + 1
        for assign in product(range(npart), repeat=n):
            sets = [[v for v in range(n) if assign[v] == i]
                    for i in range(npart - 1)]
            if any(not s for s in sets):
                continue
            ok = True
            for s in sets:
                m = 0
                for v in s:
                    m |= 1 << v
                if not is_connected(adj, n, m):
                    ok = False
                    break
            if not ok:
                continue
            for (i, j) in template:
                if not any(adj[a] & (1 << b) for a in sets[i] for b in sets[j]):
                    ok = False
                    break
            if ok:
                return True
        return False

    k4_edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    k23_edges = [(i, 2 + j) for i in range(2) for j in range(3)]
    n = 6
    E = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(60):
        mask = rnd.getrandbits(len(E))
        adj = [0] * n
        for b, (i, j) in enumerate(E):
            if mask >> b & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        assert has_k4_minor(adj, n) == minor_bruteforce(adj, n, k4_edges, 4)
        assert has_k23_minor(adj, n) == minor_bruteforce(adj, n, k23_edges, 5)


def test_relabeling_invariance():
    rnd = random.Random(9)
    n = 6
    E = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(20):
        mask = rnd.getrandbits(len(E))
        edges = [E[b] for b in range(len(E)) if mask >> b & 1]
        f0 = classify(G(n, edges))
        perm = list(range(n))
        rnd.shuffle(perm)
        edges2 = [(perm[i], perm[j]) for (i, j) in edges]
        f1 = classify(G(n, edges2))
        assert (f0.planar, f0.series_parallel, f0.outerplanar,
                f0.connected, f0.two_connected) == \
            (f1.planar, f1.series_parallel, f1.outerplanar,
             f1.connected, f1.two_connected)


def test_finite_n_distribution_sums_to_one():
    d = finite_n_distribution(5, "planar", "connected")
    assert sum(d.values()) == Fraction(1)
    assert 0 not in d


def test_finite_n_outerplanar_d1_convergence(enum_counts):
    # coarse convergence sanity at n=6 toward the limit 0.1365937
    d = finite_n_distribution(6, "outerplanar", "connected")
    assert abs(float(d[1]) - 0.1365937) < 0.08


def test_too_large():
    with pytest.raises(TooLarge):
        enumerate_all(8)  # opt-in only
    with pytest.raises(TooLarge):
        SmallGraph(9, tuple([0] * 9))


def test_persisted_count_tables(tmp_path, enum_counts):
    path = tmp_path / "counts.txt"
    save_counts(enum_counts[5], path)
    loaded = load_counts(path, 5)
    for fam in ("outerplanar", "series_parallel", "planar"):
        assert loaded[fam].connected == enum_counts[5][fam].connected
        assert loaded[fam].histogram["connected"] == \
            enum_counts[5][fam].histogram["connected"]

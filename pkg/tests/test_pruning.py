import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs
from hamlab.graph import (DeletionJournal, Graph, complete_bipartite, complete_graph,
                          cycle_graph, petersen_graph)
from hamlab.pruning import (Reason, forced_degree_parity_test, forced_edges, initial_check,
                            prune_fixpoint, small_cutset_scan)
from hamlab.solver import brute_force_oracle


def hamiltonian_edge_union(g):
    """Every edge that lies on at least one Hamiltonian cycle (n <= 8)."""
    n = g.n
    used = set()
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        if all(g.has_edge(order[i], order[(i + 1) % n]) for i in range(n)):
            used |= {tuple(sorted((order[i], order[(i + 1) % n]))) for i in range(n)}
    return used


def run_prune(g):
    j = DeletionJournal(g)
    j.mark()
    return prune_fixpoint(g, j), j


def test_cycle_is_left_alone():
    g = cycle_graph(8)
    out, _ = run_prune(g)
    assert not out.nonhamiltonian and out.deleted == 0 and out.status == "Reduced"


def test_chord_on_cycle_is_deleted():
    g = cycle_graph(10)
    g.add_edge(0, 5)
    out, j = run_prune(g)
    assert out.deleted == 1 and not g.has_edge(0, 5)
    assert j.deleted_since(0) == [(0, 5)] or j.deleted_since(0) == [(5, 0)]


def test_three_forced_edges_at_one_vertex():
    out, _ = run_prune(complete_bipartite(2, 3))
    assert out.nonhamiltonian and out.reason is Reason.TRI_FORCED


def test_short_forced_cycle_is_min_degree():
    # a triangle hanging off K4 through nothing: two disjoint pieces, one a forced cycle
    g = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2)] +
                         [(3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)])
    out, _ = run_prune(g)
    assert out.nonhamiltonian and out.reason is Reason.MIN_DEGREE


def test_full_length_forced_path_keeps_closing_edge():
    g = cycle_graph(6)
    out, _ = run_prune(g)
    assert g.has_edge(0, 5) and not out.nonhamiltonian


def test_prune_needs_open_mark():
    g = cycle_graph(5)
    with pytest.raises(AssertionError):
        prune_fixpoint(g, DeletionJournal(g))


@settings(max_examples=500)
@given(graphs(min_n=4, max_n=8))
def test_pruning_is_sound(g):
    truth = brute_force_oracle(g) is not None
    keep = hamiltonian_edge_union(g) if truth else set()
    before = g.snapshot()
    work = g.copy()
    out, j = run_prune(work)
    assert out.passes <= g.n
    assert len(j) == out.deleted == g.m - work.m
    if out.nonhamiltonian:
        assert not truth
    else:
        assert (brute_force_oracle(work) is not None) == truth
        removed = g.edge_set() - work.edge_set()
        assert not (removed & keep)
    j.restore(0)
    assert work.snapshot() == before


@settings(max_examples=500)
@given(graphs(min_n=3, max_n=9))
def test_initial_check_never_rejects_hamiltonian_graphs(g):
    work = g.copy()
    out = initial_check(work, DeletionJournal(work))
    if brute_force_oracle(g) is not None:
        assert not out.nonhamiltonian


def test_initial_check_reasons(bowtie, two_triangles):
    for g, reason in [(bowtie, Reason.CUT_POINT), (two_triangles, Reason.DISCONNECTED),
                      (Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), Reason.MIN_DEGREE)]:
        out = initial_check(g, DeletionJournal(g))
        assert out.nonhamiltonian and out.reason is reason and out.passes == 0


def test_two_cycles_disconnected():
    g = Graph.from_edges(9, [(i, (i + 1) % 4) for i in range(4)] +
                         [(4 + i, 4 + (i + 1) % 5) for i in range(5)])
    out = initial_check(g, DeletionJournal(g))
    assert out.reason is Reason.DISCONNECTED


def test_forced_edges():
    g = complete_bipartite(2, 3)
    assert forced_edges(g) == g.edge_set()
    assert forced_edges(complete_graph(4)) == set()


def test_parity_on_k23_and_cycle():
    cert = forced_degree_parity_test(complete_bipartite(2, 3))
    assert cert.nonhamiltonian and cert.witness["fdeg"] == 3
    assert cert.witness["component"] in ([0], [1])
    assert cert.describe().startswith("NONHAM odd forced degree, component={")
    assert forced_degree_parity_test(cycle_graph(10)).describe() == "INCONCLUSIVE"


def blobs_joined_by_three_paths():
    blob_a = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    blob_b = [(u, v) for u in range(4, 9) for v in range(u + 1, 9)]
    links = [(0, 9), (9, 4), (1, 10), (10, 5), (2, 11), (11, 6)]
    return Graph.from_edges(12, blob_a + blob_b + links)


def test_parity_detects_three_path_cut():
    g = blobs_joined_by_three_paths()
    assert brute_force_oracle(g) is None
    assert forced_degree_parity_test(g).nonhamiltonian


@settings(max_examples=2000)
@given(graphs(min_n=3, max_n=10))
def test_parity_never_rejects_hamiltonian(g):
    if forced_degree_parity_test(g).nonhamiltonian:
        assert brute_force_oracle(g) is None


def triangles_on_two_hubs():
    edges = []
    for i in range(3):
        p, q, r = 2 + 3 * i, 3 + 3 * i, 4 + 3 * i
        edges += [(p, q), (q, r), (p, r), (0, p), (1, q)]
    return Graph.from_edges(11, edges)


def test_cutset_scan(bowtie):
    cert = small_cutset_scan(bowtie, 1)
    assert cert.describe() == "NONHAM cut={0} components=2"
    g = triangles_on_two_hubs()
    assert brute_force_oracle(g) is None
    assert not small_cutset_scan(g, 1).nonhamiltonian
    cert = small_cutset_scan(g, 2)
    assert cert.witness == {"cut": [0, 1], "components": 3}
    assert cert.reason is Reason.DISCONNECTED
    for c in (1, 2, 3):
        assert not small_cutset_scan(cycle_graph(10), c).nonhamiltonian
    with pytest.raises(ValueError):
        small_cutset_scan(bowtie, 4)


def test_petersen_passes_every_cheap_test():
    g = petersen_graph()
    out = initial_check(g, DeletionJournal(g))
    assert not out.nonhamiltonian
    assert not forced_degree_parity_test(g).nonhamiltonian
    assert not small_cutset_scan(g, 3).nonhamiltonian
    assert np.all(g.deg == 3)

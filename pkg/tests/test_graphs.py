"""Graph model, reduced graphs, source components, Condition 1/2."""

import itertools
import random

import pytest

from byzopt.graphs import (
    DiGraph,
    FaultySet,
    GraphSizeError,
    check_condition1,
    check_condition2,
    complete,
    cycle,
    enumerate_reduced_graphs,
    from_edges,
    in_neighbors,
    reduced_graph_count,
    source_component,
    star_out,
)


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------

def reaches_all_oracle(vertices, edges, v):
    """BFS reachability: does v reach every other vertex?"""
    adj = {u: set() for u in vertices}
    for (i, j) in edges:
        adj[i].add(j)
    seen = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen == set(vertices)


def source_oracle(h):
    return frozenset(v for v in h.vertices
                     if reaches_all_oracle(h.vertices, h.edges, v))


def condition1_brute(graph, f, s):
    """Direct enumeration over all faulty sets and all reduced graphs."""
    bound = max(f + 1, s)
    for size in range(0, f + 1):
        for fset in itertools.combinations(graph.vertices, size):
            faulty = FaultySet(frozenset(fset), f)
            for h in enumerate_reduced_graphs(graph, faulty):
                if len(source_oracle(h)) < bound:
                    return False
    return True


def random_digraph(n, p, rng):
    edges = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
             if i != j and rng.random() < p]
    return from_edges(n, edges)


# ---------------------------------------------------------------------------
# DiGraph basics and generators
# ---------------------------------------------------------------------------

def test_rejects_self_loops_and_bad_ids():
    with pytest.raises(ValueError):
        DiGraph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        DiGraph(3, frozenset({(1, 4)}))
    with pytest.raises(ValueError):
        DiGraph(0, frozenset())


def test_generators():
    k3 = complete(3)
    assert len(k3.edges) == 6
    c4 = cycle(4)
    assert (4, 1) in c4.edges and len(c4.edges) == 4
    s4 = star_out(4)
    assert s4.edges == frozenset({(1, 2), (1, 3), (1, 4)})


def test_in_neighbors_examples():
    path = from_edges(3, [(1, 2), (2, 3)])
    assert in_neighbors(path, 2) == {1}
    assert in_neighbors(complete(3), 1) == {2, 3}
    assert in_neighbors(DiGraph(2, frozenset()), 1) == frozenset()
    with pytest.raises(ValueError):
        in_neighbors(path, 4)


# ---------------------------------------------------------------------------
# Reduced graph enumeration
# ---------------------------------------------------------------------------

def test_reduced_count_k3():
    graphs = enumerate_reduced_graphs(complete(3), FaultySet(frozenset({3}), 1))
    assert len(graphs) == 4


def test_reduced_count_k4():
    graphs = enumerate_reduced_graphs(complete(4), FaultySet(frozenset({4}), 1))
    assert len(graphs) == 27


def test_reduced_f0_is_identity():
    g = from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    graphs = enumerate_reduced_graphs(g, FaultySet(frozenset(), 0))
    assert len(graphs) == 1
    assert graphs[0].edges == g.edges
    assert graphs[0].vertices == g.vertices


def test_reduced_graphs_distinct_and_valid():
    g = complete(4)
    faulty = FaultySet(frozenset({4}), 1)
    graphs = enumerate_reduced_graphs(g, faulty)
    seen = {h.edges for h in graphs}
    assert len(seen) == len(graphs)
    for h in graphs:
        assert set(h.vertices) == {1, 2, 3}
        for i in h.vertices:
            removed = set(g.in_neighbors(i) - faulty.members) - set(h.in_neighbors(i))
            assert len(removed) <= faulty.f


def test_reduced_count_matches_formula_random():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 6)
        g = random_digraph(n, rng.uniform(0.2, 0.9), rng)
        f = rng.randint(0, 2)
        members = frozenset(rng.sample(range(1, n + 1), min(f, n - 1)))
        faulty = FaultySet(members, f)
        assert len(enumerate_reduced_graphs(g, faulty)) == reduced_graph_count(g, faulty)


# ---------------------------------------------------------------------------
# Source component
# ---------------------------------------------------------------------------

def test_source_path():
    assert source_component(from_edges(3, [(1, 2), (2, 3)])) == {1}


def test_source_cycle():
    assert source_component(cycle(3)) == {1, 2, 3}


def test_source_isolated_pair():
    assert source_component(DiGraph(2, frozenset())) == frozenset()


def test_source_single_vertex():
    assert source_component(DiGraph(1, frozenset())) == {1}


def test_source_matches_reachability_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 6)
        g = random_digraph(n, rng.uniform(0.1, 0.9), rng)
        assert source_component(g) == source_oracle(g)


def test_source_is_single_scc():
    rng = random.Random(13)
    for _ in range(40):
        g = random_digraph(rng.randint(2, 6), rng.uniform(0.2, 0.8), rng)
        src = source_component(g)
        if not src:
            continue
        for v in src:
            assert reaches_all_oracle(g.vertices, g.edges, v)
        # mutual reachability inside the component
        for v in src:
            for w in src:
                assert reaches_all_oracle(src, {(a, b) for (a, b) in g.edges
                                                if a in src and b in src}, v) or v == w


# ---------------------------------------------------------------------------
# Condition 1
# ---------------------------------------------------------------------------

def test_condition1_k4():
    assert check_condition1(complete(4), 1, 2).holds


def test_condition1_complete_s_plus_2f():
    # tight complete graphs of size s + 2f
    assert check_condition1(complete(5), 1, 3).holds


def test_condition1_star_fails_with_witness():
    res = check_condition1(star_out(4), 1, 2)
    assert not res.holds
    assert res.witness_graph is not None
    assert len(res.witness_source) < res.bound
    # the witness must be a genuine reduced graph: recompute its source
    assert source_oracle(res.witness_graph) == res.witness_source


def test_condition1_witnesses_are_valid_reduced_graphs():
    rng = random.Random(47)
    seen = 0
    for _ in range(30):
        g = random_digraph(rng.randint(3, 6), rng.uniform(0.1, 0.7), rng)
        f = rng.randint(1, 2)
        res = check_condition1(g, f, rng.randint(1, 3))
        if res.holds:
            continue
        seen += 1
        h = res.witness_graph
        assert set(h.vertices) == set(g.vertices) - res.witness_faulty.members
        for i in h.vertices:
            removed = (g.in_neighbors(i) - res.witness_faulty.members) \
                - h.in_neighbors(i)
            assert len(removed) <= f
        assert len(source_oracle(h)) < res.bound
    assert seen >= 10


def test_condition1_matches_bruteforce_n3():
    for bits in range(1 << 6):
        pairs = [(i, j) for i in range(1, 4) for j in range(1, 4) if i != j]
        edges = [e for k, e in enumerate(pairs) if bits >> k & 1]
        g = from_edges(3, edges)
        for f in (0, 1):
            for s in (1, 2, 3):
                assert check_condition1(g, f, s).holds == condition1_brute(g, f, s)


def test_condition1_matches_bruteforce_random_n4():
    rng = random.Random(5)
    for _ in range(20):
        g = random_digraph(4, rng.uniform(0.2, 0.9), rng)
        for f in (0, 1):
            s = rng.randint(1, 4)
            assert check_condition1(g, f, s).holds == condition1_brute(g, f, s)


def test_condition1_matches_bruteforce_f2():
    # two tolerated faults: the closable-set search must agree with direct
    # enumeration of every reduced graph over every faulty set of size <= 2
    rng = random.Random(41)
    cases = [complete(4)]
    cases += [random_digraph(4, rng.uniform(0.3, 0.9), rng) for _ in range(6)]
    cases += [random_digraph(5, rng.uniform(0.2, 0.5), rng) for _ in range(4)]
    checked = 0
    for g in cases:
        for s in (1, 2, 3):
            got = check_condition1(g, 2, s).holds
            want = condition1_brute(g, 2, s)
            assert got == want, (sorted(g.edges), s)
            checked += 1
    assert checked == 33


def test_condition1_monotone_in_s():
    rng = random.Random(3)
    for _ in range(15):
        g = random_digraph(5, rng.uniform(0.3, 0.9), rng)
        verdicts = [check_condition1(g, 1, s).holds for s in range(1, 7)]
        # once false, stays false
        for a, b in zip(verdicts, verdicts[1:]):
            assert a or not b


def test_condition1_size_cap():
    with pytest.raises(GraphSizeError):
        check_condition1(complete(9), 1, 2)


def test_condition1_rejects_bad_s():
    with pytest.raises(ValueError):
        check_condition1(complete(4), 1, 0)


# ---------------------------------------------------------------------------
# Condition 2
# ---------------------------------------------------------------------------

def test_condition2_k4():
    assert check_condition2(complete(4), 1).holds


def test_condition2_k3_fails():
    res = check_condition2(complete(3), 1)
    assert not res.holds
    w = res.witness
    assert w.L and w.R
    assert len(w.F) <= 1
    # verify the witness really violates the condition
    g = complete(3)
    for i in w.L:
        assert len(g.in_neighbors(i) & (w.R | w.C)) <= 1
    for j in w.R:
        assert len(g.in_neighbors(j) & (w.L | w.C)) <= 1


def test_condition2_f0_weak_connectivity():
    assert check_condition2(cycle(5), 0).holds
    assert check_condition2(complete(4), 0).holds
    # at f=0 the condition asks every L/R cut to be crossed by some edge,
    # so a weakly connected path passes and a disconnected graph fails
    assert check_condition2(from_edges(3, [(1, 2), (2, 3)]), 0).holds
    assert not check_condition2(DiGraph(2, frozenset()), 0).holds
    # and it matches the f+1-source reading of Condition 1 at f=0
    rng = random.Random(31)
    for _ in range(30):
        g = random_digraph(4, rng.uniform(0.1, 0.9), rng)
        assert check_condition2(g, 0).holds == check_condition1(g, 0, 1).holds


def test_condition2_size_cap():
    with pytest.raises(GraphSizeError):
        check_condition2(complete(9), 1)


def test_condition_equivalence_sample():
    # spot check of the f=1 equivalence on 4 vertices; the acceptance suite
    # sweeps all 4096 digraphs
    rng = random.Random(23)
    pairs = [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]
    for bits in rng.sample(range(1 << 12), 120):
        edges = [e for k, e in enumerate(pairs) if bits >> k & 1]
        g = from_edges(4, edges)
        assert check_condition2(g, 1).holds == check_condition1(g, 1, 2).holds

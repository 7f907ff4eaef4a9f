import itertools
import math
import random

import pytest

from lowdeg import graph_core as gc


def brute_automorphisms(g: gc.LabeledGraph) -> int:
    """Oracle: count vertex bijections of the declared set fixing the edges."""
    verts = sorted(g.vertices)
    count = 0
    for perm in itertools.permutations(verts):
        mapping = dict(zip(verts, perm))
        mapped = frozenset(tuple(sorted((mapping[u], mapping[v]))) for u, v in g.edges)
        if mapped == g.edges:
            count += 1
    return count


def brute_isomorphic(a: gc.LabeledGraph, b: gc.LabeledGraph) -> bool:
    """Oracle: exhaustive bijection search on the declared vertex sets."""
    va, vb = sorted(a.vertices), sorted(b.vertices)
    if len(va) != len(vb) or len(a.edges) != len(b.edges):
        return False
    for perm in itertools.permutations(vb):
        mapping = dict(zip(va, perm))
        mapped = frozenset(tuple(sorted((mapping[u], mapping[v]))) for u, v in a.edges)
        if mapped == b.edges:
            return True
    return False


def random_graph(rng: random.Random, n: int, p: float = 0.5, declare_extra: bool = False):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if rng.random() < p]
    g = gc.graph(n, edges)
    if declare_extra:
        extra = [v for v in range(n) if v not in g.vertices and rng.random() < 0.4]
        g = gc.graph(n, edges, list(g.vertices) + extra)
    return g


# -- basics ------------------------------------------------------------------


def test_excess_examples():
    tri = gc.graph(5, [(0, 1), (1, 2), (0, 2)])
    assert gc.excess(tri) == 0
    assert gc.excess(gc.graph(5, [(0, 1)])) == -1
    assert gc.excess(gc.complete_graph(4)) == 2
    assert gc.excess(gc.empty_graph(3)) == 0


def test_graph_validation():
    with pytest.raises(ValueError):
        gc.graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        gc.graph(3, [(0, 5)])
    with pytest.raises(ValueError):
        gc.LabeledGraph(3, frozenset({(0, 1)}), frozenset({0}))


def test_edge_induced_ops():
    s = gc.graph(4, [(0, 1)])
    t = gc.graph(4, [(1, 2)])
    cap, cup, sym = gc.edge_induced_ops(s, t)
    assert cap.edges == frozenset() and cap.vertices == frozenset()
    assert cup.edges == frozenset({(0, 1), (1, 2)})
    assert sym.edges == cup.edges
    cap, cup, sym = gc.edge_induced_ops(s, s)
    assert cap.edges == cup.edges == s.edges and not sym.edges
    with pytest.raises(ValueError):
        gc.edge_induced_ops(s, gc.graph(5, [(0, 1)]))


def test_edge_count_additivity_random():
    rng = random.Random(3)
    for _ in range(100):
        s = random_graph(rng, 4)
        t = random_graph(rng, 4)
        cap, cup, _ = gc.edge_induced_ops(s, t)
        assert len(cup.edges) + len(cap.edges) == len(s.edges) + len(t.edges)


def test_leaves_and_isolated():
    g = gc.graph(6, [(0, 1), (1, 2)], vertices=[0, 1, 2, 5])
    assert gc.leaves(g) == frozenset({0, 2})
    assert gc.isolated_vertices(g) == frozenset({5})
    assert gc.support(g) == frozenset({0, 1, 2})


# -- canonical forms -----------------------------------------------------------


def test_canonicalize_relabeling_invariance():
    rng = random.Random(5)
    tri = gc.graph(3, [(0, 1), (1, 2)])
    assert gc.canonicalize(tri).canonical_form == gc.canonicalize(
        gc.graph(3, [(2, 0), (0, 1)])).canonical_form
    for _ in range(1000):
        n = rng.randint(2, 7)
        g = random_graph(rng, n, 0.5, declare_extra=True)
        perm = list(range(n))
        rng.shuffle(perm)
        assert gc.canonicalize(g).canonical_form == gc.canonicalize(gc.relabel(g, perm)).canonical_form


def test_canonicalize_separates_classes():
    tri = gc.graph(3, [(0, 1), (1, 2), (0, 2)])
    path = gc.graph(4, [(0, 1), (1, 2), (2, 3)])
    assert gc.canonicalize(tri).canonical_form != gc.canonicalize(path).canonical_form


def test_eleven_classes_on_four_vertices():
    # oracle: the number of graphs on 4 unlabeled vertices is 11
    forms = set()
    pairs = list(itertools.combinations(range(4), 2))
    for k in range(len(pairs) + 1):
        for es in itertools.combinations(pairs, k):
            forms.add(gc.canonicalize(gc.graph(4, es, vertices=range(4))).canonical_form)
    assert len(forms) == 11


def test_canonical_equality_matches_brute_isomorphism():
    rng = random.Random(6)
    for _ in range(200):
        a = random_graph(rng, 5, 0.5, declare_extra=True)
        b = random_graph(rng, 5, 0.5, declare_extra=True)
        assert (gc.canonicalize(a).canonical_form == gc.canonicalize(b).canonical_form) == brute_isomorphic(a, b)


def test_canonical_budget():
    with pytest.raises(gc.EnumerationBudgetError):
        gc.canonicalize(gc.complete_graph(17))


def test_automorphism_counts_against_brute_force():
    cases = [
        (gc.graph(3, [(0, 1), (1, 2), (0, 2)]), 6),
        (gc.graph(3, [(0, 1), (1, 2)]), 2),
        (gc.graph(5, [(0, 1), (1, 2), (0, 2)], vertices=range(5)), 12),
    ]
    for g, want in cases:
        assert gc.automorphism_count(g) == want
        assert brute_automorphisms(g) == want
    rng = random.Random(7)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 6), 0.5, declare_extra=True)
        assert gc.automorphism_count(g) == brute_automorphisms(g)


def test_aut_times_labeled_copies_is_factorial():
    # connected graphs: aut * (#labeled copies on |V| vertices) = |V|!
    rng = random.Random(8)
    seen = 0
    for _ in range(200):
        g = random_graph(rng, 6, 0.55)
        comps = gc.connected_components(g)
        if len(comps) != 1 or not g.edges:
            continue
        v = len(g.vertices)
        base = gc.relabel(g, {u: i for i, u in enumerate(sorted(g.vertices))})
        base = gc.graph(v, base.edges)
        target = gc.canonicalize(base).canonical_form
        pairs = list(itertools.combinations(range(v), 2))
        copies = 0
        for es in itertools.combinations(pairs, len(base.edges)):
            if gc.canonicalize(gc.graph(v, es)).canonical_form == target:
                copies += 1
        assert gc.automorphism_count(base) * copies == math.factorial(v)
        seen += 1
        if seen >= 12:
            break
    assert seen >= 12


def test_count_embeddings():
    tri = gc.graph(4, [(0, 1), (1, 2), (0, 2)])
    assert gc.count_embeddings(gc.graph(4, [(0, 1)]), tri) == 3
    k4 = gc.complete_graph(4)
    assert gc.count_embeddings(gc.graph(4, [(0, 1), (1, 2), (0, 2)]), k4) == 4
    assert gc.count_embeddings(gc.empty_graph(4), tri) == 1
    # with isolated vertices in the pattern
    pattern = gc.graph(4, [(0, 1)], vertices=[0, 1, 2])
    host = gc.graph(4, [(0, 1), (2, 3)], vertices=range(4))
    # choose one of 2 edges, then 1 extra vertex among the remaining 2
    assert gc.count_embeddings(pattern, host) == 4


# -- cycles ---------------------------------------------------------------------


def test_all_cycles_triangle_square():
    g = gc.graph(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (3, 6)])
    cycles = gc.all_cycles(g)
    assert sorted(len(c) for c in cycles) == [3, 4]
    assert gc.has_cycle_at_most(g, 3)
    assert not gc.has_cycle_at_most(gc.graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), 3)


def test_k4_cycle_census():
    cycles = gc.all_cycles(gc.complete_graph(4))
    assert sorted(len(c) for c in cycles) == [3, 3, 3, 3, 4, 4, 4]


def test_independent_cycle_census():
    s = gc.graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (3, 6)])
    assert gc.independent_cycle_census(s, gc.empty_graph(8)) == {3: 1, 4: 1}
    # a pendant edge breaks independence
    s2 = gc.graph(8, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert gc.independent_cycle_census(s2, gc.empty_graph(8)) == {}
    # census avoids the declared vertices of h
    two_tri = gc.graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    h = gc.graph(8, [(0, 1), (1, 2), (0, 2)])
    assert gc.independent_cycle_census(two_tri, h) == {3: 1}


# -- decompositions ---------------------------------------------------------------


def a2_count(s, h):
    return len(gc.leaves(s) - h.vertices) + gc.excess(s) - gc.excess(h)


def test_decompose_triangle_and_trivial():
    tri = gc.graph(5, [(0, 1), (1, 2), (0, 2)])
    d = gc.decompose_difference(tri, gc.empty_graph(5), "A2")
    assert d.t == 0 and d.m == 1 == len(d.cycles)
    d2 = gc.decompose_difference(tri, tri, "A2")
    assert d2.t == 0 and d2.m == 0
    with pytest.raises(ValueError):
        gc.decompose_difference(tri, gc.graph(5, [(3, 4)]), "A2")
    with pytest.raises(ValueError):
        gc.decompose_difference(tri, gc.empty_graph(5), "A9")


def test_decompose_theta_follows_count_formula():
    # two vertices joined by three disjoint length-2 paths: excess 1, no leaves
    theta = gc.graph(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
    d = gc.decompose_difference(theta, gc.empty_graph(5), "A2")
    assert d.t == a2_count(theta, gc.empty_graph(5)) == 1
    assert d.reassembled_edges() == sorted(theta.edges)


def _a2_properties(s, h, d):
    anchors0 = set(h.vertices) | set(gc.leaves(s))
    cycle_sets = [gc.support(c) for c in d.cycles]
    # cycles pairwise vertex-disjoint and avoiding V(h)
    for i, ci in enumerate(cycle_sets):
        assert not (ci & h.vertices)
        for j in range(i):
            assert not (ci & cycle_sets[j])
    all_cycle_verts = set().union(*cycle_sets) if cycle_sets else set()
    prev_path_verts: set = set()
    for p, (u, v) in zip(d.paths, d.endpoints):
        interior = gc.support(p) - {u, v}
        allowed = set(h.vertices) | all_cycle_verts | prev_path_verts | set(gc.leaves(s))
        assert {u, v} <= allowed
        assert not (interior & allowed)
        prev_path_verts |= gc.support(p)


def _a3_properties(s, h, d):
    # cycles are independent in s and avoid V(h)
    for c in d.cycles:
        assert not (gc.support(c) & h.vertices)
        for e in s.edges - c.edges:
            assert not (set(e) & gc.support(c))
    # paths pairwise intersect only in endpoints
    for i, (p, ep) in enumerate(zip(d.paths, d.endpoints)):
        extern = set(h.vertices) | set(gc.leaves(s))
        for c in d.cycles:
            extern |= gc.support(c)
        for j, q in enumerate(d.paths):
            if i != j:
                extern |= gc.support(q)
        assert gc.support(p) & extern <= set(ep)
        assert set(ep) <= extern | set(ep)  # endpoints may also be fresh roots covered by others
    # every endpoint vertex is genuinely on the union it points to
    for i, (p, ep) in enumerate(zip(d.paths, d.endpoints)):
        others = set(h.vertices) | set(gc.leaves(s))
        for c in d.cycles:
            others |= gc.support(c)
        for j, q in enumerate(d.paths):
            if i != j:
                others |= gc.support(q)
        for v in ep:
            assert v in others, "endpoint not anchored on any other piece"


def test_decompose_random_properties():
    rng = random.Random(11)
    for trial in range(500):
        n = rng.randint(3, 8)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = rng.sample(pairs, rng.randint(0, len(pairs)))
        s = gc.graph(n, edges)
        h_edges = rng.sample(edges, rng.randint(0, len(edges))) if edges else []
        hv = {v for e in h_edges for v in e}
        extra = [v for v in s.vertices if v not in hv and rng.random() < 0.3]
        h = gc.graph(n, h_edges, list(hv) + extra)
        d2 = gc.decompose_difference(s, h, "A2")
        assert d2.reassembled_edges() == sorted(s.edges - h.edges)
        assert d2.t == a2_count(s, h)
        _a2_properties(s, h, d2)
        d3 = gc.decompose_difference(s, h, "A3")
        assert d3.reassembled_edges() == sorted(s.edges - h.edges)
        assert d3.t <= 5 * a2_count(s, h)
        _a3_properties(s, h, d3)


def test_decompose_deterministic():
    s = gc.graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    a = gc.decompose_difference(s, gc.empty_graph(6), "A2")
    b = gc.decompose_difference(s, gc.empty_graph(6), "A2")
    assert a.reassembled_edges() == b.reassembled_edges()
    assert a.endpoints == b.endpoints
    assert [sorted(c.edges) for c in a.cycles] == [sorted(c.edges) for c in b.cycles]


# -- rooted trees ------------------------------------------------------------------


def rooted_tree_forms(n: int, _memo={1: [()]}):
    """Oracle: canonical nested-tuple forms of rooted trees, by recursive
    multiset construction (independent of the divisor-sum recurrence)."""
    if n in _memo:
        return _memo[n]
    forms = set()

    def extend(remaining: int, max_size: int, acc: tuple):
        if remaining == 0:
            forms.add(tuple(sorted(acc, reverse=True)))
            return
        for size in range(min(remaining, max_size), 0, -1):
            for child in rooted_tree_forms(size):
                extend(remaining - size, size, acc + (child,))

    extend(n - 1, n - 1, ())
    _memo[n] = sorted(forms)
    return _memo[n]


def test_rooted_tree_counts_against_construction_oracle():
    counts = gc.rooted_tree_counts(9)
    assert counts == [len(rooted_tree_forms(n)) for n in range(1, 10)]
    assert counts == [1, 1, 2, 4, 9, 20, 48, 115, 286]


def test_growth_constant_window():
    est = gc.otter_constant_estimate(50)
    assert est.converged
    assert 0.337 <= est.value <= 0.340
    crude = gc.otter_constant_estimate(3)
    assert not crude.converged
    assert crude.value == 0.5  # the raw ratio of the last two counts
    assert not gc.otter_constant_estimate(2).converged
    with pytest.raises(gc.EnumerationBudgetError):
        gc.rooted_tree_counts(61)


# -- edge list I/O -----------------------------------------------------------------


def test_edge_list_round_trip():
    g = gc.graph(5, [(0, 1), (2, 4)], vertices=range(5))
    text = gc.write_edge_list(g)
    assert text.splitlines()[0] == "5 2"
    back = gc.read_edge_list(text)
    assert back.edges == g.edges and back.n_vertices == 5
    assert back.vertices == frozenset(range(5))  # isolated vertices implied by n

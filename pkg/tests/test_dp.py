import random
from itertools import combinations

import pytest

from edfk.campaign import check_dp_oracle, dp_instance
from edfk.dp import (ExhaustiveFamily, _boundary_graphs, _extend_by_vertex, antichain, combine_exhaustive, compatible,
                     compute_representatives, dp_solve, equivalent, extend_family, leaf_exhaustive,
                     prune_exhaustive)
from edfk.elim import (compute_ed, forest_to_tree_decomposition, is_free, normalize_decomposition,
                       tri_separation_at)
from edfk.errors import ContractViolation, InvalidArgument
from edfk.graph_core import Graph, canonical_key, complete_graph, cycle_graph, glue, path_graph, star_graph
from edfk.solvers import all_hitting_optimal, hitting_q_unlabeled

K2 = [complete_graph(2)]
K3 = [complete_graph(3)]


def decomposition(g, family=K3):
    _, forest = compute_ed(g, family)
    return forest_to_tree_decomposition(forest, g, family)


def fam(*sets, region=(), kind="test"):
    return ExhaustiveFamily(tuple(frozenset(s) for s in sets), frozenset(region), 99, kind)


def test_antichain_drops_q_containing_f():
    out = antichain(K3, [complete_graph(4), path_graph(3)])
    assert len(out) == 2 and canonical_key(out[1]) == canonical_key(path_graph(3))


def test_k0_k2_only_empty_graph():
    reps = compute_representatives(K2, 0, 5)
    assert [len(r) for r in reps[0]] == [0]


def test_reps_free_and_pairwise_inequivalent():
    pats = antichain(K3, [star_graph(3)])
    reps = compute_representatives(pats, 2, 5)
    for t in range(3):
        rs = reps[t]
        assert all(is_free(r, pats) for r in rs)
        for a, b in combinations(rs, 2):
            assert not equivalent(a, b, pats, t)


def test_equivalence_basics():
    g = cycle_graph(4)
    assert equivalent(g, g, K3, 0)
    # boundaryless: one graph has a P3, the other does not
    assert not equivalent(path_graph(3), path_graph(2), antichain(K3, [path_graph(3)]), 0)
    a = Graph(range(2), [(0, 1)], None, {0: 1, 1: 2}, 2)
    b = Graph(range(2), [], None, {0: 1, 1: 2}, 2)
    assert not compatible(a, b) and not equivalent(a, b, K3, 2)


def _pool(t, n):
    seen = {}
    level = {canonical_key(g): g for g in _boundary_graphs(t)}
    for _ in range(n - t + 1):
        seen.update(level)
        nxt = {}
        for g in level.values():
            for h in _extend_by_vertex(g):
                nxt.setdefault(canonical_key(h), h)
        level = nxt
    return list(seen.values())


@pytest.mark.parametrize("q", [[], [star_graph(3)], [path_graph(4)]], ids=["none", "claw", "p4"])
def test_equivalent_graphs_behave_alike_in_every_context(q):
    t = 2
    pats = antichain(K3, q)
    pool = [g for g in _pool(t, 4) if is_free(g, pats)]
    contexts = _pool(t, 4)
    pairs = [(a, b) for a, b in combinations(pool, 2) if equivalent(a, b, pats, t)]
    assert pairs
    for g1, g2 in pairs:
        for h in contexts:
            if not compatible(h, g1):
                continue
            inner = [v for v in h.vertices if v not in h.boundary_vertices]
            for r in range(len(inner) + 1):
                for S in combinations(inner, r):
                    hs = h.without(S)
                    assert is_free(glue(hs, g1), pats) == is_free(glue(hs, g2), pats)


def test_combine_examples():
    f1 = fam({0}, set(), region={0, 1})
    assert combine_exhaustive(f1, fam(set()), {0, 1}).sets == tuple(sorted(f1.sets, key=len))
    c = combine_exhaustive(fam({0}, region={0}), fam({1}, region={1}), {0, 1, 2})
    assert set(c.sets) == {frozenset({0, 1}), frozenset({0, 1, 2})}
    assert c.within_bound()
    with pytest.raises(InvalidArgument):
        combine_exhaustive(fam({0}, region={0}), fam({0}, region={0}), {0})


def test_extend_family():
    e = extend_family(fam({0}, region={0}), {0, 1, 2})
    assert len(e) == 4 and e.bound == 4


def test_leaf_with_empty_region():
    g = path_graph(2)
    dec = normalize_decomposition(decomposition(g))
    reps = compute_representatives(K3, 2, 4)
    root = tri_separation_at(dec, dec.root, g)
    empty = type(root)(frozenset(), root.A | root.X, frozenset())
    assert leaf_exhaustive(empty, g, reps, K3, 0).sets in ((frozenset(),), ())


def test_leaf_on_k4():
    g = complete_graph(4)
    dec = normalize_decomposition(decomposition(g))
    leaf = next(i for i in dec.nodes if dec.is_leaf(i))
    sep = tri_separation_at(dec, leaf, g)
    reps = compute_representatives(K3, len(sep.X), 5)
    f = leaf_exhaustive(sep, g, reps, K3, len(sep.X))
    assert f.within_bound()
    # with both separator vertices kept, a triangle forces a deletion in A
    assert any(len(s) == 1 for s in f.sets) and frozenset() in f.sets
    pruned = prune_exhaustive(sep, g, f, reps, K3)
    assert set(pruned.sets) <= set(f.sets) and pruned.within_bound()


def test_solve_examples():
    g = path_graph(5)
    assert dp_solve(g, decomposition(g), K3, []).size == 0
    k4 = complete_graph(4)
    assert dp_solve(k4, decomposition(k4), K3, []).size == 2
    assert dp_solve(k4, decomposition(k4), K3, [path_graph(2)]) is None
    assert dp_solve(k4, decomposition(k4), K3, [path_graph(3)]).size == 2


def test_rejects_disconnected_patterns():
    g = path_graph(3)
    with pytest.raises(ContractViolation):
        dp_solve(g, decomposition(g), K3, [Graph(range(2))])


def test_rejects_foreign_decomposition():
    with pytest.raises(ContractViolation):
        dp_solve(complete_graph(4), decomposition(path_graph(4)), K3, [])


def _families_by_node(g, dec, pats, reps):
    out, seps = {}, {}
    order, stack = [], [dec.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(dec.children(i))
    for i in reversed(order):
        sep = tri_separation_at(dec, i, g)
        kids = dec.children(i)
        if not kids:
            f = leaf_exhaustive(sep, g, reps, pats, len(sep.A))
        elif len(kids) == 1:
            f = prune_exhaustive(sep, g, extend_family(out[kids[0]], sep.A), reps, pats)
        else:
            f = prune_exhaustive(sep, g, combine_exhaustive(out[kids[0]], out[kids[1]], sep.A), reps, pats)
        out[i] = f
        seps[i] = sep
    return [(seps[i], out[i]) for i in order]


@pytest.mark.parametrize("i", range(6))
def test_every_node_family_is_exhaustive(i):
    # any optimal solution can trade its part inside A for a family member
    g, dec, q = dp_instance(random.Random(f"exhaustive:{i}"))
    pats = antichain(K3, q)
    dec = normalize_decomposition(dec)
    k = max(len(tri_separation_at(dec, j, g).X) for j in dec.nodes)
    reps = compute_representatives(pats, k, 6)
    for sep, f in _families_by_node(g, dec, pats, reps):
        assert f.within_bound()
        for Y in all_hitting_optimal(g, pats, []):
            outside = Y.vertices - sep.A
            assert any(len(outside | S) <= Y.size and is_free(g.without(outside | S), pats) for S in f.sets)


def test_random_instances_match_oracle():
    for i in range(8):
        ok, info = check_dp_oracle(random.Random(f"dp-unit:{i}"), {})
        assert ok, info


def test_report_shape():
    k4 = complete_graph(4)
    rep = dp_solve(k4, decomposition(k4), K3, [path_graph(3)], report=True)
    js = rep.to_json()
    assert js["feasible"] and js["opt"] == 2
    assert all(f.within_bound() for f in rep.families)
    assert hitting_q_unlabeled(k4, K3, [path_graph(3)]).size == rep.solution.size

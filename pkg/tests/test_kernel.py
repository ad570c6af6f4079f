import random

import pytest

from edfk.campaign import (check_blocking, check_kernel_oracle, check_marking, kernel_instance, marking_instance,
                           oracles_optimal)
from edfk.elim import ed_value, is_free
from edfk.errors import ContractViolation, InvalidArgument
from edfk.graph_core import Graph, complete_graph, cycle_graph, path_graph
from edfk.kernel import (attachment_view, augment_modulator, find_blocking_subset, kernelize, labels_reached,
                         lift_solution, marking_check, minimal_fragments, reduce_components, too_many_labels,
                         total_marked_labels)
from edfk.minors import Flavor, saturate
from edfk.solvers import all_hitting_optimal, opt_deletion

K3 = [complete_graph(3)]


def triangles_on(x_count, copies):
    """Hub vertices 0..x_count-1, each triangle fully joined to every hub."""
    edges, n = [], x_count
    for _ in range(copies):
        tri = [n, n + 1, n + 2]
        edges += [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])]
        edges += [(x, tri[0]) for x in range(x_count)]
        n += 3
    return Graph(range(n), edges)


def test_single_component_untouched():
    g = triangles_on(1, 1)
    g2, delta, level = reduce_components(g, {0}, K3, 1)
    assert g2 == g and delta == 0 and not level.removed


def test_duplicates_removed_with_delta():
    g = triangles_on(1, 4)
    g2, delta, level = reduce_components(g, {0}, K3, 1)
    assert len(g2) == 4 and delta == 3
    assert opt_deletion(g, K3)[0] == opt_deletion(g2, K3)[0] + delta
    assert all(ed_value(g.induced(r.vertices), K3) == 1 for r in level.removed)


def test_retain_zero_and_bad_args():
    g = triangles_on(1, 2)
    g2, delta, _ = reduce_components(g, {0}, K3, 1, retain=0)
    assert len(g2) == 1 and delta == 2
    with pytest.raises(InvalidArgument):
        reduce_components(g, {0}, K3, 1, retain=-1)
    with pytest.raises(ContractViolation):
        reduce_components(complete_graph(5), set(), K3, 1)


def test_attachment_view_and_fragments():
    g = triangles_on(2, 1)
    view = attachment_view(g, [2, 3, 4], {0, 1})
    assert view.labels(2) == {"0", "1"} and view.labels(3) == frozenset()
    frags = minimal_fragments(["0", "1"])
    assert len(frags) == 3 and sorted(len(q) for q in frags) == [1, 2, 2]


def test_augment():
    k4 = complete_graph(4)
    X, added = augment_modulator(k4, set(), K3, 2)
    assert added == (0,) or len(added) == 1
    assert ed_value(k4.without(X), K3) <= 1
    g = Graph(range(3), [(0, 1), (1, 2)])
    assert augment_modulator(g, set(), K3, 1) == (frozenset(), ())
    with pytest.raises(InvalidArgument):
        augment_modulator(g, set(), K3, 0)


def test_kernelize_bookkeeping():
    g = triangles_on(1, 4)
    gs, xs, ks, trace = kernelize(g, {0}, 5, K3, 1)
    assert ks == 5 - trace.delta
    assert (opt_deletion(g, K3)[0] <= 5) == (opt_deletion(gs, K3)[0] <= ks)


def test_exact_base_is_constant_size():
    g = triangles_on(1, 4)
    yes = kernelize(g, {0}, 5, K3, 1, base="exact")
    no = kernelize(g, {0}, 1, K3, 1, base="exact")
    assert len(yes[0]) == 0 and len(no[0]) == 3 and yes[2] == no[2] == 0
    lifted = lift_solution(yes[3])
    assert is_free(g.without(lifted.vertices), K3) and lifted.size == 4
    with pytest.raises(InvalidArgument):
        kernelize(g, {0}, 1, K3, 1, base="planar")


def test_lift_triangle():
    g = triangles_on(1, 2)
    gs, _, _, trace = kernelize(g, {0}, 2, K3, 1)
    y = opt_deletion(gs, K3)[1]
    lifted = lift_solution(trace, y)
    assert lifted.size == y.size + 1 and is_free(g.without(lifted.vertices), K3)
    with pytest.raises(ContractViolation):
        lift_solution(trace, frozenset())


def test_empty_trace_keeps_solution():
    g = path_graph(5)
    gs, _, _, trace = kernelize(g, set(), 0, K3, 0)
    assert not trace.levels and lift_solution(trace, {0}).vertices == {0}


@pytest.mark.parametrize("i", range(10))
def test_kernel_random(i):
    ok, info = check_kernel_oracle(random.Random(f"kernel-unit:{i}"), {})
    assert ok, info


def test_lift_ratio_never_worse():
    for i in range(15):
        g, X = kernel_instance(random.Random(f"ratio:{i}"))
        gs, _, _, trace = kernelize(g, X, len(g), K3, 1)
        opt = opt_deletion(gs, K3)[0]
        if opt == 0:
            continue
        for extra in range(3):
            y = opt + extra
            assert (y + trace.delta) * opt <= y * (opt + trace.delta)


def test_blocking_examples():
    c = Graph(range(3), [(0, 1), (1, 2), (0, 2)], {0: {"a"}}, universe="a")
    qa = Graph([0], (), {0: {"a"}}, universe="a")
    assert find_blocking_subset(c, K3, [qa]) is None
    # every optimum keeps an edge of the triangle
    edge = Graph(range(2), [(0, 1)], universe="a")
    w = find_blocking_subset(c, K3, [edge])
    assert w.q_star == (edge,) and w.ed == 1 and len(w.witnesses) == 3
    w = find_blocking_subset(c, K3, [qa, edge])
    assert w.q_star == (edge,)


@pytest.mark.parametrize("i", range(8))
def test_blocking_random(i):
    ok, info = check_blocking(random.Random(f"blocking-unit:{i}"), {})
    assert ok, info


def test_marking_arithmetic():
    assert too_many_labels(2, 3) == 7
    assert total_marked_labels(2, 3) == 21


def test_two_deletions_cut_few_labels():
    # three pendant pieces, two labels each, hung off v = 0
    n_f = 3
    lab = {0: set(), 1: {"a", "b"}, 2: {"c", "d"}, 3: {"e", "f"}, 4: set()}
    g = Graph(range(5), [(0, 1), (0, 2), (0, 3), (3, 4)], lab, universe="abcdef")
    full = labels_reached(g, 0)
    from itertools import combinations
    for Y in combinations([1, 2, 3, 4], 2):
        lost = full - labels_reached(g.without(Y), 0)
        assert len(lost) <= 2 * (n_f - 1)


def test_marking_random():
    for i in range(6):
        ok, info = check_marking(random.Random(f"marking-unit:{i}"), {})
        assert ok, info


def test_marking_contracts():
    g, boundary, breaker, q_set, n_f = marking_instance(random.Random(1))
    with pytest.raises(ContractViolation):
        marking_check(g, boundary, breaker, q_set[:-1], n_f)
    with pytest.raises(ContractViolation):
        marking_check(g, boundary, [], q_set, n_f)


def test_heavily_labeled_vertex_is_mandatory():
    from itertools import combinations
    from edfk.minors import is_minor
    n_f = 3
    uni = "abcd"
    lab = {3: set(uni), 1: {"a", "b"}, 0: {"c", "d"}, 2: {"a", "b", "d"}}
    g = Graph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)], lab, universe=uni)
    q = saturate(uni, n_f)
    hitting = [set(Y) for r in range(len(g) + 1) for Y in combinations(g.vertices, r)
               if not any(is_minor(p, g.without(Y), Flavor.LABELED) for p in q)]
    assert hitting and all({2, 3} <= Y for Y in hitting)
    assert all(3 in s.vertices for s in all_hitting_optimal(g, K3, q, Flavor.LABELED))

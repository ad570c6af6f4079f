import random

import pytest

from edfk.campaign import check_extending_ed, check_extending_minors, check_gadgets_nice, check_unlabel_answers
from edfk.errors import ContractViolation, InvalidArgument
from edfk.gadgets import (STAR, GadgetsFunction, build_nice_gadgets, extend_graph, gadget_vertices, unlabel_instance,
                          verify_nice)
from edfk.graph_core import forget, Graph, complete_graph, cycle_graph, path_graph
from edfk.minors import is_biconnected, is_minor
from edfk.elim import ed_value

K3 = [complete_graph(3)]


def test_clique_floor():
    gf = build_nice_gadgets("", K3, 1)
    assert gf.clique == 7
    assert build_nice_gadgets("", [complete_graph(5)], 4).clique == 9
    assert is_minor(complete_graph(7), forget(gf[STAR], 0))


def test_three_labels_four_gadgets():
    gf = build_nice_gadgets("cab", K3, 1)
    assert gf.labels() == ("a", "b", "c", STAR)
    sizes = [len(gf[x]) for x in gf.labels()]
    assert len(set(sizes)) == 4
    assert all(gf[x].t == 1 and is_biconnected(gf[x]) for x in gf.labels())
    assert verify_nice(gf, cycle_graph(6))


def test_reserved_label():
    with pytest.raises(InvalidArgument):
        build_nice_gadgets(["a", STAR], K3, 1)
    with pytest.raises(InvalidArgument):
        build_nice_gadgets("a", K3, -1)


def test_verify_nice_negatives():
    gf = build_nice_gadgets("a", K3, 1)
    twin = GadgetsFunction({"a": gf[STAR], STAR: gf[STAR]}, gf.order, gf.clique)
    assert not verify_nice(twin)
    loose = Graph(range(3), [(0, 1)], None, {0: 1}, 1)
    assert not verify_nice(GadgetsFunction({"a": loose, STAR: gf[STAR]}, gf.order, gf.clique))
    # a host that already contains a gadget
    assert not verify_nice(gf, forget(gf["a"], 0))


def test_extend_counts():
    gf = build_nice_gadgets("ab", K3, 1)
    m = len(gf[STAR])
    g_plus, prov = extend_graph(Graph([0]), gf)
    assert len(g_plus) == 1 + (m - 1)
    assert g_plus.used_labels() == frozenset()
    g = Graph([0], (), {0: {"a", "b"}}, universe="ab")
    g_plus, prov = extend_graph(g, gf)
    assert sorted(x for _, x, _ in prov.copies) == ["*", "a", "b"]
    assert len(g_plus) == 1 + sum(len(gf[x]) - 1 for x in "ab*")
    assert gadget_vertices(prov, 0) == set(g_plus.vertices)


def test_extend_unknown_label():
    gf = build_nice_gadgets("a", K3, 1)
    with pytest.raises(InvalidArgument):
        extend_graph(Graph([0], (), {0: {"z"}}, universe="z"), gf)


def test_extension_of_free_graph_stays_free():
    gf = build_nice_gadgets("", K3, 0)
    f_plus, _ = extend_graph(complete_graph(3), gf)
    g_plus, _ = extend_graph(path_graph(3), gf)
    assert not is_minor(f_plus, g_plus)
    h_plus, _ = extend_graph(cycle_graph(4), gf)
    assert is_minor(f_plus, h_plus)


def test_unlabel_drops_unused_labels():
    g = Graph(range(3), [(0, 1), (1, 2)], {0: {"a"}, 2: {"b"}}, universe="ab")
    q = [Graph([0], (), {0: {"a"}}, universe="a")]
    inst = unlabel_instance(g, K3, q, 1)
    assert inst.gadgets.labels() == ("a", STAR)
    assert len(inst.family) == 1 and len(inst.fragments) == 1
    assert ed_value(inst.graph, inst.family) == 0
    bare = unlabel_instance(g, K3, [], 1)
    assert bare.gadgets.labels() == (STAR,)


def test_unlabel_checks_eta():
    with pytest.raises(ContractViolation):
        unlabel_instance(complete_graph(5), K3, [], 1)


@pytest.mark.parametrize("check", [check_extending_minors, check_extending_ed, check_unlabel_answers,
                                   check_gadgets_nice])
def test_randomized_properties(check):
    for i in range(4):
        ok, info = check(random.Random(f"gadgets:{check.__name__}:{i}"), {})
        assert ok, info


def test_corrupted_family_is_caught():
    ok, _ = check_gadgets_nice(random.Random(5), {"corrupt": True})
    assert not ok

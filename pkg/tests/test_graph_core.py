import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from edfk.errors import GraphParseError, InvalidArgument, StructuralMismatch
from edfk.graph_core import (Graph, are_isomorphic, canonical_key, complete_graph, cycle_graph, forget, glue,
                             glue_with_provenance, parse_graph, path_graph, serialize_graph)
from edfk.oracles import brute_isomorphic


def test_glue_unions_labels_on_shared_index():
    a = Graph([0], (), {0: {"a"}}, {0: 1}, 1, "ab")
    b = Graph([0], (), {0: {"b"}}, {0: 1}, 1, "ab")
    g = glue(a, b)
    assert len(g) == 1
    assert g.labels(g.vertices[0]) == {"a", "b"}
    assert g.bidx(g.vertices[0]) == 1


def test_glue_disjoint_indices_is_disjoint_union():
    a = Graph([0, 1], [(0, 1)], None, {0: 1}, 2)
    b = Graph([0, 1], [(0, 1)], None, {0: 2}, 2)
    g = glue(a, b)
    assert len(g) == 4 and g.number_of_edges() == 2


def test_glue_keeps_shared_edge_once():
    a = Graph([0, 1], [(0, 1)], None, {0: 1, 1: 2}, 2)
    g = glue(a, a)
    assert len(g) == 2 and g.number_of_edges() == 1


def test_glue_capacity_mismatch():
    with pytest.raises(StructuralMismatch):
        glue(Graph([0], (), None, {0: 1}, 1), Graph([0], (), None, {0: 1}, 2))


def test_glue_provenance_maps_every_vertex():
    a = path_graph(3).with_boundary({0: 1, 2: 2}, 2)
    b = cycle_graph(4).with_boundary({1: 2}, 2)
    g, (pa, pb) = glue_with_provenance(a, b)
    assert set(pa.values()) | set(pb.values()) == set(g.vertices)
    assert pa[2] == pb[1]


def test_isomorphism_examples():
    g = path_graph(3)
    assert are_isomorphic(g, g)
    a = Graph([0], (), {0: {"a"}}, universe="ab")
    b = Graph([0], (), {0: {"b"}}, universe="ab")
    assert not are_isomorphic(a, b)
    p1 = Graph("abc", [("a", "b"), ("b", "c")], {"a": {"x"}, "c": {"y"}})
    p2 = Graph("abc", [("a", "b"), ("b", "c")], {"c": {"x"}, "a": {"y"}})
    assert are_isomorphic(p1, p2)


@given(graphs(max_n=6, labels="ab", t=2), st.randoms(use_true_random=False))
def test_canonical_key_invariant_under_relabeling(g, rnd):
    perm = list(g.vertices)
    rnd.shuffle(perm)
    h = g.relabel(dict(zip(g.vertices, perm)))
    assert canonical_key(g) == canonical_key(h)


@given(graphs(max_n=5, labels="a", t=1), graphs(max_n=5, labels="a", t=1))
def test_canonical_key_matches_permutation_search(g, h):
    assert (canonical_key(g) == canonical_key(h)) == brute_isomorphic(g, h)


def test_forget():
    g = Graph([0, 1], [(0, 1)], {1: {"a"}}, {0: 1, 1: 3}, 3)
    f0 = forget(g, 0)
    assert f0.boundary == {} and f0.t == 0
    assert forget(g, 3) == g
    f2 = forget(g, 2)
    assert f2.bidx(1) is None and f2.labels(1) == {"a"} and f2.bidx(0) == 1


def test_parse_examples():
    assert len(parse_graph('{"t":0,"labels":[],"vertices":[],"edges":[]}')) == 0
    with pytest.raises(GraphParseError):
        parse_graph('{"t":0,"labels":[],"vertices":[{"id":"a"},{"id":"b"}],"edges":[["a","b"],["b","a"]]}')
    k3 = parse_graph(serialize_graph(complete_graph(3)))
    assert len(k3) == 3 and k3.number_of_edges() == 3


def test_parse_reports_location():
    with pytest.raises(GraphParseError) as err:
        parse_graph('{"t":1,"labels":[],"vertices":[{"id":"a","bidx":2}],"edges":[]}')
    assert "vertices[0]" in str(err.value)


@given(graphs(max_n=7, labels="abc", t=3))
def test_serialize_roundtrip(g):
    g2 = parse_graph(serialize_graph(g))
    assert serialize_graph(g2) == serialize_graph(g)


def test_invalid_constructions():
    with pytest.raises(InvalidArgument):
        Graph([0, 0])
    with pytest.raises(InvalidArgument):
        Graph([0], [(0, 0)])
    with pytest.raises(InvalidArgument):
        Graph([0, 1], (), None, {0: 1, 1: 1}, 1)
    with pytest.raises(InvalidArgument):
        Graph([0], (), {0: {"z"}}, universe="ab")

import pytest
from hypothesis import given

from conftest import graphs
from edfk.errors import ContractViolation, ResourceLimitExceeded, StructuralMismatch
from edfk.graph_core import Graph, complete_bipartite, complete_graph, cycle_graph, grid_graph, path_graph, star_graph
from edfk.minors import (Flavor, Folio, MinorModel, biconnected_components, ext, find_minor_model, folio, folio_qt,
                         is_biconnected, is_minor, is_saturated, minimize_model, mpcs, mpcs_plus, pcs, saturate,
                         validate_model)
from edfk.oracles import brute_minor_model


def test_k3_in_c4():
    m = find_minor_model(complete_graph(3), cycle_graph(4))
    assert m is not None and validate_model(m, complete_graph(3), cycle_graph(4))
    assert sorted(len(b) for _, b in m.items()) == [1, 1, 2]


def test_labeled_contraction_merges_labels():
    p = Graph([0], (), {0: {"a", "b"}})
    h = Graph("uv", [("u", "v")], {"u": {"a"}, "v": {"b"}})
    m = find_minor_model(p, h, Flavor.LABELED)
    assert m[0] == {"u", "v"}


def test_k5_not_in_grid():
    assert find_minor_model(complete_graph(5), grid_graph(4, 4)) is None


def test_small_cases():
    assert is_minor(Graph([0]), path_graph(2))
    assert not is_minor(path_graph(4), complete_graph(3))
    k4_minus = complete_graph(4).without_edges([(0, 1)])
    assert not is_minor(complete_graph(4), k4_minus)
    assert is_minor(complete_bipartite(2, 3), complete_graph(5))


def test_boundaried_anchor():
    # pattern boundary vertex 1 must sit on host boundary vertex 1
    p = Graph([0, 1], [(0, 1)], None, {0: 1}, 1)
    h = Graph([0, 1, 2], [(1, 2)], None, {0: 1}, 1)
    assert not is_minor(p, h, Flavor.BOUNDARIED)
    h2 = Graph([0, 1, 2], [(0, 1), (1, 2)], None, {0: 1}, 1)
    assert is_minor(p, h2, Flavor.BOUNDARIED)
    with pytest.raises(StructuralMismatch):
        is_minor(p, Graph([0], (), None, {}, 2), Flavor.BOUNDARIED)


def test_ceiling():
    with pytest.raises(ResourceLimitExceeded):
        find_minor_model(complete_graph(4), cycle_graph(12), ceiling=5)


@given(graphs(max_n=4, labels="ab", t=1), graphs(max_n=6, labels="ab", t=1))
def test_agrees_with_partition_oracle(p, h):
    for fl in Flavor:
        m = find_minor_model(p, h, fl)
        o = brute_minor_model(p, h, fl.labeled, fl.boundaried)
        assert (m is None) == (o is None), fl
        if m is not None:
            assert validate_model(m, p, h, fl)


def test_minimize_model():
    k4 = complete_graph(4)
    fat = MinorModel({0: frozenset({0, 3}), 1: frozenset({1}), 2: frozenset({2})})
    small = minimize_model(fat, complete_graph(3), k4)
    assert all(len(b) == 1 for _, b in small.items())
    again = minimize_model(small, complete_graph(3), k4)
    assert again.mapping == small.mapping
    with pytest.raises(ContractViolation):
        minimize_model(MinorModel({0: frozenset({0}), 1: frozenset({0}), 2: frozenset({1})}), complete_graph(3), k4)


def test_minimized_biconnected_pattern_spans_biconnected_subgraph():
    host = grid_graph(3, 3)
    m = minimize_model(find_minor_model(cycle_graph(4), host), cycle_graph(4), host)
    assert is_biconnected(host.induced(m.union()))


def test_blocks():
    tree = star_graph(3)
    assert sorted(map(len, biconnected_components(tree))) == [2, 2, 2]
    assert biconnected_components(complete_graph(4)) == [frozenset(range(4))] or \
        [set(b) for b in biconnected_components(complete_graph(4))] == [set(range(4))]
    bowtie = Graph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert len(biconnected_components(bowtie)) == 2


def test_pieces_of_boundary_edge():
    g = Graph([0, 1], [(0, 1)], None, {0: 1, 1: 2}, 2)
    ps = pcs(g)
    sizes = sorted((len(p), p.number_of_edges()) for p in ps)
    assert sizes == [(1, 0), (1, 0), (2, 1)]


def test_pieces_of_labeled_boundary_vertex():
    g = Graph([0], (), {0: {"a", "b"}}, {0: 1}, 1)
    ps = pcs(g)
    assert len(ps) == 3
    assert sorted(sorted(p.labels(p.vertices[0])) for p in ps) == [[], ["a"], ["b"]]


def test_component_piece_strips_boundary():
    g = Graph([0, 1, 2], [(0, 1), (1, 2), (0, 2)], {0: {"a"}, 1: {"b"}}, {0: 1, 2: 2}, 2)
    comp = [p for p in pcs(g) if any(p.bidx(v) is None for v in p.vertices)]
    assert len(comp) == 1
    piece = comp[0]
    bverts = [v for v in piece.vertices if piece.bidx(v) is not None]
    assert all(not piece.labels(v) for v in bverts)
    assert not piece.has_edge(bverts[0], bverts[1])
    inner = [v for v in piece.vertices if piece.bidx(v) is None][0]
    assert piece.labels(inner) == {"b"}


def test_mpcs_single_piece_and_ext0():
    k3 = complete_graph(3)
    assert list(mpcs(k3).values())[0] == k3 or len(mpcs(k3)) == 1
    assert len(ext([k3], 0)) == 1


def test_mpcs_plus_members_have_boundary_or_are_extensions():
    q = [path_graph(3)]
    base = set(ext(q, 2))
    for key, h in mpcs_plus(q, 2).items():
        assert h.boundary or key in base


def test_folio_single_vertex():
    f = folio(Graph([0]), 1, Flavor.PLAIN)
    assert len(f) == 1


def test_folio_qt_empty_on_q_free_graph():
    q = [complete_graph(3)]
    assert len(folio_qt(path_graph(4), q, 0)) == 0
    assert len(folio_qt(cycle_graph(4), q, 0)) > 0


def _two_boundaried_pool():
    from itertools import combinations
    out = []
    for n in (2, 3):
        pairs = list(combinations(range(n), 2))
        for r in range(len(pairs) + 1):
            for es in combinations(pairs, r):
                out.append(Graph(range(n), es, None, {0: 1, 1: 2}, 2))
    return out


def test_folio_qt_sum_consistency_small():
    from edfk.graph_core import glue
    q = [cycle_graph(3)]
    pool = _two_boundaried_pool()
    fol = [folio_qt(g, q, 2) for g in pool]
    same = [(i, j) for i in range(len(pool)) for j in range(i + 1, len(pool)) if fol[i] == fol[j]]
    assert same
    for i, j in same:
        for b in pool:
            assert folio_qt(glue(pool[i], b), q, 2) == folio_qt(glue(pool[j], b), q, 2)


def test_saturation():
    ab = [Graph([0], (), {0: {"a", "b"}})]
    assert is_saturated(ab, 2, "ab")
    partial = [Graph([0], (), {0: {"a", "b"}}), Graph([0], (), {0: {"a", "c"}})]
    assert not is_saturated(partial, 2, "abc")
    assert is_saturated(saturate("abcd", 2), 2, "abcd")


def test_folio_equality_by_keys():
    f1 = folio(path_graph(3), 3, Flavor.PLAIN)
    f2 = folio(path_graph(3), 3, Flavor.PLAIN)
    assert f1 == f2 and isinstance(f1, Folio)

"""Slow, direct reference implementations used only to cross-check the fast code.

Nothing here shares logic with the search engine: models are found by plain
enumeration of disjoint connected host subsets, isomorphism by permutations.
"""
from __future__ import annotations

from itertools import combinations, permutations

from .graph_core import Graph


def connected_subsets(g: Graph) -> list:
    """Every nonempty vertex set inducing a connected subgraph."""
    verts = g.vertices
    out = []
    for r in range(1, len(verts) + 1):
        for sub in combinations(verts, r):
            if g.induced(sub).is_connected():
                out.append(frozenset(sub))
    return out


def brute_minor_model(pattern: Graph, host: Graph, labeled=False, boundaried=False):
    """Assign each pattern vertex a disjoint connected host set, checking all conditions."""
    pverts = pattern.vertices
    if len(pverts) == 0:
        return {}
    if len(pverts) > len(host):
        return None
    subsets = connected_subsets(host)

    def ok_single(v, s):
        if labeled:
            have = set()
            for h in s:
                have |= host.labels(h)
            if not pattern.labels(v) <= have:
                return False
        if boundaried:
            idx = {host.bidx(h) for h in s if host.bidx(h) is not None}
            want = {pattern.bidx(v)} if pattern.bidx(v) is not None else set()
            if idx != want:
                return False
        return True

    def touches(a, b):
        return any(host.has_edge(x, y) for x in a for y in b)

    cand = {v: [s for s in subsets if ok_single(v, s)] for v in pverts}
    chosen = {}

    def rec(i, used):
        if i == len(pverts):
            return True
        v = pverts[i]
        for s in cand[v]:
            if s & used:
                continue
            if any(w in chosen and not touches(s, chosen[w]) for w in pattern.neighbors(v)):
                continue
            chosen[v] = s
            if rec(i + 1, used | s):
                return True
            del chosen[v]
        return False

    if rec(0, frozenset()):
        return dict(chosen)
    return None


def brute_isomorphic(g1: Graph, g2: Graph) -> bool:
    if len(g1) != len(g2) or g1.number_of_edges() != g2.number_of_edges() or g1.t != g2.t:
        return False
    a, b = g1.vertices, g2.vertices
    e2 = {frozenset(e) for e in g2.edges}
    for perm in permutations(b):
        m = dict(zip(a, perm))
        if any(g1.labels(v) != g2.labels(m[v]) or g1.bidx(v) != g2.bidx(m[v]) for v in a):
            continue
        if all(frozenset((m[u], m[w])) in e2 for u, w in g1.edges):
            return True
    return False


def brute_cut_vertices(g: Graph) -> set:
    base = len(g.components())
    return {v for v in g.vertices if len(g.without([v]).components()) > base}


def brute_ed(g: Graph, free) -> int:
    """Elimination distance by the defining recursion, with no memo or pruning.

    ``free(h)`` says whether a connected graph ``h`` is F-minor-free.
    """
    comps = g.components()
    if len(comps) > 1:
        return max(brute_ed(g.induced(c), free) for c in comps)
    if len(g) == 0 or free(g):
        return 0
    return 1 + min(brute_ed(g.without([v]), free) for v in g.vertices)


def brute_min_deletion(g: Graph, free) -> int:
    """Smallest k such that some k-subset leaves an F-minor-free graph."""
    verts = g.vertices
    for k in range(len(verts) + 1):
        for s in combinations(verts, k):
            if free(g.without(s)):
                return k
    raise AssertionError("unreachable")

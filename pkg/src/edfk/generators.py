"""Seeded random instance generators."""
from __future__ import annotations

import random
from itertools import combinations

from .errors import InvalidArgument
from .graph_core import Graph, complete_graph, complete_bipartite

LABELS = "abcdefgh"


def presets() -> dict:
    k4 = complete_graph(4)
    return {
        "vc": [complete_graph(2)],
        "fvs": [complete_graph(3)],
        "outerplanar": [k4, complete_bipartite(2, 3)],
    }


def random_graph(rng: random.Random, n: int, p: float = 0.4, n_labels: int = 0,
                 label_p: float = 0.3, t: int = 0, boundary_p: float = 0.5,
                 universe=None) -> Graph:
    """Erdos-Renyi graph with optional random labels and a random partial boundary."""
    if n < 0 or t < 0 or not 0 <= p <= 1:
        raise InvalidArgument("bad random graph parameters")
    names = LABELS[:n_labels]
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    labels = {v: {x for x in names if rng.random() < label_p} for v in range(n)}
    verts = list(range(n))
    rng.shuffle(verts)
    idxs = list(range(1, t + 1))
    rng.shuffle(idxs)
    boundary = {}
    for v, i in zip(verts, idxs):
        if rng.random() < boundary_p:
            boundary[v] = i
    uni = frozenset(names) if universe is None else frozenset(universe)
    return Graph(range(n), edges, labels, boundary, t, uni)


def random_connected_graph(rng: random.Random, n: int, p: float = 0.3, **kw) -> Graph:
    """Random spanning tree plus Erdos-Renyi extra edges."""
    g = random_graph(rng, n, p, **kw)
    edges = set(map(tuple, g.edges))
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, w = order[i], order[rng.randrange(i)]
        edges.add((min(u, w), max(u, w)))
    return Graph(range(n), sorted(edges), g.label_map(), g.boundary_map(), g.t, g.universe)


def random_forest(rng: random.Random, n: int, tree_p: float = 0.8) -> list:
    edges = []
    for v in range(1, n):
        if rng.random() < tree_p:
            edges.append((rng.randrange(v), v))
    return edges


def planted_instance(rng: random.Random, n: int, modulator: int, eta: int, family_name: str = "fvs",
                     core_p: float = 0.8, attach_p: float = 0.35, twin_p: float = 0.0):
    """Graph with a planted modulator X so that every component of G - X has ed <= eta.

    Components are forests (for fvs) or edgeless (for vc) with at most ``eta`` extra
    apex vertices layered on top; X vertices attach at random. With ``twin_p`` a
    component may be a copy of the previous one, attachments to X included.
    Returns (graph, X).
    """
    if family_name not in ("fvs", "vc"):
        raise InvalidArgument("planted generator supports the vc and fvs presets")
    if n < 0 or modulator < 0 or eta < 0 or modulator > n:
        raise InvalidArgument("infeasible planted parameters")
    rest = n - modulator
    edges = set()
    verts = list(range(rest))
    comps = []  # (vertices, twin-of index or None)
    pos = 0
    while pos < rest:
        prev = comps[-1][0] if comps else None
        if prev is not None and rest - pos >= len(prev) and rng.random() < twin_p:
            comp = verts[pos:pos + len(prev)]
            pos += len(prev)
            shift = dict(zip(prev, comp))
            for u, w in list(edges):
                if u in shift and w in shift:
                    a, b = shift[u], shift[w]
                    edges.add((min(a, b), max(a, b)))
            comps.append((comp, len(comps) - 1))
            continue
        size = min(rest - pos, rng.randint(1, max(1, min(6, rest))))
        comp = verts[pos:pos + size]
        pos += size
        comps.append((comp, None))
        layers = min(eta, max(0, size - 1))
        apexes, core = comp[:layers], comp[layers:]
        if family_name == "fvs":
            for i in range(1, len(core)):
                if rng.random() < core_p:
                    edges.add((core[rng.randrange(i)], core[i]))
        below = list(core)
        for a in reversed(apexes):
            for v in below:
                if rng.random() < 0.6:
                    edges.add((min(a, v), max(a, v)))
            below.append(a)
    X = list(range(rest, n))
    for x in X:
        for x2 in X:
            if x < x2 and rng.random() < attach_p:
                edges.add((x, x2))
    for i, (comp, twin) in enumerate(comps):
        for j, v in enumerate(comp):
            for x in X:
                hit = (x, comps[twin][0][j]) if twin is not None else None
                if twin is not None:
                    on = (min(hit), max(hit)) in edges
                else:
                    on = rng.random() < attach_p
                if on:
                    edges.add((min(x, v), max(x, v)))
    return Graph(range(n), sorted(edges)), frozenset(X)

"""Labeled boundaried graphs: construction, gluing, forgetting, canonical forms, JSON."""
from __future__ import annotations

import json
from itertools import combinations
from typing import Dict, Hashable, Iterable, Optional

from .errors import GraphParseError, InvalidArgument, StructuralMismatch

Vertex = Hashable


def vkey(v):
    """Total order on opaque vertex ids (ints before strs, then natural order)."""
    return (type(v).__name__, v)


class LabeledBoundariedGraph:
    """Immutable simple graph with per-vertex labelsets and a partial boundary index.

    ``labels`` maps vertices to label collections, ``boundary`` maps vertices to
    indices in ``1..t``. ``universe`` defaults to the union of all labels.
    """

    __slots__ = ("_adj", "_lab", "_bidx", "t", "universe", "_order", "_key", "_canon", "_memo")

    def __init__(self, vertices=(), edges=(), labels=None, boundary=None, t=0, universe=None):
        adj = {}
        for v in vertices:
            if v in adj:
                raise InvalidArgument(f"duplicate vertex {v!r}")
            adj[v] = set()
        for e in edges:
            u, w = e
            if u not in adj or w not in adj:
                raise InvalidArgument(f"edge {e!r} uses an unknown vertex")
            if u == w:
                raise InvalidArgument(f"loop at {u!r}")
            if w in adj[u]:
                raise InvalidArgument(f"parallel edge {e!r}")
            adj[u].add(w)
            adj[w].add(u)
        labels = labels or {}
        lab = {}
        for v in adj:
            lab[v] = frozenset(labels.get(v, ()))
        for v in labels:
            if v not in adj:
                raise InvalidArgument(f"labels given for unknown vertex {v!r}")
        seen = set().union(*lab.values()) if lab else set()
        universe = frozenset(seen) if universe is None else frozenset(universe)
        if not seen <= universe:
            raise InvalidArgument(f"labels {sorted(seen - universe)} outside the universe")
        if t < 0:
            raise InvalidArgument("boundary capacity must be nonnegative")
        bidx = {}
        used = set()
        for v, i in (boundary or {}).items():
            if i is None:
                continue
            if v not in adj:
                raise InvalidArgument(f"boundary index for unknown vertex {v!r}")
            if not isinstance(i, int) or not 1 <= i <= t:
                raise InvalidArgument(f"boundary index {i!r} outside 1..{t}")
            if i in used:
                raise InvalidArgument(f"boundary index {i} used twice")
            used.add(i)
            bidx[v] = i
        self._init(
            {v: frozenset(ns) for v, ns in adj.items()}, lab, bidx, t, universe
        )

    def _init(self, adj, lab, bidx, t, universe):
        self._adj = adj
        self._lab = lab
        self._bidx = bidx
        self.t = t
        self.universe = universe
        self._order = None
        self._key = None
        self._canon = None
        self._memo = None

    def cached(self, name, compute):
        """Per-graph cache for derived values that depend only on the graph."""
        if self._memo is None:
            self._memo = {}
        if name not in self._memo:
            self._memo[name] = compute()
        return self._memo[name]

    @classmethod
    def _raw(cls, adj, lab, bidx, t, universe):
        # trusted constructor: callers guarantee the invariants
        g = cls.__new__(cls)
        g._init(adj, lab, bidx, t, universe)
        return g

    # basic accessors
    @property
    def vertices(self) -> tuple:
        if self._order is None:
            self._order = tuple(sorted(self._adj, key=vkey))
        return self._order

    def __len__(self):
        return len(self._adj)

    def __contains__(self, v):
        return v in self._adj

    def __iter__(self):
        return iter(self.vertices)

    @property
    def edges(self) -> list:
        out = []
        for u in self.vertices:
            ku = vkey(u)
            for w in self._adj[u]:
                if ku < vkey(w):
                    out.append((u, w))
        out.sort(key=lambda e: (vkey(e[0]), vkey(e[1])))
        return out

    def number_of_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, w) -> bool:
        return w in self._adj.get(u, ())

    def labels(self, v) -> frozenset:
        return self._lab[v]

    def bidx(self, v) -> Optional[int]:
        return self._bidx.get(v)

    @property
    def boundary(self) -> Dict[int, Vertex]:
        """Map from boundary index to vertex."""
        return {i: v for v, i in self._bidx.items()}

    @property
    def boundary_vertices(self) -> frozenset:
        return frozenset(self._bidx)

    def label_map(self) -> dict:
        return dict(self._lab)

    def boundary_map(self) -> dict:
        return dict(self._bidx)

    def adjacency(self) -> dict:
        return dict(self._adj)

    def used_labels(self) -> frozenset:
        return frozenset().union(*self._lab.values()) if self._lab else frozenset()

    def is_labeled(self) -> bool:
        return any(self._lab.values())

    # derived graphs
    def induced(self, keep) -> "LabeledBoundariedGraph":
        keep = set(keep)
        adj = {v: self._adj[v] & keep for v in self._adj if v in keep}
        lab = {v: self._lab[v] for v in adj}
        bidx = {v: i for v, i in self._bidx.items() if v in keep}
        return LabeledBoundariedGraph._raw(adj, lab, bidx, self.t, self.universe)

    def without(self, remove) -> "LabeledBoundariedGraph":
        remove = set(remove)
        return self.induced(v for v in self._adj if v not in remove)

    def without_edges(self, edges) -> "LabeledBoundariedGraph":
        adj = {v: set(ns) for v, ns in self._adj.items()}
        for u, w in edges:
            adj[u].discard(w)
            adj[w].discard(u)
        return LabeledBoundariedGraph._raw(
            {v: frozenset(ns) for v, ns in adj.items()}, dict(self._lab), dict(self._bidx),
            self.t, self.universe)

    def with_labels(self, labels: dict, universe=None) -> "LabeledBoundariedGraph":
        universe = self.universe if universe is None else frozenset(universe)
        lab = {v: frozenset(labels.get(v, ())) for v in self._adj}
        for s in lab.values():
            if not s <= universe:
                raise InvalidArgument("labels outside the universe")
        return LabeledBoundariedGraph._raw(dict(self._adj), lab, dict(self._bidx), self.t, universe)

    def strip_labels(self, universe=frozenset()) -> "LabeledBoundariedGraph":
        lab = {v: frozenset() for v in self._adj}
        return LabeledBoundariedGraph._raw(
            dict(self._adj), lab, dict(self._bidx), self.t, frozenset(universe))

    def restrict_labels(self, allowed) -> "LabeledBoundariedGraph":
        allowed = frozenset(allowed)
        lab = {v: s & allowed for v, s in self._lab.items()}
        return LabeledBoundariedGraph._raw(
            dict(self._adj), lab, dict(self._bidx), self.t, self.universe & allowed)

    def with_boundary(self, boundary: dict, t=None) -> "LabeledBoundariedGraph":
        t = self.t if t is None else t
        return LabeledBoundariedGraph(
            self.vertices, self.edges, self._lab, boundary, t, self.universe)

    def with_universe(self, universe) -> "LabeledBoundariedGraph":
        universe = frozenset(universe)
        if not self.used_labels() <= universe:
            raise InvalidArgument("labels outside the universe")
        return LabeledBoundariedGraph._raw(
            dict(self._adj), dict(self._lab), dict(self._bidx), self.t, universe)

    def relabel(self, mapping) -> "LabeledBoundariedGraph":
        """Rename vertices through an injective ``mapping``."""
        if len(set(mapping[v] for v in self._adj)) != len(self._adj):
            raise InvalidArgument("vertex renaming is not injective")
        adj = {mapping[v]: frozenset(mapping[w] for w in ns) for v, ns in self._adj.items()}
        lab = {mapping[v]: s for v, s in self._lab.items()}
        bidx = {mapping[v]: i for v, i in self._bidx.items()}
        return LabeledBoundariedGraph._raw(adj, lab, bidx, self.t, self.universe)

    def integer_ids(self):
        """Copy with ids 0..n-1 in vertex order, plus the old-to-new map."""
        mapping = {v: i for i, v in enumerate(self.vertices)}
        return self.relabel(mapping), mapping

    def components(self) -> list:
        seen = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self._adj) > 0 and len(self.components()) == 1

    def is_acyclic(self) -> bool:
        return self.number_of_edges() == len(self._adj) - len(self.components())

    # identity
    def _structure(self):
        return (
            self.t,
            self.universe,
            frozenset((v, self._lab[v], self._bidx.get(v)) for v in self._adj),
            frozenset(frozenset(e) for e in self.edges),
        )

    def __eq__(self, other):
        if not isinstance(other, LabeledBoundariedGraph):
            return NotImplemented
        return self._structure() == other._structure()

    def __hash__(self):
        return hash(self._structure())

    def __repr__(self):
        parts = []
        for v in self.vertices:
            s = repr(v)
            if self._lab[v]:
                s += "{" + ",".join(sorted(self._lab[v])) + "}"
            if v in self._bidx:
                s += f"#{self._bidx[v]}"
            parts.append(s)
        es = " ".join(f"{u!r}-{w!r}" for u, w in self.edges)
        return f"<Graph t={self.t} V=[{' '.join(parts)}] E=[{es}]>"


Graph = LabeledBoundariedGraph


# ---------------------------------------------------------------- gluing


def glue_with_provenance(g1: Graph, g2: Graph):
    """Glue two boundaried graphs; also return old-to-new id maps for both sides."""
    if g1.t != g2.t:
        raise StructuralMismatch(f"boundary capacities differ ({g1.t} vs {g2.t})")
    if g1.universe != g2.universe:
        raise StructuralMismatch("label universes differ")
    p1 = {v: i for i, v in enumerate(g1.vertices)}
    nxt = len(p1)
    b1 = g1.boundary
    p2 = {}
    for v in g2.vertices:
        i = g2.bidx(v)
        if i is not None and i in b1:
            p2[v] = p1[b1[i]]
        else:
            p2[v] = nxt
            nxt += 1
    adj = {i: set() for i in range(nxt)}
    lab = {i: frozenset() for i in range(nxt)}
    bidx = {}
    for g, p in ((g1, p1), (g2, p2)):
        for v in g.vertices:
            nv = p[v]
            lab[nv] = lab[nv] | g.labels(v)
            i = g.bidx(v)
            if i is not None:
                bidx[nv] = i
            for w in g.neighbors(v):
                adj[nv].add(p[w])
    g = Graph._raw({v: frozenset(ns) for v, ns in adj.items()}, lab, bidx, g1.t, g1.universe)
    return g, (p1, p2)


def glue(g1: Graph, g2: Graph) -> Graph:
    return glue_with_provenance(g1, g2)[0]


def glue_all(graphs, t=None, universe=None) -> Graph:
    graphs = list(graphs)
    if not graphs:
        return empty_graph(t or 0, universe or ())
    out = graphs[0]
    for g in graphs[1:]:
        out = glue(out, g)
    return out


def forget(g: Graph, k: int) -> Graph:
    """Drop boundary indices above ``k``; the result is ``min(k, t)``-boundaried."""
    if k < 0:
        raise InvalidArgument("forget needs a nonnegative index bound")
    k = min(k, g.t)
    bidx = {v: i for v, i in g.boundary_map().items() if i <= k}
    return Graph._raw(g.adjacency(), g.label_map(), bidx, k, g.universe)


# ---------------------------------------------------------------- canonical form


def _refine(adj, colors, verts):
    ncls = len(set(colors.values()))
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in verts}
        ranks = {s: r for r, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in verts}
        if len(ranks) == ncls:
            return new
        colors = new
        ncls = len(ranks)


def _canonical(g: Graph):
    verts = list(g.vertices)
    n = len(verts)
    adj = g.adjacency()
    init = {v: (g.bidx(v) or 0, tuple(sorted(g.labels(v))), len(adj[v])) for v in verts}
    ranks = {s: r for r, s in enumerate(sorted(set(init.values())))}
    colors = _refine(adj, {v: ranks[init[v]] for v in verts}, verts)
    best = [None, None]
    elist = g.edges

    def leaf(colors):
        order = sorted(verts, key=lambda v: colors[v])
        pos = {v: i for i, v in enumerate(order)}
        code = (
            tuple((g.bidx(v) or 0, tuple(sorted(g.labels(v)))) for v in order),
            tuple(sorted((min(pos[u], pos[w]), max(pos[u], pos[w])) for u, w in elist)),
        )
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = order

    def search(colors):
        cells = {}
        for v in verts:
            cells.setdefault(colors[v], []).append(v)
        if len(cells) == n:
            leaf(colors)
            return
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        cell = sorted(cells[target], key=vkey)
        reps = []
        for v in cell:
            if not any((adj[v] - {r}) == (adj[r] - {v}) for r in reps):
                reps.append(v)
        for v in reps:
            ind = {u: (colors[u], 0 if u == v else 1) for u in verts}
            rk = {s: r for r, s in enumerate(sorted(set(ind.values())))}
            search(_refine(adj, {u: rk[ind[u]] for u in verts}, verts))

    if n:
        search(colors)
    else:
        best[0] = ((), ())
        best[1] = []
    # the label universe is context, not structure: it stays out of the key
    key = repr((n, g.t, best[0])).encode()
    return key, tuple(best[1])


def canonical_key(g: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic (labels and indices kept)."""
    if g._key is None:
        g._key, g._canon = _canonical(g)
    return g._key


def canonical_order(g: Graph) -> tuple:
    """Vertices listed in the order fixed by the canonical form."""
    if g._canon is None:
        g._key, g._canon = _canonical(g)
    return g._canon


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if len(g1) != len(g2) or g1.number_of_edges() != g2.number_of_edges():
        return False
    return canonical_key(g1) == canonical_key(g2)


def canonical_graph(g: Graph) -> Graph:
    """Isomorphic copy whose ids 0..n-1 follow the canonical order."""
    order = canonical_order(g)
    return g.relabel({v: i for i, v in enumerate(order)})


# ---------------------------------------------------------------- builders


def empty_graph(t=0, universe=()) -> Graph:
    return Graph((), (), None, None, t, universe)


def from_edges(n: int, edges: Iterable, labels=None, boundary=None, t=0, universe=None) -> Graph:
    return Graph(range(n), edges, labels, boundary, t, universe)


def complete_graph(n: int) -> Graph:
    return from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidArgument("a cycle needs at least 3 vertices")
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def grid_graph(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return from_edges(rows * cols, edges)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union with integer ids (boundary of ``g2`` dropped if it clashes)."""
    a, _ = g1.integer_ids()
    b, m = g2.integer_ids()
    off = len(a)
    b = b.relabel({v: v + off for v in b.vertices})
    labels = {**a.label_map(), **b.label_map()}
    bnd = a.boundary_map()
    used = set(bnd.values())
    for v, i in b.boundary_map().items():
        if i not in used:
            bnd[v] = i
    return Graph(list(a.vertices) + list(b.vertices), a.edges + b.edges, labels, bnd,
                 max(g1.t, g2.t), g1.universe | g2.universe)


# ---------------------------------------------------------------- JSON


def graph_to_dict(g: Graph) -> dict:
    verts = g.vertices
    ids = {v: str(v) for v in verts}
    if len(set(ids.values())) != len(ids):
        raise InvalidArgument("vertex ids collide after conversion to strings")
    order = sorted(verts, key=lambda v: ids[v])
    edges = sorted(tuple(sorted((ids[u], ids[w]))) for u, w in g.edges)
    return {
        "t": g.t,
        "labels": sorted(g.universe),
        "vertices": [
            {"id": ids[v], "lab": sorted(g.labels(v)), "bidx": g.bidx(v)} for v in order
        ],
        "edges": [list(e) for e in edges],
    }


def serialize_graph(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), sort_keys=True, separators=(",", ":"))


def graph_from_dict(doc, where="$") -> Graph:
    if not isinstance(doc, dict):
        raise GraphParseError("graph document must be an object", where)
    for field in ("t", "labels", "vertices", "edges"):
        if field not in doc:
            raise GraphParseError(f"missing field {field!r}", where)
    t = doc["t"]
    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise GraphParseError("t must be a nonnegative integer", f"{where}.t")
    universe = doc["labels"]
    if not isinstance(universe, list) or not all(isinstance(x, str) for x in universe):
        raise GraphParseError("labels must be a list of strings", f"{where}.labels")
    if len(set(universe)) != len(universe):
        raise GraphParseError("duplicate label in universe", f"{where}.labels")
    universe = frozenset(universe)
    if not isinstance(doc["vertices"], list):
        raise GraphParseError("vertices must be a list", f"{where}.vertices")
    ids, labels, bnd, seen_idx = [], {}, {}, {}
    for i, rec in enumerate(doc["vertices"]):
        loc = f"{where}.vertices[{i}]"
        if not isinstance(rec, dict) or "id" not in rec:
            raise GraphParseError("vertex record needs an id", loc)
        vid = rec["id"]
        if not isinstance(vid, str):
            raise GraphParseError("vertex id must be a string", f"{loc}.id")
        if vid in labels:
            raise GraphParseError(f"duplicate vertex id {vid!r}", f"{loc}.id")
        lab = rec.get("lab", [])
        if not isinstance(lab, list) or not all(isinstance(x, str) for x in lab):
            raise GraphParseError("lab must be a list of strings", f"{loc}.lab")
        bad = set(lab) - universe
        if bad:
            raise GraphParseError(f"labels {sorted(bad)} not declared", f"{loc}.lab")
        b = rec.get("bidx")
        if b is not None:
            if not isinstance(b, int) or isinstance(b, bool) or not 1 <= b <= t:
                raise GraphParseError(f"bidx {b!r} outside 1..{t}", f"{loc}.bidx")
            if b in seen_idx:
                raise GraphParseError(f"bidx {b} reused", f"{loc}.bidx")
            seen_idx[b] = vid
            bnd[vid] = b
        ids.append(vid)
        labels[vid] = lab
    if not isinstance(doc["edges"], list):
        raise GraphParseError("edges must be a list", f"{where}.edges")
    edges, seen_e = [], set()
    for i, e in enumerate(doc["edges"]):
        loc = f"{where}.edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise GraphParseError("edge must be a pair of ids", loc)
        u, w = e
        if u not in labels or w not in labels:
            raise GraphParseError("edge uses an unknown vertex", loc)
        if u == w:
            raise GraphParseError("loop edge", loc)
        key = frozenset(e)
        if key in seen_e:
            raise GraphParseError(f"duplicate edge {u}-{w}", loc)
        seen_e.add(key)
        edges.append((u, w))
    return Graph(ids, edges, labels, bnd, t, universe)


def parse_graph(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return graph_from_dict(doc)

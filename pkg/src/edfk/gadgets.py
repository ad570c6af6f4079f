"""Gadget families, graph extension and the labeled-to-unlabeled reduction."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Optional

from .errors import ContractViolation, InvalidArgument
from .graph_core import Graph, canonical_order
from .minors import Flavor, MinorModel, is_biconnected, is_minor

STAR = "*"


@dataclass(frozen=True)
class GadgetsFunction:
    gadgets: Dict[str, Graph]
    order: tuple  # labels sorted, STAR last; position = ordering value
    clique: int

    def __getitem__(self, label) -> Graph:
        return self.gadgets[label]

    def labels(self) -> tuple:
        return self.order

    def to_json(self) -> dict:
        from .graph_core import graph_to_dict
        return {
            "order": list(self.order),
            "clique": self.clique,
            "gadgets": {x: graph_to_dict(self.gadgets[x]) for x in self.order},
        }


def family_norm(family) -> int:
    return max((len(h) for h in family), default=0)


def _base_part(n_labels: int, f: int):
    """Planar 2-connected piece: a 3-row grid followed by a 2-row ladder of width 2f."""
    w3 = n_labels - f + 2
    w2 = 2 * f
    ids = {}
    for c in range(w3):
        for r in range(3):
            ids[("g", r, c)] = len(ids)
    for c in range(w2):
        for r in range(2):
            ids[("l", r, c)] = len(ids)
    edges = []
    for c in range(w3):
        for r in range(3):
            if r + 1 < 3:
                edges.append((ids[("g", r, c)], ids[("g", r + 1, c)]))
            if c + 1 < w3:
                edges.append((ids[("g", r, c)], ids[("g", r, c + 1)]))
    for c in range(w2):
        edges.append((ids[("l", 0, c)], ids[("l", 1, c)]))
        if c + 1 < w2:
            for r in range(2):
                edges.append((ids[("l", r, c)], ids[("l", r, c + 1)]))
    if w2:
        # the ladder hangs off the top two rows of the last grid column
        for r in range(2):
            edges.append((ids[("g", r, w3 - 1)], ids[("l", r, 0)]))
    return len(ids), edges, ids


def _gadget(n_labels: int, f: int, clique: int) -> Graph:
    n, edges, ids = _base_part(n_labels, f)
    kv = list(range(n, n + clique))
    edges = list(edges) + list(combinations(kv, 2))
    edges.append((ids[("g", 0, 0)], kv[0]))
    edges.append((ids[("g", 0, 1)], kv[1]))
    g = Graph(range(n + clique), edges)
    first = canonical_order(g)[0]
    return g.with_boundary({first: 1}, 1)


def build_nice_gadgets(universe: Iterable[str], family, eta: int, host_bound=None) -> GadgetsFunction:
    """One 1-boundaried gadget per label and one for STAR.

    ``host_bound`` is accepted for interface symmetry; the clique size alone
    keeps gadgets out of any host with bounded elimination distance.
    """
    if eta < 0:
        raise InvalidArgument("eta must be nonnegative")
    labels = sorted(set(universe))
    if STAR in labels:
        raise InvalidArgument(f"label {STAR!r} is reserved")
    order = tuple(labels) + (STAR,)
    clique = max(7, family_norm(family) + eta)
    gadgets = {x: _gadget(len(labels), f, clique) for f, x in enumerate(order)}
    return GadgetsFunction(gadgets, order, clique)


def verify_nice(gf: GadgetsFunction, host: Optional[Graph] = None, ceiling=None) -> bool:
    gs = [gf[x] for x in gf.order]
    for g in gs:
        if not is_biconnected(g):
            return False
    for a in range(len(gs)):
        for b in range(len(gs)):
            if a != b and is_minor(_plain(gs[a]), _plain(gs[b]), ceiling=ceiling):
                return False
    if host is not None:
        h = _plain(host)
        for g in gs:
            if is_minor(_plain(g), h, ceiling=ceiling):
                return False
    return True


def _plain(g: Graph) -> Graph:
    return Graph._raw(g.adjacency(), {v: frozenset() for v in g.vertices}, {}, 0, frozenset())


@dataclass
class Provenance:
    """Where every vertex of an extended graph came from."""

    original: Dict = field(default_factory=dict)   # original vertex -> new id
    copies: list = field(default_factory=list)     # (anchor, label, {gadget vertex: new id})

    def origin(self) -> dict:
        """new id -> (anchor, label or None, gadget vertex or None)."""
        out = {i: (v, None, None) for v, i in self.original.items()}
        for anchor, label, m in self.copies:
            for gv, i in m.items():
                out.setdefault(i, (anchor, label, gv))
        return out

    def to_json(self) -> dict:
        return {
            "original": {str(v): i for v, i in self.original.items()},
            "copies": [
                {"anchor": str(a), "label": x, "map": {str(k): v for k, v in sorted(m.items())}}
                for a, x, m in self.copies
            ],
        }


def extend_graph(g: Graph, gf: GadgetsFunction):
    """Glue a STAR gadget to every vertex plus one gadget per label; drop all labels."""
    for x in g.used_labels():
        if x not in gf.gadgets or x == STAR:
            raise InvalidArgument(f"no gadget for label {x!r}")
    prov = Provenance()
    adj: Dict[int, set] = {}
    for v in g.vertices:
        i = len(adj)
        prov.original[v] = i
        adj[i] = set()
    for u, w in g.edges:
        adj[prov.original[u]].add(prov.original[w])
        adj[prov.original[w]].add(prov.original[u])
    for v in g.vertices:
        for x in sorted(g.labels(v)) + [STAR]:
            gad = gf[x]
            root = next(iter(gad.boundary_vertices))
            m = {root: prov.original[v]}
            for gv in gad.vertices:
                if gv != root:
                    m[gv] = len(adj)
                    adj[m[gv]] = set()
            for a, b in gad.edges:
                adj[m[a]].add(m[b])
                adj[m[b]].add(m[a])
            prov.copies.append((v, x, m))
    bidx = {prov.original[v]: i for v, i in g.boundary_map().items()}
    out = Graph._raw({v: frozenset(s) for v, s in adj.items()},
                     {v: frozenset() for v in adj}, bidx, g.t, frozenset())
    return out, prov


def gadget_vertices(prov: Provenance, v) -> set:
    """The anchor itself plus every vertex of the copies glued to it."""
    out = {prov.original[v]}
    for anchor, _, m in prov.copies:
        if anchor == v:
            out.update(m.values())
    return out


def project_model(model, h_prov: Provenance, g_prov: Provenance) -> MinorModel:
    """Labeled model of H in G read off a model of H+ in G+ (keep only original host vertices)."""
    back = {i: v for v, i in g_prov.original.items()}
    mapping = {}
    for v in h_prov.original:
        hit = set()
        for w in gadget_vertices(h_prov, v):
            hit |= model[w]
        mapping[v] = frozenset(back[i] for i in hit if i in back)
    return MinorModel(mapping, Flavor.LABELED)


def gadgets_land_on_gadgets(model, h_prov: Provenance, g_prov: Provenance) -> bool:
    """Each glued copy in the pattern covers a whole host copy of the same gadget (anchor aside)."""
    for _, label, m in h_prov.copies:
        covered = set()
        for w in m.values():
            covered |= model[w]
        if not any(x == label and set(m2.values()) - {g_prov.original[a]} <= covered
                   for a, x, m2 in g_prov.copies):
            return False
    return True


def restrict_labels(g: Graph, keep) -> Graph:
    """Drop every label outside ``keep`` (labels not occurring in Q never matter)."""
    return g.restrict_labels(frozenset(keep))


@dataclass(frozen=True)
class UnlabeledInstance:
    graph: Graph
    family: tuple
    fragments: tuple
    gadgets: GadgetsFunction
    provenance: Provenance


def unlabel_instance(g: Graph, family, q_set, eta: int, check_ed: bool = True) -> UnlabeledInstance:
    """Labeled instance to an equivalent unlabeled one via a shared gadget family."""
    from .elim import ed_value
    family = list(family)
    q_set = list(q_set)
    if check_ed and ed_value(_plain(g), family) > eta:
        raise ContractViolation(f"elimination distance of the input exceeds eta={eta}")
    used = frozenset().union(*(q.used_labels() for q in q_set)) if q_set else frozenset()
    g2 = restrict_labels(g, used)
    gf = build_nice_gadgets(used, family, eta)
    g_plus, prov = extend_graph(g2, gf)
    f_plus = tuple(extend_graph(_plain(h), gf)[0] for h in family)
    q_plus = tuple(extend_graph(q.restrict_labels(used), gf)[0] for q in q_set)
    return UnlabeledInstance(g_plus, f_plus, q_plus, gf, prov)

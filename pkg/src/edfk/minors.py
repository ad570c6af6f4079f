"""Minor models in four flavors, folios, and the piece/multipiece/extension operators."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Optional

import networkx as nx

from . import _engine
from .errors import ContractViolation, InvalidArgument, StructuralMismatch
from .graph_core import Graph, canonical_key, graph_to_dict, vkey


class Flavor(enum.Enum):
    PLAIN = "plain"
    LABELED = "labeled"
    BOUNDARIED = "boundaried"
    BOUNDARIED_LABELED = "boundaried-labeled"

    @property
    def labeled(self) -> bool:
        return self in (Flavor.LABELED, Flavor.BOUNDARIED_LABELED)

    @property
    def boundaried(self) -> bool:
        return self in (Flavor.BOUNDARIED, Flavor.BOUNDARIED_LABELED)

    @classmethod
    def of(cls, labeled: bool, boundaried: bool) -> "Flavor":
        if labeled and boundaried:
            return cls.BOUNDARIED_LABELED
        if labeled:
            return cls.LABELED
        if boundaried:
            return cls.BOUNDARIED
        return cls.PLAIN


@dataclass(frozen=True)
class MinorModel:
    """Branch sets of a minor model; ``mapping`` sends pattern vertices to host vertex sets."""

    mapping: Dict
    flavor: Flavor = Flavor.PLAIN

    def __getitem__(self, v) -> FrozenSet:
        return self.mapping[v]

    def items(self):
        return self.mapping.items()

    def union(self, vs=None) -> frozenset:
        vs = self.mapping if vs is None else vs
        out = set()
        for v in vs:
            out |= self.mapping[v]
        return frozenset(out)

    def __len__(self):
        return len(self.mapping)


# ---------------------------------------------------------------- validation


def _connected(host: Graph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in host.neighbors(u):
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def validate_model(model, pattern: Graph, host: Graph, flavor: Flavor = None) -> bool:
    """Check every condition of a (labeled/boundaried) minor model."""
    if isinstance(model, MinorModel):
        flavor = model.flavor if flavor is None else flavor
        mapping = model.mapping
    else:
        mapping = model
    flavor = flavor or Flavor.PLAIN
    if set(mapping) != set(pattern.vertices):
        return False
    used = set()
    for v, bs in mapping.items():
        bs = set(bs)
        if not bs or not bs <= set(host.vertices) or bs & used:
            return False
        used |= bs
        if not _connected(host, bs):
            return False
        if flavor.labeled:
            have = set()
            for h in bs:
                have |= host.labels(h)
            if not pattern.labels(v) <= have:
                return False
        if flavor.boundaried:
            idx = {host.bidx(h) for h in bs if host.bidx(h) is not None}
            want = {pattern.bidx(v)} if pattern.bidx(v) is not None else set()
            if idx != want:
                return False
    for u, w in pattern.edges:
        bu, bw = mapping[u], mapping[w]
        if not any(x in bw for h in bu for x in host.neighbors(h)):
            return False
    return True


# ---------------------------------------------------------------- search


def _check_flavor(pattern, host, flavor):
    if flavor.boundaried and pattern.t != host.t:
        raise StructuralMismatch(
            f"boundaried minor test needs equal capacities ({pattern.t} vs {host.t})")


def _planar(g: Graph) -> bool:
    def compute():
        G = nx.Graph()
        G.add_nodes_from(g.vertices)
        G.add_edges_from(g.edges)
        return nx.check_planarity(G)[0]
    return g.cached("planar", compute)


def _quick_reject(pattern: Graph, host: Graph) -> bool:
    if len(pattern) > len(host):
        return True
    if pattern.number_of_edges() > host.number_of_edges():
        return True
    # planarity is minor-closed
    if pattern.number_of_edges() >= 9 and not _planar(pattern) and _planar(host):
        return True
    return False


def _prepare(pattern: Graph, host: Graph, flavor: Flavor):
    hverts = host.vertices
    hidx = {v: i for i, v in enumerate(hverts)}
    pverts = pattern.vertices
    pidx = {v: i for i, v in enumerate(pverts)}
    hadj = [0] * len(hverts)
    for v, i in hidx.items():
        m = 0
        for w in host.neighbors(v):
            m |= 1 << hidx[w]
        hadj[i] = m
    padj = [0] * len(pverts)
    for v, i in pidx.items():
        m = 0
        for w in pattern.neighbors(v):
            m |= 1 << pidx[w]
        padj[i] = m
    lbit = {}
    req = {}
    hlab = [0] * len(hverts)
    if flavor.labeled:
        for v in pverts:
            for x in pattern.labels(v):
                lbit.setdefault(x, 1 << len(lbit))
        for v, i in pidx.items():
            m = 0
            for x in pattern.labels(v):
                m |= lbit[x]
            if m:
                req[i] = m
        for v, i in hidx.items():
            m = 0
            for x in host.labels(v):
                if x in lbit:
                    m |= lbit[x]
            hlab[i] = m
    M = (1 << len(hverts)) - 1
    anc = {}
    if flavor.boundaried:
        hb = host.boundary
        pb = pattern.boundary
        for i, v in pb.items():
            if i not in hb:
                return None
            anc[pidx[v]] = 1 << hidx[hb[i]]
        for i, v in hb.items():
            if i not in pb:
                M &= ~(1 << hidx[v])
    return hverts, pverts, hadj, hlab, padj, M, anc, req


def find_minor_model(pattern: Graph, host: Graph, flavor: Flavor = Flavor.PLAIN,
                     ceiling=None) -> Optional[MinorModel]:
    """Exhaustive search for a minor model; ``None`` iff none exists."""
    _check_flavor(pattern, host, flavor)
    if len(pattern) == 0:
        return MinorModel({}, flavor)
    if _quick_reject(pattern, host):
        return None
    prep = _prepare(pattern, host, flavor)
    if prep is None:
        return None
    hverts, pverts, hadj, hlab, padj, M, anc, req = prep
    search = _engine.Search(hadj, hlab, padj, ceiling)
    P = (1 << len(pverts)) - 1
    res = search.solve(P, M, anc, req)
    if res is None:
        return None
    mapping = {pverts[i]: frozenset(hverts[j] for j in _engine.bits(S)) for i, S in res.items()}
    return MinorModel(mapping, flavor)


def _plain_host(pattern: Graph, host: Graph, flavor: Flavor):
    """Host for an equivalent plain problem, or None when side conditions matter."""
    if flavor.labeled and pattern.is_labeled():
        return None
    if flavor.boundaried:
        if pattern.boundary_vertices:
            return None
        if host.boundary_vertices:
            return host.without(host.boundary_vertices)
    return host


def _shortcut(pattern: Graph, host: Graph):
    """Exact answers for a few tiny connected patterns; None if not applicable."""
    n, m = len(pattern), pattern.number_of_edges()
    if n > 4:
        return None
    if n == 1:
        return len(host) >= 1
    if n == 2:
        return host.number_of_edges() >= 1 if m == 1 else len(host) >= 2
    if n == 3 and m == 3:
        return not host.is_acyclic()
    if n == 3 and m == 2:
        return any(len(c) >= 3 for c in host.components())
    if n == 4 and m == 3 and pattern.is_connected():
        degs = sorted(pattern.degree(v) for v in pattern.vertices)
        if degs == [1, 1, 1, 3]:
            return any(host.degree(v) >= 3 for v in host.vertices)
        # path on four vertices: some component with >= 4 vertices is not a star
        for c in host.components():
            if len(c) >= 4:
                sub = host.induced(c)
                if not any(sub.degree(v) == len(c) - 1 for v in c) or sub.number_of_edges() != len(c) - 1:
                    return True
        return False
    return None


def is_minor(pattern: Graph, host: Graph, flavor: Flavor = Flavor.PLAIN, ceiling=None) -> bool:
    _check_flavor(pattern, host, flavor)
    plain = _plain_host(pattern, host, flavor)
    if plain is not None:
        quick = _shortcut(pattern, plain)
        if quick is not None:
            return quick
    return find_minor_model(pattern, host, flavor, ceiling) is not None


def is_minor_free(g: Graph, family: Iterable[Graph], flavor: Flavor = Flavor.PLAIN, ceiling=None) -> bool:
    return not any(is_minor(h, g, flavor, ceiling) for h in family)


def minimize_model(model: MinorModel, pattern: Graph, host: Graph) -> MinorModel:
    """Greedily drop single host vertices from branch sets until no drop is possible."""
    if not validate_model(model, pattern, host):
        raise ContractViolation("minimize_model needs a valid model")
    mapping = {v: frozenset(s) for v, s in model.mapping.items()}
    changed = True
    while changed:
        changed = False
        for v in pattern.vertices:
            for h in sorted(mapping[v], key=vkey):
                if len(mapping[v]) == 1:
                    break
                trial = dict(mapping)
                trial[v] = mapping[v] - {h}
                if validate_model(trial, pattern, host, model.flavor):
                    mapping = trial
                    changed = True
    return MinorModel(mapping, model.flavor)


def biconnected_components(g: Graph) -> list:
    """Blocks of ``g`` as vertex sets; isolated vertices form their own block."""
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    out = [frozenset(b) for b in nx.biconnected_components(G)]
    out += [frozenset([v]) for v in g.vertices if g.degree(v) == 0]
    return sorted(out, key=lambda b: sorted(vkey(v) for v in b))


def is_biconnected(g: Graph) -> bool:
    """At least two vertices, connected, and no cut vertex (K2 counts)."""
    if len(g) < 2 or not g.is_connected():
        return False
    return len(biconnected_components(g)) == 1


# ---------------------------------------------------------------- pieces


def pcs(g: Graph) -> list:
    """Pieces of a boundaried labeled graph (a multiset, returned as a list)."""
    out = []
    bnd = g.boundary_vertices
    t, uni = g.t, g.universe
    for v in sorted(bnd, key=vkey):
        i = g.bidx(v)
        out.append(Graph._raw({v: frozenset()}, {v: frozenset()}, {v: i}, t, uni))
        for x in sorted(g.labels(v)):
            out.append(Graph._raw({v: frozenset()}, {v: frozenset([x])}, {v: i}, t, uni))
    for u, w in g.edges:
        if u in bnd and w in bnd:
            out.append(Graph._raw(
                {u: frozenset([w]), w: frozenset([u])},
                {u: frozenset(), w: frozenset()},
                {u: g.bidx(u), w: g.bidx(w)}, t, uni))
    interior = g.without(bnd)
    for comp in interior.components():
        nb = set()
        for v in comp:
            nb |= g.neighbors(v) & bnd
        keep = set(comp) | nb
        adj = {v: frozenset(w for w in g.neighbors(v) if w in keep and not (v in nb and w in nb))
               for v in keep}
        lab = {v: (frozenset() if v in nb else g.labels(v)) for v in keep}
        bidx = {v: g.bidx(v) for v in nb}
        out.append(Graph._raw(adj, lab, bidx, t, uni))
    return out


def mpcs(g: Graph) -> dict:
    """Multipieces: glue of every nonempty subset of pieces, one graph per isomorphism class.

    Generated directly: a multipiece is fixed by the chosen interior
    components, the boundary vertices present, the boundary edges kept and the
    labels kept on boundary vertices.
    """
    bnd = sorted(g.boundary_vertices, key=vkey)
    comps = g.without(bnd).components()
    comp_nb = []
    for comp in comps:
        nb = set()
        for v in comp:
            nb |= g.neighbors(v) & set(bnd)
        comp_nb.append(frozenset(nb))
    bedges = [(u, w) for u, w in g.edges if u in g.boundary_vertices and w in g.boundary_vertices]
    label_pairs = [(v, x) for v in bnd for x in sorted(g.labels(v))]
    out = {}
    for rc in range(len(comps) + 1):
        for chosen in combinations(range(len(comps)), rc):
            inner = set()
            need = set()
            for c in chosen:
                inner |= comps[c]
                need |= comp_nb[c]
            for re in range(len(bedges) + 1):
                for es in combinations(bedges, re):
                    need_e = set(need)
                    for u, w in es:
                        need_e.add(u)
                        need_e.add(w)
                    for rl in range(len(label_pairs) + 1):
                        for ls in combinations(label_pairs, rl):
                            need_l = need_e | {v for v, _ in ls}
                            rest = [v for v in bnd if v not in need_l]
                            for rx in range(len(rest) + 1):
                                for extra in combinations(rest, rx):
                                    present = need_l | set(extra)
                                    if not present and not inner:
                                        continue
                                    h = _assemble(g, inner, present, es, ls)
                                    out.setdefault(canonical_key(h), h)
    return out


def _assemble(g, inner, present, es, ls):
    keep = set(inner) | set(present)
    adj = {v: set() for v in keep}
    for v in inner:
        for w in g.neighbors(v):
            if w in keep:
                adj[v].add(w)
                adj[w].add(v)
    for u, w in es:
        adj[u].add(w)
        adj[w].add(u)
    lab = {v: (frozenset() if v in present else g.labels(v)) for v in keep}
    for v, x in ls:
        lab[v] = lab[v] | {x}
    bidx = {v: g.bidx(v) for v in present}
    return Graph._raw({v: frozenset(s) for v, s in adj.items()}, lab, bidx, g.t, g.universe)


def ext_one(h: Graph) -> dict:
    """All graphs reachable by one extension step (capacity grows by one)."""
    h, _ = h.integer_ids()
    t = h.t + 1
    out = {}
    base = Graph._raw(h.adjacency(), h.label_map(), h.boundary_map(), t, h.universe)
    out[canonical_key(base)] = base
    for v in h.vertices:
        if h.bidx(v) is None:
            b = h.boundary_map()
            b[v] = t
            g2 = Graph._raw(h.adjacency(), h.label_map(), b, t, h.universe)
            out.setdefault(canonical_key(g2), g2)
    new = len(h)
    for u in h.vertices:
        if h.bidx(u) is None:
            continue
        nbrs = sorted(h.neighbors(u))
        labs = sorted(h.labels(u))
        for rn in range(len(nbrs) + 1):
            for moved in combinations(nbrs, rn):
                for rl in range(len(labs) + 1):
                    for mlabs in combinations(labs, rl):
                        adj = {v: set(ns) for v, ns in h.adjacency().items()}
                        adj[new] = {u}
                        for w in moved:
                            adj[u].discard(w)
                            adj[w].discard(u)
                            adj[w].add(new)
                            adj[new].add(w)
                        adj[u].add(new)
                        lab = h.label_map()
                        lab[u] = lab[u] - set(mlabs)
                        lab[new] = frozenset(mlabs)
                        b = h.boundary_map()
                        b[new] = t
                        g2 = Graph._raw({v: frozenset(s) for v, s in adj.items()}, lab, b, t, h.universe)
                        out.setdefault(canonical_key(g2), g2)
    return out


_EXT_CACHE: dict = {}


def ext(q_set: Iterable[Graph], t_prime: int) -> dict:
    """Graphs obtained by exactly ``t_prime`` extension steps, keyed by canonical key."""
    if t_prime < 0:
        raise InvalidArgument("extension depth must be nonnegative")
    current = {}
    for q in q_set:
        current.setdefault(canonical_key(q), q)
    ck = (tuple(sorted(current)), t_prime)
    if ck in _EXT_CACHE:
        return dict(_EXT_CACHE[ck])
    for _ in range(t_prime):
        nxt = {}
        for g in current.values():
            for k, h in ext_one(g).items():
                nxt.setdefault(k, h)
        current = nxt
    _EXT_CACHE[ck] = dict(current)
    return current


_MPCS_PLUS_CACHE: dict = {}


def mpcs_plus(q_set: Iterable[Graph], t: int) -> dict:
    """Multipieces of the ``t``-fold extensions of ``q_set``."""
    q_set = list(q_set)
    ck = (tuple(sorted(canonical_key(q) for q in q_set)), t)
    if ck in _MPCS_PLUS_CACHE:
        return _MPCS_PLUS_CACHE[ck]
    out = {}
    for g in ext(q_set, t).values():
        for k, h in mpcs(g).items():
            out.setdefault(k, h)
    _MPCS_PLUS_CACHE[ck] = out
    return out


# ---------------------------------------------------------------- folios


@dataclass(frozen=True)
class Folio:
    """A set of isomorphism classes, each with a representative graph."""

    members: Dict[bytes, Graph] = field(default_factory=dict)
    detail: Optional[int] = None

    def keys(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, g) -> bool:
        key = g if isinstance(g, bytes) else canonical_key(g)
        return key in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members[k] for k in sorted(self.members))

    def __eq__(self, other):
        if not isinstance(other, Folio):
            return NotImplemented
        return self.keys() == other.keys()

    def __hash__(self):
        return hash(self.keys())

    def issubset(self, other: "Folio") -> bool:
        return self.keys() <= other.keys()

    def to_json(self) -> list:
        from .graph_core import canonical_graph
        return [graph_to_dict(canonical_graph(self.members[k])) for k in sorted(self.members)]


def _normalize(g: Graph, flavor: Flavor) -> Graph:
    if not flavor.labeled:
        g = g.strip_labels(g.universe)
    if not flavor.boundaried:
        g = Graph._raw(g.adjacency(), g.label_map(), {}, 0, g.universe)
    return g


def one_step_minors(g: Graph, flavor: Flavor):
    """Graphs obtained by one deletion, contraction or label drop allowed in ``flavor``."""
    adjm = g.adjacency()
    for v in g.vertices:
        yield g.without([v])
    for u, w in g.edges:
        yield g.without_edges([(u, w)])
        bu, bw = g.bidx(u), g.bidx(w)
        if bu is not None and bw is not None:
            continue
        keep, gone = (w, u) if bu is None and bw is not None else (u, w)
        adj = {v: set(ns) for v, ns in adjm.items() if v != gone}
        for x in adjm[gone]:
            if x != keep:
                adj[x].discard(gone)
                adj[x].add(keep)
                adj[keep].add(x)
        adj[keep].discard(gone)
        adj[keep].discard(keep)
        lab = {v: s for v, s in g.label_map().items() if v != gone}
        lab[keep] = g.labels(keep) | g.labels(gone)
        b = {v: i for v, i in g.boundary_map().items() if v != gone}
        if g.bidx(gone) is not None:
            b[keep] = g.bidx(gone)
        yield Graph._raw({v: frozenset(s) for v, s in adj.items()}, lab, b, g.t, g.universe)
    if flavor.labeled:
        for v in g.vertices:
            for x in sorted(g.labels(v)):
                lab = g.label_map()
                lab[v] = lab[v] - {x}
                yield Graph._raw(dict(adjm), lab, g.boundary_map(), g.t, g.universe)


class MinorClosure:
    """Memoized minor closure; folios are stored as bitsets over a shared key registry."""

    def __init__(self, detail: int, flavor: Flavor):
        self.detail = detail
        self.flavor = flavor
        self.index: Dict[bytes, int] = {}
        self.graphs: list = []
        self.memo: Dict[bytes, int] = {}

    def register(self, g: Graph, key=None) -> int:
        key = canonical_key(g) if key is None else key
        i = self.index.get(key)
        if i is None:
            i = len(self.graphs)
            self.index[key] = i
            self.graphs.append(g)
        return i

    def bits(self, g: Graph) -> int:
        g = _normalize(g, self.flavor)
        return self._bits(g, canonical_key(g))

    def _bits(self, g, key):
        got = self.memo.get(key)
        if got is not None:
            return got
        acc = 0
        if 1 <= len(g) <= self.detail:
            acc |= 1 << self.register(g, key)
        seen = set()
        for h in one_step_minors(g, self.flavor):
            k = canonical_key(h)
            if k in seen:
                continue
            seen.add(k)
            acc |= self._bits(h, k)
        self.memo[key] = acc
        return acc

    def members(self, bits: int) -> dict:
        out = {}
        for i in _engine.bits(bits):
            g = self.graphs[i]
            out[canonical_key(g)] = g
        return out


_CLOSURES: dict = {}


def closure_for(detail: int, flavor: Flavor) -> MinorClosure:
    key = (detail, flavor)
    if key not in _CLOSURES:
        _CLOSURES[key] = MinorClosure(detail, flavor)
    return _CLOSURES[key]


def folio(g: Graph, detail: int, flavor: Flavor = Flavor.BOUNDARIED_LABELED, ceiling=None) -> Folio:
    """All nonempty ``flavor``-minors of ``g`` with at most ``detail`` vertices."""
    from . import limits
    limits.enforce(len(g), "folio source graph", ceiling)
    if detail < 0:
        raise InvalidArgument("detail must be nonnegative")
    cl = closure_for(detail, flavor)
    return Folio(cl.members(cl.bits(g)), detail)


def folio_qt(g: Graph, q_set: Iterable[Graph], t: int) -> Folio:
    """Members of ``mpcs_plus(q_set, t)`` that are boundaried labeled minors of ``g``."""
    q_set = list(q_set)
    if g.t != t:
        raise StructuralMismatch(f"folio_qt needs a {t}-boundaried graph, got capacity {g.t}")
    detail = max((len(q) for q in q_set), default=0) + t
    members = {}
    for k, r in mpcs_plus(q_set, t).items():
        r = r.with_universe(r.universe | g.universe) if not r.used_labels() <= g.universe else r
        if is_minor(r, g, Flavor.BOUNDARIED_LABELED):
            members[k] = r
    return Folio(members, detail)


# ---------------------------------------------------------------- fragment sets


@dataclass(frozen=True)
class FragmentSet:
    """Connected labeled fragments with an optional size cap and saturation parameter."""

    members: tuple
    universe: frozenset = frozenset()
    cap: Optional[int] = None
    saturation: Optional[int] = None

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def validate(self) -> None:
        for q in self.members:
            if not q.is_connected():
                raise ContractViolation("fragments must be connected")
            if self.cap is not None and len(q) > self.cap:
                raise ContractViolation(f"fragment with {len(q)} vertices exceeds cap {self.cap}")
        if self.saturation is not None and not is_saturated(self.members, self.saturation, self.universe):
            raise ContractViolation("fragment set is not saturated")


def is_saturated(q_set: Iterable[Graph], s: int, universe) -> bool:
    if s < 1:
        raise InvalidArgument("saturation parameter must be at least 1")
    q_set = list(q_set)
    singles = [q.labels(q.vertices[0]) for q in q_set if len(q) == 1]
    for sub in combinations(sorted(universe), s):
        if not any(set(sub) <= lab for lab in singles):
            return False
    for q in q_set:
        if len(q) > 1 and any(len(q.labels(v)) >= s for v in q.vertices):
            return False
    return True


def saturate(universe, s: int) -> list:
    """One single-vertex fragment per ``s``-subset of ``universe``."""
    universe = frozenset(universe)
    return [Graph([0], (), {0: set(sub)}, None, 0, universe)
            for sub in combinations(sorted(universe), s)]

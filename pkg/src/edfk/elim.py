"""Elimination forests, treedepth, tree H-decompositions and tri-separations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional

from . import limits
from .errors import ContractViolation, InvalidArgument
from .graph_core import Graph, canonical_key, vkey
from .minors import Flavor, biconnected_components, is_minor


# ---------------------------------------------------------------- F-freeness with caching

_FREE_CACHE: dict = {}
_CANON_LIMIT = 14  # graphs up to this size are memoized by isomorphism class


def family_key(family) -> tuple:
    return tuple(sorted(canonical_key(h) for h in family))


def is_free(g: Graph, family) -> bool:
    """Plain F-minor-freeness (labels and boundary ignored)."""
    fk = family_key(family)
    plain = g
    if g.is_labeled() or g.boundary_vertices or g.t:
        plain = Graph._raw(g.adjacency(), {v: frozenset() for v in g.vertices}, {}, 0, frozenset())
    if len(plain) <= _CANON_LIMIT:
        ck = (fk, canonical_key(plain))
        hit = _FREE_CACHE.get(ck)
        if hit is None:
            hit = not any(is_minor(h, plain) for h in family)
            _FREE_CACHE[ck] = hit
        return hit
    return not any(is_minor(h, plain) for h in family)


def pendant_pieces(sub: Graph, free) -> set:
    """Vertices of ``free`` pieces hanging off cut vertices, away from the first vertex.

    ``sub`` must be connected. A piece is a component of ``sub - c`` for a cut
    vertex c that avoids the root ``sub.vertices[0]`` and passes ``free``.
    """
    root = sub.vertices[0]
    counts: dict = {}
    for b in biconnected_components(sub):
        for v in b:
            counts[v] = counts.get(v, 0) + 1
    cuts = [v for v, k in counts.items() if k > 1]
    out = set()
    for c in cuts:
        if c in out:
            continue
        for comp in sub.without([c]).components():
            comp = frozenset(comp)
            if root in comp or comp <= out:
                continue
            if free(comp):
                out |= comp
    return out


def _check_family(family):
    family = list(family)
    for h in family:
        if len(h) == 0:
            raise InvalidArgument("the empty graph cannot be a forbidden minor")
    return family


# ---------------------------------------------------------------- forests


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest over node ids ``0..N-1``; ``parent[i]`` is None for roots."""

    parent: tuple
    bags: tuple
    family: tuple = ()

    @property
    def nodes(self) -> range:
        return range(len(self.parent))

    def children(self, i) -> list:
        return [j for j, p in enumerate(self.parent) if p == i]

    def is_leaf(self, i) -> bool:
        return all(p != i for p in self.parent)

    def leaves(self) -> list:
        return [i for i in self.nodes if self.is_leaf(i)]

    def node_depth(self, i) -> int:
        d = 0
        while self.parent[i] is not None:
            i = self.parent[i]
            d += 1
        return d

    @property
    def depth(self) -> int:
        """Depth in edges; the empty forest has depth 0."""
        return max((self.node_depth(i) for i in self.nodes), default=0)

    def ancestors(self, i) -> list:
        out = []
        while self.parent[i] is not None:
            i = self.parent[i]
            out.append(i)
        return out

    def vertex_node(self) -> dict:
        return {v: i for i in self.nodes for v in self.bags[i]}

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": i, "parent": self.parent[i], "bag": sorted(map(str, self.bags[i]))}
                for i in self.nodes
            ],
            "depth": self.depth,
        }


class _EdSolver:
    def __init__(self, g: Graph, family, ceiling=None):
        self.g = g
        self.family = family
        self.ceiling = ceiling
        self.memo: Dict[FrozenSet, int] = {}
        self.free_memo: Dict[FrozenSet, bool] = {}

    def free(self, vs) -> bool:
        got = self.free_memo.get(vs)
        if got is None:
            got = is_free(self.g.induced(vs), self.family)
            self.free_memo[vs] = got
        return got

    def comps(self, vs):
        return [frozenset(c) for c in self.g.induced(vs).components()]

    def candidates(self, vs) -> list:
        """Root choices worth trying for the connected set ``vs``.

        A vertex x inside an F-minor-free piece S hanging below a cut vertex c
        never beats c as a root: ed(C - x) >= ed(C - c). Pieces are taken away
        from a fixed root vertex, so c is never itself dominated by something
        inside S and the best root survives.
        """
        sub = self.g.induced(vs)
        if len(vs) <= 3:
            return list(sub.vertices)
        skip = pendant_pieces(sub, lambda comp: self.free(comp))
        return [v for v in sub.vertices if v not in skip]

    def ed(self, vs: FrozenSet) -> int:
        """ed of a connected vertex set."""
        got = self.memo.get(vs)
        if got is not None:
            return got
        if self.free(vs):
            self.memo[vs] = 0
            return 0
        cands = self.candidates(vs)
        limits.enforce(len(cands), "elimination branching set", self.ceiling)
        best = None
        for v in cands:
            rest = vs - {v}
            val = 1 + max((self.ed(c) for c in self.comps(rest)), default=0)
            if best is None or val < best:
                best = val
                if best == 1:
                    break
        self.memo[vs] = best
        return best

    def build(self, vs, parent, par_list, bag_list):
        node = len(par_list)
        par_list.append(parent)
        if self.ed(vs) == 0:
            bag_list.append(frozenset(vs))
            return
        target = self.ed(vs)
        for v in self.candidates(vs):
            rest = vs - {v}
            if 1 + max((self.ed(c) for c in self.comps(rest)), default=0) == target:
                bag_list.append(frozenset([v]))
                for c in sorted(self.comps(rest), key=lambda c: min(map(vkey, c))):
                    self.build(c, node, par_list, bag_list)
                return
        raise AssertionError("no root attains the computed distance")


def compute_ed(g: Graph, family, ceiling=None):
    """Exact elimination distance to F-minor-free graphs with a witness forest."""
    family = _check_family(family)
    if g.boundary_vertices:
        raise ContractViolation("compute_ed expects an unboundaried graph")
    solver = _EdSolver(g, family, ceiling)
    comps = sorted((frozenset(c) for c in g.components()), key=lambda c: min(map(vkey, c)))
    value = max((solver.ed(c) for c in comps), default=0)
    par, bags = [], []
    for c in comps:
        solver.build(c, None, par, bags)
    return value, EliminationForest(tuple(par), tuple(bags), tuple(family))


def ed_value(g: Graph, family, ceiling=None) -> int:
    return compute_ed(g, family, ceiling)[0]


def validate_elimination_forest(g: Graph, family, forest: EliminationForest) -> bool:
    n = len(forest.parent)
    if len(forest.bags) != n:
        return False
    for i, p in enumerate(forest.parent):
        if p is not None and not (0 <= p < n):
            return False
        # no cycles through parent links
        seen, j = set(), i
        while j is not None:
            if j in seen:
                return False
            seen.add(j)
            j = forest.parent[j]
    owner = {}
    for i, bag in enumerate(forest.bags):
        for v in bag:
            if v in owner or v not in g:
                return False
            owner[v] = i
    if len(owner) != len(g):
        return False
    for i in forest.nodes:
        if not forest.is_leaf(i) and len(forest.bags[i]) != 1:
            return False
        if forest.is_leaf(i):
            bag = forest.bags[i]
            if not bag:
                return False
            sub = g.induced(bag)
            if not sub.is_connected() or not is_free(sub, family):
                return False
    for u, w in g.edges:
        a, b = owner[u], owner[w]
        if a == b:
            if not forest.is_leaf(a):
                return False
            continue
        if a not in forest.ancestors(b) and b not in forest.ancestors(a):
            return False
    return True


def treedepth(g: Graph, ceiling=None) -> int:
    """Treedepth (in vertices) by branching on the root of each component."""
    limits.enforce(len(g), "treedepth input", ceiling)
    memo: dict = {}

    def td(vs: frozenset) -> int:
        if not vs:
            return 0
        if vs in memo:
            return memo[vs]
        comps = [frozenset(c) for c in g.induced(vs).components()]
        if len(comps) > 1:
            val = max(td(c) for c in comps)
        elif len(vs) == 1:
            val = 1
        else:
            val = 1 + min(td(vs - {v}) for v in sorted(vs, key=vkey))
        memo[vs] = val
        return val

    return td(frozenset(g.vertices))


# ---------------------------------------------------------------- tree H-decompositions


@dataclass(frozen=True)
class TreeHDecomposition:
    parent: tuple
    bags: tuple
    base: frozenset

    @property
    def nodes(self) -> range:
        return range(len(self.parent))

    @property
    def root(self) -> int:
        return next(i for i, p in enumerate(self.parent) if p is None)

    def children(self, i) -> list:
        return [j for j, p in enumerate(self.parent) if p == i]

    def is_leaf(self, i) -> bool:
        return all(p != i for p in self.parent)

    @property
    def width(self) -> int:
        return max(0, max((len(b - self.base) for b in self.bags), default=0) - 1)

    def subtree(self, i) -> list:
        out, stack = [], [i]
        while stack:
            j = stack.pop()
            out.append(j)
            stack.extend(self.children(j))
        return out

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": i, "parent": self.parent[i], "bag": sorted(map(str, self.bags[i]))}
                for i in self.nodes
            ],
            "base": sorted(map(str, self.base)),
            "width": self.width,
        }


def forest_to_tree_decomposition(forest: EliminationForest, g: Graph, family=None) -> TreeHDecomposition:
    """Bags hold the root path; leaf bags add their base vertices; at most two children per node."""
    family = forest.family if family is None else family
    if not validate_elimination_forest(g, family, forest):
        raise ContractViolation("forest is not a valid elimination forest for this graph")
    par, bags = [], []
    roots = [i for i in forest.nodes if forest.parent[i] is None]
    base = frozenset().union(*(forest.bags[i] for i in forest.leaves())) if forest.leaves() else frozenset()

    def add(bag, parent):
        par.append(parent)
        bags.append(frozenset(bag))
        return len(par) - 1

    def attach(children_builders, node):
        # binarize: a node with >2 children gets a chain of copies
        cur = node
        while len(children_builders) > 2:
            first = children_builders.pop(0)
            first(cur)
            cur = add(bags[cur], cur)
        for b in children_builders:
            b(cur)

    def build(i, parent, above):
        bag = set(above) | set(forest.bags[i])
        node = add(bag, parent)
        if forest.is_leaf(i):
            return
        below = set(above) | set(forest.bags[i])
        kids = [(lambda c: (lambda p: build(c, p, below)))(c) for c in forest.children(i)]
        attach(kids, node)

    if len(roots) == 1:
        build(roots[0], None, set())
    else:
        top = add(set(), None)
        attach([(lambda r: (lambda p: build(r, p, set())))(r) for r in roots], top)
    return TreeHDecomposition(tuple(par), tuple(bags), base)


def normalize_decomposition(dec: TreeHDecomposition) -> TreeHDecomposition:
    """Binarize: a node with more than two children gets a chain of bag copies."""
    par, bags = [], []

    def add(bag, parent):
        par.append(parent)
        bags.append(bag)
        return len(par) - 1

    def build(i, parent):
        node = add(dec.bags[i], parent)
        kids = dec.children(i)
        cur = node
        while len(kids) > 2:
            build(kids.pop(0), cur)
            cur = add(dec.bags[i], cur)
        for c in kids:
            build(c, cur)

    build(dec.root, None)
    return TreeHDecomposition(tuple(par), tuple(bags), dec.base)


def decomposition_from_dict(doc: dict, g: Graph) -> TreeHDecomposition:
    """Inverse of ``TreeHDecomposition.to_json`` for a graph with string vertex ids."""
    try:
        nodes = sorted(doc["nodes"], key=lambda r: r["id"])
        ids = {str(v): v for v in g.vertices}
        if [r["id"] for r in nodes] != list(range(len(nodes))):
            raise ContractViolation("decomposition node ids must be 0..N-1")
        parent = tuple(r["parent"] for r in nodes)
        bags = tuple(frozenset(ids[x] for x in r["bag"]) for r in nodes)
        base = frozenset(ids[x] for x in doc["base"])
    except (KeyError, TypeError) as exc:
        raise ContractViolation(f"malformed decomposition: {exc}") from None
    return TreeHDecomposition(parent, bags, base)


def validate_tree_h_decomposition(g: Graph, family, dec: TreeHDecomposition) -> bool:
    n = len(dec.parent)
    roots = [i for i, p in enumerate(dec.parent) if p is None]
    if len(roots) != 1 or len(dec.bags) != n:
        return False
    for i in range(n):
        seen, j = set(), i
        while j is not None:
            if j in seen or not (0 <= j < n):
                return False
            seen.add(j)
            j = dec.parent[j]
    where: Dict = {}
    for i, bag in enumerate(dec.bags):
        for v in bag:
            if v not in g:
                return False
            where.setdefault(v, set()).add(i)
    for v in g.vertices:
        occ = where.get(v)
        if not occ:
            return False
        # connected subtree: exactly one occurrence has its parent outside the set
        tops = [i for i in occ if dec.parent[i] not in occ]
        if len(tops) != 1:
            return False
    for u, w in g.edges:
        if not (where[u] & where[w]):
            return False
    for v in dec.base:
        occ = where.get(v, set())
        if len(occ) != 1 or not dec.is_leaf(next(iter(occ))):
            return False
    for bag in dec.bags:
        if not is_free(g.induced(bag & dec.base), family):
            return False
    return True


@dataclass(frozen=True)
class TriSeparation:
    A: frozenset
    X: frozenset
    B: frozenset

    @property
    def order(self) -> int:
        return len(self.X)

    def is_valid(self, g: Graph) -> bool:
        if self.A & self.X or self.A & self.B or self.X & self.B:
            return False
        if self.A | self.X | self.B != frozenset(g.vertices):
            return False
        return not any(g.neighbors(a) & self.B for a in self.A)


def tri_separation_at(dec: TreeHDecomposition, node: int, g: Optional[Graph] = None) -> TriSeparation:
    """(vertices only below ``node``, bag shared with the parent, everything else)."""
    p = dec.parent[node]
    X = dec.bags[node] & dec.bags[p] if p is not None else frozenset()
    below = frozenset().union(*(dec.bags[j] for j in dec.subtree(node)))
    everything = frozenset().union(*dec.bags)
    if g is not None:
        everything |= frozenset(g.vertices)
    A = below - X
    B = everything - below - X
    return TriSeparation(A, X, B)

"""Exhaustive-family dynamic program for deletion-with-hitting over a tree H-decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional

from . import limits
from .elim import (TreeHDecomposition, TriSeparation, is_free, normalize_decomposition, tri_separation_at,
                   validate_tree_h_decomposition)
from .errors import ContractViolation, InvalidArgument
from .graph_core import Graph, canonical_key, glue_with_provenance, vkey
from .minors import Flavor, closure_for, is_minor, mpcs_plus
from .solvers import Solution, disjoint_deletion


# ---------------------------------------------------------------- families


def antichain(family, q_set) -> list:
    """F plus the members of Q that do not already contain a member of F."""
    family = list(family)
    out = list(family)
    for q in q_set:
        if not any(is_minor(h, q) for h in family):
            out.append(q)
    return out


def _patterns_norm(patterns) -> int:
    return max((len(h) for h in patterns), default=0)


def _free(g: Graph, patterns) -> bool:
    return is_free(g, patterns)


def _boundary_signature(g: Graph) -> tuple:
    """Edges among boundary vertices, by index."""
    b = g.boundary
    return tuple(sorted(
        (i, j) for i in b for j in b if i < j and g.has_edge(b[i], b[j])
    ))


def compatible(g1: Graph, g2: Graph) -> bool:
    if g1.t != g2.t:
        return False
    if set(g1.boundary) != set(g2.boundary):
        return False
    return _boundary_signature(g1) == _boundary_signature(g2)


class _Relevance:
    """Relevant folio (boundaried minors that are multipieces of extended patterns)."""

    def __init__(self, patterns, t: int):
        self.t = t
        self.patterns = [Graph._raw(h.adjacency(), {v: frozenset() for v in h.vertices}, {}, 0, frozenset())
                         for h in patterns]
        self.detail = _patterns_norm(self.patterns) + t
        self.closure = closure_for(self.detail, Flavor.BOUNDARIED)
        mask = 0
        for k, r in mpcs_plus(self.patterns, t).items():
            if 1 <= len(r) <= self.detail:
                mask |= 1 << self.closure.register(r, k)
        self.mask = mask

    def key(self, g: Graph) -> tuple:
        return (_boundary_signature(g), self.closure.bits(g) & self.mask)


_RELEVANCE: dict = {}


def _relevance(patterns, t) -> _Relevance:
    ck = (tuple(sorted(canonical_key(h) for h in patterns)), t)
    if ck not in _RELEVANCE:
        _RELEVANCE[ck] = _Relevance(patterns, t)
    return _RELEVANCE[ck]


def equivalent(g1: Graph, g2: Graph, patterns, t: int, detail: Optional[int] = None) -> bool:
    """Same boundary graph and the same relevant boundaried folio.

    ``detail`` defaults to the largest pattern size plus ``t``; a different value
    only changes the folio depth used.
    """
    if not compatible(g1, g2) or g1.t != t:
        return False
    if detail is None:
        rel = _relevance(patterns, t)
        return rel.key(g1) == rel.key(g2)
    cl = closure_for(detail, Flavor.BOUNDARIED)
    keys = set(mpcs_plus(patterns, t))
    a = {k for k in cl.members(cl.bits(g1)) if k in keys}
    b = {k for k in cl.members(cl.bits(g2)) if k in keys}
    return a == b


@dataclass
class RepresentativeFamily:
    by_t: Dict[int, list]
    size_bound: int
    saturated: Dict[int, bool]  # no new class appeared at the last enumerated size

    def __getitem__(self, t) -> list:
        return self.by_t.get(t, [])

    def __len__(self):
        return sum(len(v) for v in self.by_t.values())

    def volume(self) -> int:
        return sum(len(r) for v in self.by_t.values() for r in v)


def _extend_by_vertex(g: Graph):
    n = len(g)
    verts = g.vertices
    for r in range(len(verts) + 1):
        for nb in combinations(verts, r):
            adj = {v: set(s) for v, s in g.adjacency().items()}
            adj[n] = set(nb)
            for w in nb:
                adj[w].add(n)
            lab = {v: frozenset() for v in adj}
            yield Graph._raw({v: frozenset(s) for v, s in adj.items()}, lab, g.boundary_map(), g.t, frozenset())


def _boundary_graphs(t: int):
    pairs = list(combinations(range(t), 2))
    for r in range(len(pairs) + 1):
        for es in combinations(pairs, r):
            yield Graph(range(t), es, None, {i: i + 1 for i in range(t)}, t)


_REPS: dict = {}


def representatives_for_t(patterns, t: int, size_bound: int, ceiling=None):
    """Minimal members of every equivalence class seen up to ``size_bound`` vertices.

    Returns (reps, saturated) where ``saturated`` says the last size level added
    no new class.
    """
    ck = (tuple(sorted(canonical_key(h) for h in patterns)), t, size_bound)
    if ck in _REPS:
        return _REPS[ck]
    limits.enforce(size_bound, "representative enumeration size", ceiling)
    rel = _relevance(patterns, t)
    classes: dict = {}
    level = {}
    for g in _boundary_graphs(t):
        if _free(g, patterns):
            level.setdefault(canonical_key(g), g)
    new_at_last = True
    size = t
    while True:
        new_here = False
        for k in sorted(level):
            g = level[k]
            ek = rel.key(g)
            if ek not in classes:
                classes[ek] = g
                new_here = True
        new_at_last = new_here
        if size >= size_bound:
            break
        nxt = {}
        for g in level.values():
            for h in _extend_by_vertex(g):
                k = canonical_key(h)
                if k in nxt:
                    continue
                if _free(h, patterns):
                    nxt[k] = h
        level = nxt
        size += 1
        if not level:
            new_at_last = False
            break
    reps = sorted(classes.values(), key=lambda g: (len(g), g.number_of_edges(), canonical_key(g)))
    _REPS[ck] = (reps, not new_at_last)
    return _REPS[ck]


def compute_representatives(patterns, k: int, size_bound: int, ceiling=None) -> RepresentativeFamily:
    if k < 0 or size_bound < 0:
        raise InvalidArgument("k and size_bound must be nonnegative")
    by_t, sat = {}, {}
    for t in range(k + 1):
        reps, s = representatives_for_t(patterns, t, max(size_bound, t), ceiling)
        by_t[t] = reps
        sat[t] = s
    return RepresentativeFamily(by_t, size_bound, sat)


# ---------------------------------------------------------------- exhaustive families


@dataclass(frozen=True)
class ExhaustiveFamily:
    sets: tuple
    region: frozenset
    bound: int
    kind: str

    def __len__(self):
        return len(self.sets)

    def within_bound(self) -> bool:
        return len(self.sets) <= self.bound


def _family(sets, region, bound, kind) -> ExhaustiveFamily:
    uniq = sorted(set(frozenset(s) for s in sets), key=lambda s: (len(s), sorted(map(vkey, s))))
    return ExhaustiveFamily(tuple(uniq), frozenset(region), bound, kind)


def _contexts(sep: TriSeparation, g: Graph, reps: RepresentativeFamily):
    """Yield (X', glued graph, map from A to glued ids) for every X' and compatible R."""
    X = sorted(sep.X, key=vkey)
    for r in range(len(X) + 1):
        for Xp in combinations(X, r):
            t = len(Xp)
            lam = {v: i + 1 for i, v in enumerate(Xp)}
            side = g.induced(set(sep.A) | set(Xp))
            side = Graph._raw(side.adjacency(), {v: frozenset() for v in side.vertices}, lam, t, frozenset())
            for R in reps[t]:
                if not compatible(side, R):
                    continue
                glued, (p1, _) = glue_with_provenance(side, R)
                yield Xp, glued, {v: p1[v] for v in sep.A}


def leaf_exhaustive(sep: TriSeparation, g: Graph, reps: RepresentativeFamily, patterns, k: int) -> ExhaustiveFamily:
    """Minimum pattern-deletion sets inside A for every glued context."""
    out = []
    for Xp, glued, amap in _contexts(sep, g, reps):
        inside = set(amap.values())
        U = [v for v in glued.vertices if v not in inside]
        sol = disjoint_deletion(glued, patterns, U, k)
        if sol is not None:
            back = {i: v for v, i in amap.items()}
            out.append(frozenset(back[i] for i in sol.vertices))
    bound = (2 ** len(sep.X)) * len(reps)
    return _family(out, sep.A, bound, "leaf")


def prune_exhaustive(sep: TriSeparation, g: Graph, family: ExhaustiveFamily, reps: RepresentativeFamily,
                     patterns) -> ExhaustiveFamily:
    """Keep, per context, one smallest member that clears every pattern."""
    members = sorted(family.sets, key=lambda s: (len(s), sorted(map(vkey, s))))
    out = []
    for Xp, glued, amap in _contexts(sep, g, reps):
        for S in members:
            if _free(glued.without([amap[v] for v in S]), patterns):
                out.append(S)
                break
    bound = (2 ** len(sep.X)) * len(reps)
    return _family(out, sep.A, bound, "prune")


def combine_exhaustive(f1: ExhaustiveFamily, f2: ExhaustiveFamily, region) -> ExhaustiveFamily:
    if f1.region & f2.region:
        raise InvalidArgument("regions must be disjoint")
    region = frozenset(region)
    if not (f1.region | f2.region) <= region:
        raise InvalidArgument("target region must contain both regions")
    extra = sorted(region - f1.region - f2.region, key=vkey)
    out = []
    for s1 in f1.sets:
        for s2 in f2.sets:
            for r in range(len(extra) + 1):
                for star in combinations(extra, r):
                    out.append(s1 | s2 | frozenset(star))
    bound = len(f1) * len(f2) * 2 ** len(extra)
    return _family(out, region, bound, "combine")


def extend_family(fc: ExhaustiveFamily, region) -> ExhaustiveFamily:
    """Unary step: every child member plus any subset of the newly covered vertices."""
    region = frozenset(region)
    extra = sorted(region - fc.region, key=vkey)
    out = []
    for s in fc.sets:
        for r in range(len(extra) + 1):
            for star in combinations(extra, r):
                out.append(s | frozenset(star))
    return _family(out, region, len(fc) * 2 ** len(extra), "extend")


# ---------------------------------------------------------------- driver


@dataclass
class DPReport:
    solution: Optional[Solution]
    opt_f: int
    best: Optional[int]
    families: List[ExhaustiveFamily] = field(default_factory=list)
    node_sizes: Dict[int, int] = field(default_factory=dict)
    reps: Optional[RepresentativeFamily] = None

    def to_json(self) -> dict:
        return {
            "feasible": self.solution is not None,
            "opt": self.opt_f,
            "best_hitting": self.best,
            "witness": sorted(map(str, self.solution.vertices)) if self.solution else None,
            "root_family_size": self.node_sizes.get(0),
            "node_family_sizes": {str(k): v for k, v in sorted(self.node_sizes.items())},
            "representatives": len(self.reps) if self.reps else 0,
        }


def _run(g: Graph, dec: TreeHDecomposition, patterns, size_bound: int, families_out: list, sizes: dict):
    k = max((len(tri_separation_at(dec, i, g).X) for i in dec.nodes), default=0)
    reps = compute_representatives(patterns, k, size_bound)
    fams: Dict[int, ExhaustiveFamily] = {}
    order = []
    stack = [dec.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(dec.children(i))
    for i in reversed(order):
        sep = tri_separation_at(dec, i, g)
        kids = dec.children(i)
        if not kids:
            # the base part is F-free but may still hold Q-minors, so allow all of A
            fam = leaf_exhaustive(sep, g, reps, patterns, len(sep.A))
        elif len(kids) == 1:
            raw = extend_family(fams[kids[0]], sep.A)
            families_out.append(raw)
            fam = prune_exhaustive(sep, g, raw, reps, patterns)
        else:
            raw = combine_exhaustive(fams[kids[0]], fams[kids[1]], sep.A)
            families_out.append(raw)
            fam = prune_exhaustive(sep, g, raw, reps, patterns)
        families_out.append(fam)
        fams[i] = fam
        sizes[i] = len(fam)
        for c in kids:
            fams.pop(c, None)
    root = fams[dec.root]
    best = None
    for S in root.sets:
        if _free(g.without(S), patterns):
            best = S
            break
    return best, reps


def dp_solve(g: Graph, dec: TreeHDecomposition, family, q_set, size_bound: int = 6,
             report: bool = False):
    """Optimal F-deletion set hitting every Q-minor, or None.

    The root family yields a smallest deletion set for F and Q together; it
    answers the question only when its size matches the optimum for F alone,
    which a second run with empty Q provides.
    """
    family = list(family)
    q_set = list(q_set)
    for h in family + q_set:
        if not h.is_connected():
            raise ContractViolation("patterns must be connected")
    if not validate_tree_h_decomposition(g, family, dec):
        raise ContractViolation("invalid tree H-decomposition")
    dec = normalize_decomposition(dec)
    plain = Graph._raw(g.adjacency(), {v: frozenset() for v in g.vertices}, {}, 0, frozenset())
    fams: list = []
    sizes: dict = {}
    f_best, _ = _run(plain, dec, family, size_bound, [], {})
    opt_f = len(f_best)
    patterns = antichain(family, q_set)
    best, reps = _run(plain, dec, patterns, size_bound, fams, sizes)
    sol = None
    if best is not None and len(best) == opt_f:
        sol = Solution(frozenset(best), True)
    if report:
        return DPReport(sol, opt_f, None if best is None else len(best), fams, sizes, reps)
    return sol

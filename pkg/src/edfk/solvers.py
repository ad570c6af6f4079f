"""Brute-force ground truth: minimum deletion sets, hitting Q, simplified solutions, remainders."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional

from . import limits
from .elim import is_free, pendant_pieces
from .errors import ContractViolation, InvalidArgument, StructuralMismatch
from .graph_core import Graph, forget, glue_with_provenance, vkey
from .minors import Flavor, Folio, folio_qt, is_minor


@dataclass(frozen=True)
class Solution:
    vertices: frozenset
    hits_q: Optional[bool] = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        out = {"size": self.size, "witness": sorted(map(str, self.vertices))}
        if self.hits_q is not None:
            out["hits_q"] = self.hits_q
        return out


def _q_free(g: Graph, q_set, flavor: Flavor) -> bool:
    return not any(is_minor(q, g, flavor) for q in q_set)


class _Deleter:
    """Enumerates deletion sets in increasing size over a reduced candidate set.

    Components that are already F-minor-free are never touched by an optimum.
    With connected patterns, a free pendant piece hanging below a cut vertex c
    can be traded for c without losing optimality or the hitting property, so
    ``reduce=True`` restricts branching to the remaining core.
    """

    def __init__(self, g: Graph, family, q_set=(), q_flavor=Flavor.PLAIN, reduce=True, ceiling=None):
        self.g = g
        self.family = list(family)
        self.q_set = list(q_set)
        self.q_flavor = q_flavor
        connected = all(h.is_connected() for h in self.family + self.q_set)
        cands = []
        for comp in g.components():
            sub = g.induced(comp)
            if is_free(sub, self.family):
                continue
            if reduce and connected and len(comp) > 3:
                skip = pendant_pieces(sub, self._piece_free)
                cands.extend(v for v in sub.vertices if v not in skip)
            else:
                cands.extend(sub.vertices)
        self.candidates = sorted(cands, key=vkey)
        limits.enforce(len(self.candidates), "deletion branching set", ceiling)

    def _piece_free(self, comp) -> bool:
        h = self.g.induced(comp)
        return is_free(h, self.family) and _q_free(h, self.q_set, self.q_flavor)

    def feasible(self, Y) -> bool:
        return is_free(self.g.without(Y), self.family)

    def hits(self, Y) -> bool:
        return _q_free(self.g.without(Y), self.q_set, self.q_flavor)

    def layers(self, avoid=frozenset(), upto=None):
        pool = [v for v in self.candidates if v not in avoid]
        top = len(pool) if upto is None else min(upto, len(pool))
        for k in range(top + 1):
            yield k, (frozenset(Y) for Y in combinations(pool, k))


def opt_deletion(g: Graph, family, ceiling=None):
    """Size of a minimum F-deletion set with the first witness in vertex order."""
    d = _Deleter(g, family, ceiling=ceiling)
    for k, layer in d.layers():
        for Y in layer:
            if d.feasible(Y):
                return k, Solution(Y)
    raise AssertionError("deleting everything always works")


def enumerate_optimal(g: Graph, family, ceiling=None) -> List[Solution]:
    """Every minimum F-deletion set (no candidate reduction beyond free components)."""
    d = _Deleter(g, family, reduce=False, ceiling=ceiling)
    for k, layer in d.layers():
        found = [Solution(Y) for Y in layer if d.feasible(Y)]
        if found:
            return found
    raise AssertionError("deleting everything always works")


def disjoint_deletion(g: Graph, family, undeletable, s: int, ceiling=None) -> Optional[Solution]:
    U = frozenset(undeletable)
    if not U <= frozenset(g.vertices):
        raise InvalidArgument("undeletable set must be inside the graph")
    if s < 0:
        raise InvalidArgument("budget must be nonnegative")
    d = _Deleter(g, family, reduce=False, ceiling=ceiling)
    for k, layer in d.layers(avoid=U, upto=s):
        for Y in layer:
            if d.feasible(Y):
                return Solution(Y)
    return None


def _hitting(g, family, q_set, flavor, ceiling, reduce=True):
    q_set = list(q_set)
    for q in q_set:
        if not q.is_connected():
            raise ContractViolation("fragments must be connected")
    d = _Deleter(g, family, q_set, flavor, reduce=reduce, ceiling=ceiling)
    for k, layer in d.layers():
        feasible = [Y for Y in layer if d.feasible(Y)]
        if feasible:
            for Y in feasible:
                if d.hits(Y):
                    return Solution(Y, True)
            return None
    raise AssertionError("deleting everything always works")


def hitting_q_labeled(c: Graph, family, q_set, ceiling=None, reduce=True) -> Optional[Solution]:
    """Some optimal deletion set that also leaves no labeled Q-minor, or None."""
    return _hitting(c, family, q_set, Flavor.LABELED, ceiling, reduce)


def hitting_q_unlabeled(g: Graph, family, q_set, ceiling=None, reduce=True) -> Optional[Solution]:
    return _hitting(g, family, q_set, Flavor.PLAIN, ceiling, reduce)


def all_hitting_optimal(g: Graph, family, q_set, flavor=Flavor.PLAIN, ceiling=None) -> List[Solution]:
    """Every optimal deletion set that leaves no Q-minor."""
    d = _Deleter(g, family, q_set, flavor, reduce=False, ceiling=ceiling)
    for k, layer in d.layers():
        feasible = [Y for Y in layer if d.feasible(Y)]
        if feasible:
            return [Solution(Y, True) for Y in feasible if d.hits(Y)]
    return []


# ---------------------------------------------------------------- simplified solutions


def optsolst_simple(gA: Graph, gB: Graph, gC: Graph, rB: Folio, family, q_set, t: int,
                    ceiling=None) -> List[Solution]:
    """Optimal solutions of gA+gB+gC missing the boundary whose B-side leaves folio ``rB``.

    Vertices of the returned sets are tagged ``("A", v)``, ``("B", v)`` or ``("C", v)``.
    """
    for g in (gA, gB, gC):
        if g.t != t:
            raise StructuralMismatch("all three parts must be t-boundaried")
    gAB, (pA, pB) = glue_with_provenance(gA, gB)
    g, (pAB, pC) = glue_with_provenance(gAB, gC)
    tag = {}
    for v, i in pA.items():
        tag.setdefault(pAB[i], ("A", v))
    for v, i in pB.items():
        tag.setdefault(pAB[i], ("B", v))
    for v, i in pC.items():
        tag.setdefault(i, ("C", v))
    boundary = g.boundary_vertices
    opt, _ = opt_deletion(g, family, ceiling)
    inv_b = {pAB[i]: v for v, i in pB.items()}
    out = []
    d = _Deleter(g, family, reduce=False, ceiling=ceiling)
    pool = [v for v in g.vertices if v not in boundary]
    for Y in combinations(pool, opt):
        Y = frozenset(Y)
        if not d.feasible(Y):
            continue
        yb = [inv_b[y] for y in Y if y in inv_b]
        if folio_qt(gB.without(yb), q_set, t) != rB:
            continue
        out.append(Solution(frozenset(tag[y] for y in Y)))
    return sorted(out, key=lambda s: sorted(map(str, s.vertices)))


# ---------------------------------------------------------------- remainders


@dataclass(frozen=True)
class RemainderSet:
    members: tuple         # minimal folios, sorted
    witnesses: tuple       # solutions realizing each member
    leaves_q: tuple        # parallel flags: member in R_Q

    @property
    def r_q(self) -> list:
        return [m for m, f in zip(self.members, self.leaves_q) if f]

    @property
    def r_n(self) -> list:
        return [m for m, f in zip(self.members, self.leaves_q) if not f]

    def __len__(self):
        return len(self.members)


def remainders(gAB: Graph, solutions: Iterable[Solution], q_set, t: int) -> RemainderSet:
    q_set = list(q_set)
    folios = {}
    for s in solutions:
        fo = folio_qt(gAB.without(s.vertices), q_set, t)
        folios.setdefault(fo, []).append(s)
    keys = list(folios)
    minimal = [a for a in keys if not any(b != a and b.issubset(a) for b in keys)]
    minimal.sort(key=lambda f: sorted(f.keys()))

    def leaves(fo: Folio) -> bool:
        for r in fo:
            plain = forget(r, 0)
            if any(is_minor(q, plain, Flavor.LABELED) for q in q_set):
                return True
        return False

    return RemainderSet(tuple(minimal), tuple(tuple(folios[m]) for m in minimal),
                        tuple(leaves(m) for m in minimal))

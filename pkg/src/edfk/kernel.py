"""Kernelization by component reduction, modulator augmentation and lifting; blocking sets and label marking."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional

from .elim import compute_ed, ed_value, is_free
from .errors import ContractViolation, InvalidArgument
from .graph_core import Graph, canonical_key, canonical_order, vkey
from .minors import Flavor, find_minor_model, is_minor, is_saturated
from .solvers import Solution, enumerate_optimal, hitting_q_labeled, opt_deletion


def _plain(g: Graph) -> Graph:
    return Graph._raw(g.adjacency(), {v: frozenset() for v in g.vertices}, {}, 0, frozenset())


def _components_outside(g: Graph, X) -> list:
    X = frozenset(X)
    rest = g.induced([v for v in g.vertices if v not in X])
    comps = [sorted(c, key=vkey) for c in rest.components()]
    comps.sort(key=lambda c: vkey(c[0]))
    return comps


def _check_modulator(g: Graph, X, family, eta: int) -> None:
    if not frozenset(X) <= frozenset(g.vertices):
        raise InvalidArgument("modulator must be a vertex subset")
    if eta < 0:
        raise InvalidArgument("eta must be nonnegative")
    for comp in _components_outside(g, X):
        if ed_value(g.induced(comp), family) > eta:
            raise ContractViolation(f"a component of g - X has elimination distance above {eta}")


def attachment_view(g: Graph, comp, X) -> Graph:
    """The component with each vertex labeled by its neighbours in X."""
    X = frozenset(X)
    names = {x: str(x) for x in X}
    sub = g.induced(comp)
    labels = {v: frozenset(names[x] for x in g.neighbors(v) if x in X) for v in sub.vertices}
    return Graph._raw(sub.adjacency(), labels, {}, 0, frozenset(names.values()))


def minimal_fragments(labels) -> list:
    """Smallest labeled pieces that join two attachment points.

    Any connected labeled graph with two label occurrences contains one of
    these as a labeled minor: a vertex carrying two labels, or an edge whose
    ends carry the same label.
    """
    labels = sorted(labels)
    uni = frozenset(labels)
    out = [Graph([0], (), {0: {a, b}}, None, 0, uni) for a, b in combinations(labels, 2)]
    out += [Graph([0, 1], [(0, 1)], {0: {a}, 1: {a}}, None, 0, uni) for a in labels]
    return out


@dataclass
class RemovedComponent:
    vertices: tuple
    opt: int
    solution: frozenset  # a local optimum that hits every minimal fragment when one exists

    def to_json(self) -> dict:
        return {"vertices": [str(v) for v in self.vertices], "opt": self.opt,
                "local_solution": sorted(map(str, self.solution))}


@dataclass
class KernelLevel:
    eta: int
    graph: Graph            # instance entering this level
    modulator: frozenset
    removed: List[RemovedComponent]
    added: tuple = ()       # modulator vertices x_C

    @property
    def delta(self) -> int:
        return sum(r.opt for r in self.removed)

    def to_json(self) -> dict:
        return {
            "eta": self.eta,
            "n": len(self.graph),
            "modulator": sorted(map(str, self.modulator)),
            "removed": [r.to_json() for r in self.removed],
            "delta": self.delta,
            "added": [str(x) for x in self.added],
        }


@dataclass
class KernelTrace:
    family: tuple
    levels: List[KernelLevel] = field(default_factory=list)
    base: str = "identity"
    base_solution: Optional[frozenset] = None
    final: Optional[Graph] = None

    @property
    def delta(self) -> int:
        return sum(lv.delta for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "levels": [lv.to_json() for lv in self.levels],
            "delta": self.delta,
            "base": self.base,
        }


def _removable(view: Graph, family, q_budget) -> Optional[frozenset]:
    """A local optimum when every small fragment set can be hit by some optimum; else None."""
    frags = minimal_fragments(view.universe)
    present = [q for q in frags if is_minor(q, view, Flavor.LABELED)]
    plain = _plain(view)
    top = len(present) if q_budget is None else min(q_budget, len(present))
    for r in range(1, top + 1):
        for qs in combinations(present, r):
            if hitting_q_labeled(view, family, qs) is None:
                return None
    sol = hitting_q_labeled(view, family, present)
    if sol is None:
        _, sol = opt_deletion(plain, family)
    return sol.vertices


def reduce_components(g: Graph, X, family, eta: int, retain: int = 1, q_budget: Optional[int] = 2):
    """Drop surplus copies of identically attached components.

    Components of g - X are grouped by their attachment view. Beyond the first
    ``retain`` members of a group, a component goes when every set of at most
    ``q_budget`` minimal fragments can be hit by one of its optimal solutions.
    Returns (g', delta, level).
    """
    family = list(family)
    X = frozenset(X)
    _check_modulator(g, X, family, eta)
    if retain < 0:
        raise InvalidArgument("retain must be nonnegative")
    groups: dict = {}
    for comp in _components_outside(g, X):
        view = attachment_view(g, comp, X)
        groups.setdefault(canonical_key(view), []).append((comp, view))
    removed = []
    for key in sorted(groups):
        members = groups[key]
        if len(members) <= retain:
            continue
        _, view = members[0]
        sol = _removable(view, family, q_budget)
        if sol is None:
            continue
        opt = len(sol)
        order0 = canonical_order(view)
        for comp, v2 in members[retain:]:
            # carry the witness over through the canonical orders
            o2 = canonical_order(v2)
            m = dict(zip(order0, o2))
            removed.append(RemovedComponent(tuple(comp), opt, frozenset(m[v] for v in sol)))
    gone = set().union(*(r.vertices for r in removed)) if removed else set()
    g2 = g.without(gone) if gone else g
    level = KernelLevel(eta, g, X, removed)
    return g2, level.delta, level


def augment_modulator(g: Graph, X, family, eta: int):
    """Add one vertex per component at distance exactly eta so that all drop below eta."""
    if eta <= 0:
        raise InvalidArgument("nothing to augment at eta = 0")
    family = list(family)
    X = set(X)
    added = []
    for comp in _components_outside(g, X):
        c = g.induced(comp)
        d = ed_value(c, family)
        if d > eta:
            raise ContractViolation(f"component with elimination distance {d} above eta={eta}")
        if d < eta:
            continue
        for x in canonical_order(c):
            if ed_value(c.without([x]), family) < d:
                added.append(x)
                break
        else:
            raise AssertionError("some vertex must lower the elimination distance")
    return frozenset(X) | frozenset(added), tuple(added)


def kernelize(g: Graph, X, k: int, family, eta: int, base: str = "identity",
              retain: int = 1, q_budget: Optional[int] = 2):
    """Returns (g*, X*, k*, trace). ``base`` is "identity" or "exact"."""
    family = tuple(family)
    if base not in ("identity", "exact"):
        raise InvalidArgument(f"unknown base kernel {base!r}")
    _check_modulator(g, X, family, eta)
    trace = KernelTrace(family, base=base)
    cur, mod, budget = g, frozenset(X), k
    for level_eta in range(eta, 0, -1):
        cur, delta, level = reduce_components(cur, mod, family, level_eta, retain, q_budget)
        mod, added = augment_modulator(cur, mod, family, level_eta)
        level.added = added
        trace.levels.append(level)
        budget -= delta
    trace.final = cur
    if base == "exact":
        opt, sol = opt_deletion(_plain(cur), family)
        trace.base_solution = sol.vertices
        if opt <= budget:
            return Graph(), frozenset(), 0, trace
        smallest = min(family, key=lambda h: (len(h), h.number_of_edges()))
        return smallest, frozenset(), 0, trace
    return cur, mod, budget, trace


def lift_solution(trace: KernelTrace, y_star=None) -> Solution:
    """Extend a solution of the reduced instance to the original one.

    Each removed component takes its recorded local optimum if that keeps the
    graph free, else the first optimal local solution that does.
    """
    family = list(trace.family)
    if y_star is None:
        if trace.base_solution is None:
            raise ContractViolation("no solution given and none recorded")
        y_star = trace.base_solution
    y = set(getattr(y_star, "vertices", y_star))
    final = trace.final
    if final is None:
        raise ContractViolation("trace has no final instance")
    if not y <= set(final.vertices) or not is_free(_plain(final).without(y), family):
        raise ContractViolation("y_star is not a deletion set of the reduced instance")
    size = len(y)
    for level in reversed(trace.levels):
        g = level.graph
        gone = set().union(*(r.vertices for r in level.removed)) if level.removed else set()
        present = [v for v in g.vertices if v not in gone]
        for r in level.removed:
            present.extend(r.vertices)
            host = _plain(g.induced(present))
            options = [r.solution] + [s.vertices for s in enumerate_optimal(_plain(g.induced(r.vertices)), family)]
            for cand in options:
                if is_free(host.without(y | cand), family):
                    y |= cand
                    break
            else:
                raise ContractViolation("no local optimum of a removed component extends the solution")
    expected = size + trace.delta
    if len(y) != expected:
        raise ContractViolation(f"lifted size {len(y)} differs from {expected}")
    return Solution(frozenset(y))


# ---------------------------------------------------------------- blocking sets


@dataclass
class BlockingWitness:
    q_star: tuple
    witnesses: tuple          # (optimal solution, index into q_star, minor model)
    ed: int

    def to_json(self) -> dict:
        return {
            "size": len(self.q_star),
            "ed": self.ed,
            "witnesses": [{"solution": sorted(map(str, y)), "fragment": i} for y, i, _ in self.witnesses],
        }


def find_blocking_subset(c: Graph, family, q_set, ceiling=None) -> Optional[BlockingWitness]:
    """Greedily shrink Q to a subset that every optimal solution still fails to hit."""
    family = list(family)
    q_set = sorted(q_set, key=canonical_key)
    if hitting_q_labeled(c, family, q_set, ceiling) is not None:
        return None
    cur = list(q_set)
    for q in list(q_set):
        trial = [p for p in cur if p is not q]
        if hitting_q_labeled(c, family, trial, ceiling) is None:
            cur = trial
    wit = []
    for s in enumerate_optimal(_plain(c), family, ceiling):
        rest = c.without(s.vertices)
        for i, q in enumerate(cur):
            m = find_minor_model(q, rest, Flavor.LABELED)
            if m is not None:
                wit.append((s.vertices, i, m))
                break
        else:
            raise AssertionError("blocking subset lost its witness")
    return BlockingWitness(tuple(cur), tuple(wit), ed_value(_plain(c), family))


# ---------------------------------------------------------------- label marking


def too_many_labels(s_size: int, n_f: int) -> int:
    return s_size * (n_f - 1) + n_f


def total_marked_labels(s_size: int, n_f: int) -> int:
    return too_many_labels(s_size, n_f) * (s_size + 1)


def labels_reached(g: Graph, v) -> frozenset:
    comp = next(c for c in g.components() if v in c)
    return frozenset().union(*(g.labels(u) for u in comp))


@dataclass
class MarkingReport:
    threshold: int
    total_bound: int
    marked: frozenset
    heavy: tuple                  # breaker vertices reaching at least threshold labels
    checked: int                  # (v, Y) pairs examined
    failures: list                # (v, Y) with no surviving Q-minor on L

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "total_bound": self.total_bound,
            "marked": sorted(self.marked),
            "marked_count": len(self.marked),
            "heavy": [str(v) for v in self.heavy],
            "checked": self.checked,
            "failures": [{"v": str(v), "Y": sorted(map(str, y))} for v, y in self.failures],
            "passed": self.passed,
        }


def marking_check(g: Graph, boundary, breaker, q_set, n_f: int) -> MarkingReport:
    """Mark labels reached from each breaker vertex; test survival of Q-minors on heavy ones.

    For a heavy v, every Y avoiding v with |Y| <= |boundary| must leave a Q-minor
    whose labels all lie in the chosen subset L of labels reached by v.
    """
    q_set = list(q_set)
    breaker = [b for b in sorted(set(breaker), key=vkey)]
    if not is_saturated(q_set, n_f, g.universe):
        raise ContractViolation("fragment set is not saturated")
    if any(is_minor(q, g.without(breaker), Flavor.LABELED) for q in q_set):
        raise ContractViolation("breaker leaves a Q-minor")
    s = len(set(boundary))
    thr = too_many_labels(s, n_f)
    marked = set()
    heavy = []
    failures = []
    checked = 0
    for v in breaker:
        h = g.without([b for b in breaker if b != v])
        reach = sorted(labels_reached(h, v))
        if len(reach) < thr:
            marked.update(reach)
            continue
        L = frozenset(reach[:thr])
        marked.update(L)
        heavy.append(v)
        restricted = g.restrict_labels(L)
        qs = [q for q in q_set if q.used_labels() <= L]
        others = [u for u in g.vertices if u != v]
        for r in range(s + 1):
            for Y in combinations(others, r):
                checked += 1
                rest = restricted.without(Y)
                if not any(is_minor(q, rest, Flavor.LABELED) for q in qs):
                    failures.append((v, frozenset(Y)))
    return MarkingReport(thr, total_marked_labels(s, n_f), frozenset(marked), tuple(heavy), checked, failures)

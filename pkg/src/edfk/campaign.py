"""Seeded property campaigns: every check pits a library route against an independent one."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Tuple

from . import oracles
from .dp import dp_solve
from .elim import compute_ed, ed_value, forest_to_tree_decomposition, is_free
from .gadgets import (GadgetsFunction, build_nice_gadgets, extend_graph, gadgets_land_on_gadgets, project_model,
                      unlabel_instance, verify_nice)
from .generators import planted_instance, random_connected_graph, random_graph
from .graph_core import Graph, complete_graph, cycle_graph, graph_from_dict, graph_to_dict, path_graph, star_graph
from .kernel import find_blocking_subset, kernelize, lift_solution, marking_check
from .minors import Flavor, find_minor_model, is_minor, saturate, validate_model
from .solvers import enumerate_optimal, hitting_q_labeled, hitting_q_unlabeled, opt_deletion

K2 = [complete_graph(2)]
K3 = [complete_graph(3)]

Check = Callable[[random.Random, dict], Tuple[bool, dict]]


def _free_pred(family):
    return lambda h: is_free(h, family)


# ---------------------------------------------------------------- minor search


def check_minor_oracle(rng, opts) -> Tuple[bool, dict]:
    flavor = opts.get("flavor") or rng.choice(list(Flavor))
    t = rng.randint(0, 2) if flavor.boundaried else 0
    nl = rng.randint(0, 2) if flavor.labeled else 0
    uni = "ab"[:nl]
    p = random_graph(rng, rng.randint(1, 5), rng.uniform(0.3, 0.9), nl, 0.3, t, universe=uni)
    h = random_graph(rng, rng.randint(1, 8), rng.uniform(0.2, 0.7), nl, 0.35, t, universe=uni)
    m = find_minor_model(p, h, flavor)
    o = oracles.brute_minor_model(p, h, flavor.labeled, flavor.boundaried)
    ok = (m is None) == (o is None) and (m is None or validate_model(m, p, h, flavor))
    return ok, {"flavor": flavor.name, "minor": m is not None}


# ---------------------------------------------------------------- gadgets


def check_extending_minors(rng, opts) -> Tuple[bool, dict]:
    nl = rng.randint(0, 2)
    uni = "ab"[:nl]
    h = random_graph(rng, rng.randint(1, 5), rng.uniform(0.2, 0.8), nl, 0.3, universe=uni)
    g = random_graph(rng, rng.randint(1, 7), rng.uniform(0.2, 0.8), nl, 0.4, universe=uni)
    gf = build_nice_gadgets(uni, [], 0)
    hp, hprov = extend_graph(h, gf)
    gp, gprov = extend_graph(g, gf)
    lhs = oracles.brute_minor_model(h, g, labeled=True) is not None
    m = find_minor_model(hp, gp)
    ok = lhs == (m is not None)
    claim = True
    if m is not None:
        ok = ok and validate_model(project_model(m, hprov, gprov), h, g, Flavor.LABELED)
        claim = gadgets_land_on_gadgets(m, hprov, gprov)
    return ok and claim, {"minor": lhs, "gadget_claim": claim}


def check_extending_ed(rng, opts) -> Tuple[bool, dict]:
    eta_max = opts.get("eta", 2)
    while True:
        nl = rng.randint(0, 2)
        uni = "ab"[:nl]
        g = random_graph(rng, rng.randint(1, 8), rng.uniform(0.2, 0.7), nl, 0.3, universe=uni)
        e = oracles.brute_ed(g, _free_pred(K3))
        if e <= eta_max:
            break
    gf = build_nice_gadgets(uni, K3, eta_max)
    gp, _ = extend_graph(g, gf)
    fp = [extend_graph(h, gf)[0] for h in K3]
    e2 = ed_value(gp, fp)
    return e == e2, {"ed": e, "ed_plus": e2}


def check_unlabel_answers(rng, opts) -> Tuple[bool, dict]:
    nl = rng.randint(1, 2)
    uni = "ab"[:nl]
    g = random_graph(rng, rng.randint(2, 7), rng.uniform(0.3, 0.7), nl, 0.35, universe=uni)
    qs = [random_connected_graph(rng, rng.randint(1, 2), 0.5, n_labels=nl, label_p=0.5, universe=uni)
          for _ in range(rng.randint(1, 2))]
    eta = ed_value(g, K3)
    lhs = hitting_q_labeled(g, K3, qs)
    inst = unlabel_instance(g, K3, qs, eta)
    rhs = hitting_q_unlabeled(inst.graph, inst.family, inst.fragments)
    return (lhs is None) == (rhs is None), {"yes": lhs is not None}


def check_gadgets_nice(rng, opts) -> Tuple[bool, dict]:
    labels = "abc"[:rng.randint(0, 3)]
    gf = build_nice_gadgets(labels, K3, rng.randint(0, 2))
    if opts.get("corrupt"):
        # negative control: two labels share one gadget
        gs = dict(gf.gadgets)
        first = gf.order[0]
        gs[gf.order[-1]] = gs[first]
        gf = GadgetsFunction(gs, gf.order, gf.clique) if len(gf.order) > 1 else \
            GadgetsFunction({first: Graph(range(2))}, gf.order, gf.clique)
    host = random_graph(rng, rng.randint(1, 6), 0.4)
    return verify_nice(gf, host), {"labels": len(labels)}


# ---------------------------------------------------------------- solvers


def neighborhood_violations(g: Graph, family) -> int:
    """Count (Y, S) with Y a minimum deletion set, G[S] free and |Y & S| > |N(S)|."""
    sols = [s.vertices for s in enumerate_optimal(g, family)]
    vs = g.vertices
    bad = 0
    for r in range(1, len(vs) + 1):
        for S in combinations(vs, r):
            S = frozenset(S)
            if not is_free(g.induced(S), family):
                continue
            nb = set()
            for v in S:
                nb |= set(g.neighbors(v))
            nb -= S
            bad += sum(1 for y in sols if len(y & S) > len(nb))
    return bad


def check_neighborhood_bound(rng, opts) -> Tuple[bool, dict]:
    family = rng.choice([K2, K3])
    g = random_graph(rng, rng.randint(1, 9), rng.uniform(0.2, 0.6))
    bad = neighborhood_violations(g, family)
    return bad == 0, {"violations": bad}


_Q_POOL = [path_graph(2), path_graph(3), star_graph(3), path_graph(4), cycle_graph(4),
           Graph(range(4), [(0, 1), (1, 2), (2, 0), (2, 3)])]


def dp_instance(rng):
    while True:
        g = random_graph(rng, rng.randint(5, 8), rng.uniform(0.25, 0.55))
        _, forest = compute_ed(g, K3)
        dec = forest_to_tree_decomposition(forest, g, K3)
        if dec.width <= 3:
            break
    qs = rng.sample(_Q_POOL, rng.randint(1, 2))
    return g, dec, qs


def check_dp_oracle(rng, opts) -> Tuple[bool, dict]:
    g, dec, qs = dp_instance(rng)
    rep = dp_solve(g, dec, K3, qs, size_bound=opts.get("size_bound", 6), report=True)
    ref = hitting_q_unlabeled(g, K3, qs)
    a = rep.solution
    ok = (a is None) == (ref is None) and (a is None or a.size == ref.size)
    over = [f.kind for f in rep.families if not f.within_bound()]
    return ok, {"feasible": ref is not None, "width": dec.width, "bound_violations": len(over),
                "families": len(rep.families)}


# ---------------------------------------------------------------- kernel


def kernel_instance(rng):
    n = rng.randint(6, 12)
    g, X = planted_instance(rng, n, rng.randint(1, 3), 1, "fvs", twin_p=0.5)
    return g, X


def check_kernel_oracle(rng, opts) -> Tuple[bool, dict]:
    g, X = kernel_instance(rng)
    opt = oracles.brute_min_deletion(g, _free_pred(K3))
    k = rng.randint(max(0, opt - 1), opt + 1)
    gs, xs, ks, trace = kernelize(g, X, k, K3, 1)
    ok = True
    for lv in trace.levels:
        gone = set().union(*(r.vertices for r in lv.removed)) if lv.removed else set()
        before = opt_deletion(lv.graph, K3)[0]
        after = opt_deletion(lv.graph.without(gone), K3)[0]
        ok = ok and before == after + lv.delta
    o2, y = opt_deletion(gs, K3)
    ok = ok and (opt <= k) == (o2 <= ks)
    lifted = lift_solution(trace, y)
    ok = ok and is_free(g.without(lifted.vertices), K3) and lifted.size == o2 + trace.delta
    return ok, {"removed": sum(len(lv.removed) for lv in trace.levels), "delta": trace.delta}


def marking_instance(rng):
    """A breaker vertex wired to several small components, each with fewer than n_f labels."""
    n_f = 3
    s_size = rng.randint(1, 2)
    n_labels = rng.randint(s_size * (n_f - 1) + n_f, 9)
    labels = [f"l{i}" for i in range(n_labels)]
    adj_edges = []
    lab = {0: set()}
    nxt = 1
    pool = list(labels)
    rng.shuffle(pool)
    breaker = [0]
    if rng.random() < 0.4:
        breaker.append(nxt)
        lab[nxt] = set()
        adj_edges.append((0, nxt))
        nxt += 1
    while pool:
        take = [pool.pop() for _ in range(min(len(pool), rng.randint(1, n_f - 1)))]
        size = rng.randint(1, 3)
        comp = list(range(nxt, nxt + size))
        nxt += size
        for i in range(1, size):
            adj_edges.append((comp[rng.randrange(i)], comp[i]))
        for v in comp:
            lab[v] = {x for x in take if rng.random() < 0.6}
        lab[comp[0]] |= set(take)
        adj_edges.append((rng.choice(breaker), comp[0]))
    g = Graph(range(nxt), adj_edges, lab, None, 0, labels)
    q_set = saturate(labels, n_f)
    boundary = list(range(100, 100 + s_size))  # only its size matters
    return g, boundary, breaker, q_set, n_f


def check_marking(rng, opts) -> Tuple[bool, dict]:
    g, boundary, breaker, q_set, n_f = marking_instance(rng)
    rep = marking_check(g, boundary, breaker, q_set, n_f)
    return rep.passed, {"heavy": len(rep.heavy), "checked": rep.checked, "marked": len(rep.marked)}


def blocking_instance(rng):
    nl = rng.randint(1, 3)
    uni = "abc"[:nl]
    c = random_connected_graph(rng, rng.randint(3, 7), rng.uniform(0.25, 0.6), n_labels=nl, label_p=0.35, universe=uni)
    qs = [random_connected_graph(rng, rng.randint(1, 2), 0.5, n_labels=nl, label_p=0.6, universe=uni)
          for _ in range(rng.randint(2, 5))]
    return c, qs


def check_blocking(rng, opts) -> Tuple[bool, dict]:
    c, qs = blocking_instance(rng)
    w = find_blocking_subset(c, K3, qs)
    if w is None:
        return True, {"blocking": False}
    misses = 0
    for y in oracles_optimal(c, K3):
        rest = c.without(y)
        if not any(oracles.brute_minor_model(q, rest, labeled=True) is not None for q in w.q_star):
            misses += 1
    return misses == 0, {"blocking": True, "q_star": len(w.q_star), "ed": w.ed, "misses": misses}


def oracles_optimal(g: Graph, family) -> List[frozenset]:
    """All minimum deletion sets by plain subset enumeration."""
    vs = g.vertices
    for r in range(len(vs) + 1):
        found = [frozenset(Y) for Y in combinations(vs, r) if is_free(g.without(Y), family)]
        if found:
            return found
    return []


def check_roundtrip(rng, opts) -> Tuple[bool, dict]:
    nl = rng.randint(0, 3)
    g = random_graph(rng, rng.randint(0, 8), 0.4, nl, 0.4, rng.randint(0, 3))
    g2 = graph_from_dict(graph_to_dict(g))
    same = graph_to_dict(g2) == graph_to_dict(g)
    return same, {}


PROPERTIES: Dict[str, Check] = {
    "minor-oracle": check_minor_oracle,
    "extending-preserves-minors": check_extending_minors,
    "extending-preserves-ed": check_extending_ed,
    "unlabel-answers": check_unlabel_answers,
    "gadgets-nice": check_gadgets_nice,
    "neighborhood-bound": check_neighborhood_bound,
    "dp-oracle": check_dp_oracle,
    "kernel-oracle": check_kernel_oracle,
    "marking": check_marking,
    "blocking": check_blocking,
    "roundtrip": check_roundtrip,
}


@dataclass
class Campaign:
    seed: int
    instances: int
    properties: List[str]
    options: dict = field(default_factory=dict)
    jobs: int = 1

    def rng(self, prop: str, i: int) -> random.Random:
        return random.Random(f"{self.seed}:{prop}:{i}")

    def run(self) -> dict:
        for prop in self.properties:
            if prop not in PROPERTIES:
                raise KeyError(prop)
        work = [(prop, i) for prop in sorted(self.properties) for i in range(self.instances)]
        args = [(self.seed, prop, i, self.options) for prop, i in work]
        if self.jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(self.jobs) as pool:
                results = list(pool.map(_run_one, args, chunksize=4))
        else:
            results = [_run_one(a) for a in args]
        report = {}
        for (prop, i), (ok, info) in zip(work, results):
            entry = report.setdefault(prop, {"passed": 0, "total": self.instances, "failed": [], "details": []})
            entry["details"].append(info)
            if ok:
                entry["passed"] += 1
            else:
                entry["failed"].append(i)
        return report


def _run_one(arg):
    seed, prop, i, options = arg
    return PROPERTIES[prop](random.Random(f"{seed}:{prop}:{i}"), options)

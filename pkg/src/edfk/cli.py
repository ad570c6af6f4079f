"""Command line entry point. Every command prints one JSON document."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .campaign import PROPERTIES, Campaign
from .dp import dp_solve
from .elim import compute_ed, decomposition_from_dict, forest_to_tree_decomposition
from .errors import ContractViolation, GraphParseError, ResourceLimitExceeded
from .gadgets import build_nice_gadgets, extend_graph, unlabel_instance
from .generators import planted_instance, presets, random_graph
from .graph_core import Graph, graph_from_dict, graph_to_dict
from .kernel import kernelize, lift_solution
from .minors import Flavor, find_minor_model
from .solvers import hitting_q_labeled, hitting_q_unlabeled, opt_deletion

SCHEMA = 1


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ContractViolation(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None


def load_graph(path: str) -> Graph:
    doc = _load_json(path)
    if isinstance(doc, dict) and "graph" in doc and "vertices" not in doc:
        doc = doc["graph"]
    return graph_from_dict(doc, path)


def load_graphs(path: str) -> list:
    """A JSON list of graphs, or an object with a ``graphs`` list."""
    doc = _load_json(path)
    if isinstance(doc, dict):
        doc = doc.get("graphs")
    if not isinstance(doc, list):
        raise GraphParseError("expected a list of graphs", path)
    return [graph_from_dict(d, f"{path}[{i}]") for i, d in enumerate(doc)]


def family_arg(name: str) -> list:
    if name.startswith("custom:"):
        fam = load_graphs(name[len("custom:"):])
        if not fam:
            raise ContractViolation("custom family is empty")
        return fam
    table = presets()
    if name not in table:
        raise ContractViolation(f"unknown family {name!r}; use vc, fvs, outerplanar or custom:<file>")
    return table[name]


def _emit(doc: dict, out=None) -> None:
    doc = dict(doc)
    doc["schema"] = SCHEMA
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ids(vs) -> list:
    return sorted(str(v) for v in vs)


# ---------------------------------------------------------------- commands


def cmd_ed(a) -> int:
    g = load_graph(a.input)
    value, forest = compute_ed(g, family_arg(a.family))
    _emit({"command": "ed", "ed": value, "forest": forest.to_json()}, a.out)
    return 0


def cmd_minor(a) -> int:
    p, h = load_graph(a.pattern), load_graph(a.host)
    flavor = Flavor[a.flavor.upper()]
    m = find_minor_model(p, h, flavor)
    model = None if m is None else {str(v): _ids(b) for v, b in sorted(m.items(), key=lambda kv: str(kv[0]))}
    _emit({"command": "minor", "flavor": flavor.name.lower(), "is_minor": m is not None, "model": model}, a.out)
    return 0


def cmd_solve(a) -> int:
    g = load_graph(a.input)
    fam = family_arg(a.family)
    if a.fragments:
        qs = load_graphs(a.fragments)
        opt, _ = opt_deletion(g, fam)
        sol = (hitting_q_labeled if a.labeled else hitting_q_unlabeled)(g, fam, qs)
        doc = {"opt": opt, "hits_q": sol is not None, "witness": None if sol is None else _ids(sol.vertices)}
    else:
        opt, sol = opt_deletion(g, fam)
        doc = {"opt": opt, "witness": _ids(sol.vertices)}
    doc["command"] = "solve"
    _emit(doc, a.out)
    return 0


def cmd_extend(a) -> int:
    g = load_graph(a.input)
    gf = build_nice_gadgets(g.universe, family_arg(a.family), a.eta)
    gp, prov = extend_graph(g, gf)
    _emit({"command": "extend", "graph": graph_to_dict(gp), "gadgets": gf.to_json(),
           "provenance": prov.to_json()}, a.out)
    return 0


def cmd_unlabel(a) -> int:
    g = load_graph(a.input)
    inst = unlabel_instance(g, family_arg(a.family), load_graphs(a.fragments), a.eta)
    _emit({
        "command": "unlabel",
        "graph": graph_to_dict(inst.graph),
        "family": [graph_to_dict(h) for h in inst.family],
        "fragments": [graph_to_dict(q) for q in inst.fragments],
        "gadgets": inst.gadgets.to_json(),
        "provenance": inst.provenance.to_json(),
    }, a.out)
    return 0


def cmd_dp(a) -> int:
    g = load_graph(a.input)
    fam = family_arg(a.family)
    qs = load_graphs(a.fragments) if a.fragments else []
    if a.decomposition:
        dec = decomposition_from_dict(_load_json(a.decomposition), g)
    else:
        _, forest = compute_ed(g, fam)
        dec = forest_to_tree_decomposition(forest, g, fam)
    rep = dp_solve(g, dec, fam, qs, size_bound=a.size_bound, report=True)
    doc = rep.to_json()
    doc["command"] = "dp"
    doc["decomposition"] = dec.to_json()
    _emit(doc, a.out)
    return 0


def cmd_kernelize(a) -> int:
    g = load_graph(a.input)
    fam = family_arg(a.family)
    ids = {str(v): v for v in g.vertices}
    raw = [x for x in (a.modulator or "").split(",") if x]
    missing = [x for x in raw if x not in ids]
    if missing:
        raise ContractViolation(f"modulator ids not in graph: {missing}")
    X = frozenset(ids[x] for x in raw)
    gs, xs, ks, trace = kernelize(g, X, a.k, fam, a.eta, base=a.base,
                                  retain=a.retain, q_budget=a.q_budget)
    doc = {"command": "kernelize", "graph": graph_to_dict(gs), "modulator": _ids(xs), "k": ks,
           "delta": trace.delta}
    if a.lift:
        opt, y = opt_deletion(gs, fam) if a.base == "identity" else (None, None)
        lifted = lift_solution(trace, y)
        doc["lifted"] = {"size": lifted.size, "witness": _ids(lifted.vertices)}
    _emit(doc, a.out)
    if a.trace:
        _emit({"command": "kernelize-trace", **trace.to_json()}, a.trace)
    return 0


def cmd_verify(a) -> int:
    props = a.property or sorted(PROPERTIES)
    unknown = [p for p in props if p not in PROPERTIES]
    if unknown:
        raise ContractViolation(f"unknown properties {unknown}; choose from {sorted(PROPERTIES)}")
    opts = {"corrupt": a.corrupt_gadgets}
    report = Campaign(a.seed, a.instances, props, opts, jobs=a.jobs).run()
    if not a.details:
        for r in report.values():
            r.pop("details")
    ok = all(r["passed"] == r["total"] for r in report.values())
    _emit({"command": "verify", "seed": a.seed, "instances": a.instances, "ok": ok, "properties": report}, a.out)
    return 0 if ok else 1


def cmd_gen(a) -> int:
    rng = random.Random(a.seed)
    if a.kind == "random":
        g = random_graph(rng, a.n, a.p, a.labels, a.label_p)
        doc = {"command": "gen", "kind": "random", "graph": graph_to_dict(g)}
    else:
        g, X = planted_instance(rng, a.n, a.modulator, a.eta, a.family, twin_p=a.twin_p)
        doc = {"command": "gen", "kind": "planted", "graph": graph_to_dict(g), "modulator": _ids(X),
               "eta": a.eta}
    _emit(doc, a.out)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edfk", description="Elimination distance, minor search and F-deletion tools.")
    ap.add_argument("--ceiling", type=int, help="brute-force ceiling (overrides EDFK_CEILING)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=True, inp=True):
        if inp:
            p.add_argument("--in", dest="input", required=True, help="graph JSON file or -")
        if family:
            p.add_argument("--family", default="fvs", help="vc, fvs, outerplanar or custom:<file>")
        p.add_argument("--out", help="write JSON here instead of stdout")
        return p

    common(sub.add_parser("ed", help="elimination distance with a witness forest")).set_defaults(fn=cmd_ed)

    p = common(sub.add_parser("minor", help="minor containment with a model"), family=False, inp=False)
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--flavor", default="plain", choices=[f.name.lower() for f in Flavor])
    p.set_defaults(fn=cmd_minor)

    p = common(sub.add_parser("solve", help="minimum deletion set, optionally hitting fragments"))
    p.add_argument("--fragments", help="JSON list of fragment graphs")
    p.add_argument("--labeled", action="store_true", help="fragments are labeled minors")
    p.set_defaults(fn=cmd_solve)

    p = common(sub.add_parser("extend", help="glue gadgets and drop labels"))
    p.add_argument("--eta", type=int, default=0)
    p.set_defaults(fn=cmd_extend)

    p = common(sub.add_parser("unlabel", help="labeled instance to an unlabeled one"))
    p.add_argument("--fragments", required=True)
    p.add_argument("--eta", type=int, required=True)
    p.set_defaults(fn=cmd_unlabel)

    p = common(sub.add_parser("dp", help="exhaustive-family dynamic program"))
    p.add_argument("--fragments")
    p.add_argument("--decomposition", help="tree decomposition JSON; computed from an elimination forest if absent")
    p.add_argument("--size-bound", type=int, default=6)
    p.set_defaults(fn=cmd_dp)

    p = common(sub.add_parser("kernelize", help="reduce components level by level"))
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--modulator", default="", help="comma separated vertex ids")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--base", choices=["identity", "exact"], default="identity")
    p.add_argument("--retain", type=int, default=1)
    p.add_argument("--q-budget", type=int, default=2)
    p.add_argument("--trace", help="write the reduction trace here")
    p.add_argument("--lift", action="store_true", help="solve the kernel and lift the solution back")
    p.set_defaults(fn=cmd_kernelize)

    p = sub.add_parser("verify", help="run seeded property campaigns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--property", action="append", help=f"one of {', '.join(sorted(PROPERTIES))}; repeatable")
    p.add_argument("--corrupt-gadgets", action="store_true", help="negative control for gadgets-nice")
    p.add_argument("--details", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=["random", "planted"], default="random")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--labels", type=int, default=0)
    p.add_argument("--label-p", type=float, default=0.3)
    p.add_argument("--modulator", type=int, default=2)
    p.add_argument("--eta", type=int, default=1)
    p.add_argument("--family", choices=["fvs", "vc"], default="fvs")
    p.add_argument("--twin-p", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    if a.ceiling is not None:
        os.environ["EDFK_CEILING"] = str(a.ceiling)
    try:
        return a.fn(a)
    except ResourceLimitExceeded as exc:
        print(f"edfk: {exc}", file=sys.stderr)
        return 3
    except ContractViolation as exc:
        print(f"edfk: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end acceptance checks, one per criterion, at full instance counts.

Each test prints a single PASS/FAIL line with its timing. Run directly with
``python tests/test_acceptance.py`` to get just the summary lines.
"""
import random
import sys
import time

import pytest

from edfk.campaign import (check_blocking, check_dp_oracle, check_extending_ed, check_extending_minors,
                           check_kernel_oracle, check_marking, check_minor_oracle, check_neighborhood_bound,
                           check_unlabel_answers)
from edfk.minors import Flavor

pytestmark = pytest.mark.acceptance

_DP_DETAILS: list = []


def _campaign(name, check, count, opts=None):
    opts = opts or {}
    failed, details = [], []
    for i in range(count):
        ok, info = check(random.Random(f"acceptance:{name}:{i}"), opts)
        details.append(info)
        if not ok:
            failed.append(i)
    return failed, details


def _report(capsys, number, title, ok, elapsed, budget, extra=""):
    within = elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    line = f"[{verdict}] criterion {number}: {title} ({elapsed:.1f}s of {budget}s){extra}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok and within


def test_criterion_1_minor_search(capsys):
    t0 = time.time()
    bad = {}
    for flavor in Flavor:
        failed, _ = _campaign(f"minor-{flavor.name}", check_minor_oracle, 500, {"flavor": flavor})
        bad[flavor.name] = len(failed)
    ok = not any(bad.values())
    assert _report(capsys, 1, "minor search agrees with partition oracle, 500 per flavor", ok,
                   time.time() - t0, 300, f" mismatches={bad}")


def test_criterion_2_extending_preserves_minors(capsys):
    t0 = time.time()
    failed, details = _campaign("extend-minors", check_extending_minors, 200)
    yes = sum(d["minor"] for d in details)
    assert _report(capsys, 2, "extension preserves labeled minors both ways, projection valid", not failed,
                   time.time() - t0, 600, f" failed={failed} minors={yes}/200")


def test_criterion_3_extending_preserves_ed(capsys):
    t0 = time.time()
    failed, details = _campaign("extend-ed", check_extending_ed, 50, {"eta": 2})
    assert _report(capsys, 3, "extension preserves elimination distance (K3, eta<=2)", not failed,
                   time.time() - t0, 600, f" failed={failed}")


def test_criterion_4_neighborhood_bound(capsys):
    t0 = time.time()
    failed, details = _campaign("neighborhood", check_neighborhood_bound, 300)
    total = sum(d["violations"] for d in details)
    assert _report(capsys, 4, "|Y & S| <= |N(S)| over all minimum deletion sets", not failed,
                   time.time() - t0, 300, f" violations={total}")


def test_criterion_5_dp_vs_brute_force(capsys):
    t0 = time.time()
    failed, details = _campaign("dp", check_dp_oracle, 200)
    _DP_DETAILS[:] = details
    widths = max(d["width"] for d in details)
    feas = sum(d["feasible"] for d in details)
    assert _report(capsys, 5, "dp_solve equals hitting-Q brute force", not failed, time.time() - t0, 900,
                   f" failed={failed} feasible={feas}/200 max_width={widths}")


def test_criterion_6_unlabeling(capsys):
    t0 = time.time()
    failed, details = _campaign("unlabel", check_unlabel_answers, 100)
    yes = sum(d["yes"] for d in details)
    assert _report(capsys, 6, "unlabeling keeps yes/no answers", not failed, time.time() - t0, 900,
                   f" failed={failed} yes={yes}/100")


def test_criterion_7_kernel(capsys):
    t0 = time.time()
    failed, details = _campaign("kernel", check_kernel_oracle, 100)
    removed = sum(d["removed"] for d in details)
    assert _report(capsys, 7, "kernel keeps answers, per-step delta exact, lift valid", not failed,
                   time.time() - t0, 1200, f" failed={failed} components_removed={removed}")


def test_criterion_8_marking(capsys):
    t0 = time.time()
    failed, details = _campaign("marking", check_marking, 30)
    heavy = sum(d["heavy"] for d in details)
    checked = sum(d["checked"] for d in details)
    assert _report(capsys, 8, "marked labels keep a Q-minor against every small Y", not failed,
                   time.time() - t0, 600, f" failed={failed} heavy={heavy} pairs={checked}")


def test_criterion_9_blocking(capsys):
    t0 = time.time()
    failed, details = _campaign("blocking", check_blocking, 50)
    scatter = sorted((d["q_star"], d["ed"]) for d in details if d["blocking"])
    ok = _report(capsys, 9, "blocking subsets verified against all optima", not failed, time.time() - t0, 600,
                 f" failed={failed} blocking={len(scatter)}/50")
    line = "  |Q*| vs ed: " + " ".join(f"({q},{e})" for q, e in scatter)
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print(line)
    assert ok


def test_criterion_10_family_bounds(capsys):
    t0 = time.time()
    if not _DP_DETAILS:
        _, details = _campaign("dp", check_dp_oracle, 200)
        _DP_DETAILS[:] = details
    over = sum(d["bound_violations"] for d in _DP_DETAILS)
    fams = sum(d["families"] for d in _DP_DETAILS)
    assert _report(capsys, 10, "every exhaustive family within its size bound", over == 0,
                   time.time() - t0, 900, f" families={fams} violations={over}")


if __name__ == "__main__":
    results = []
    tests = [(int(n.split("_")[2]), fn) for n, fn in globals().items() if n.startswith("test_criterion_")]
    for _, fn in sorted(tests):
        try:
            fn(None)
            results.append(True)
        except AssertionError:
            results.append(False)
    sys.exit(0 if all(results) else 1)

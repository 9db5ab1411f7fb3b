"""Acceptance criteria, one test per criterion.

Each check prints a single ``criterion N: PASS|FAIL ...`` line (outside
pytest's capture) and then asserts.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import P  # noqa: E402
from mectest.adversary import distinguishing_queries, hard_instance, worst_case_count  # noqa: E402
from mectest.dsep import CiQuery, Oracle, d_separated, d_separated_moral  # noqa: E402
from mectest.generators import all_dags, complete_dag, matching_dag, random_order_dag  # noqa: E402
from mectest.graphs import Dag, max_in_degree  # noqa: E402
from mectest.mec import (  # noqa: E402
    essential_graph,
    markov_equivalent,
    maximal_undirected_cliques,
    mec_size_bruteforce,
    meek_closure,
    random_extension,
)
from mectest.pc import pc_baseline, pc_formula_reference  # noqa: E402
from mectest.polytope import build_associahedron, minimal_imap  # noqa: E402
from mectest.tester import build_plan, class2_budget, run_membership_test  # noqa: E402


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    capman = _CAPTURE.get("capman")
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
    return ok


_CAPTURE = {}


@pytest.fixture(autouse=True)
def _capture_manager(request):
    _CAPTURE["capman"] = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _CAPTURE.pop("capman", None)


def random_dags(seed, count, n_range, p_range=(0.0, 1.0)):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(*n_range)
        yield rng, random_order_dag(n, rng.uniform(*p_range), rng)


# ---------------------------------------------------------------------------


def check_1():
    t0 = time.perf_counter()
    ds = list(all_dags(4))
    es = [essential_graph(g) for g in ds]
    plans = [build_plan(e) for e in es]
    bad = 0
    queries = 0
    for e, plan, g in zip(es, plans, ds):
        for h in ds:
            o = Oracle(h)
            r = run_membership_test(e, o, plan=plan)
            queries += r.queries_issued
            bad += r.verdict != markov_equivalent(g, h)
    secs = time.perf_counter() - t0
    pairs = len(ds) ** 2
    ok = bad == 0 and pairs == 543 * 543 and secs < 300
    return report(1, ok, f"{pairs} pairs, {bad} discrepancies, {queries} queries, {secs:.1f}s (limit 300s)")


def check_2():
    rng = random.Random(2)
    bad = 0
    counts = {"member": 0, "adversarial": 0, "random": 0}
    for n in (6, 7, 8):
        for k in range(1000):
            g = random_order_dag(n, rng.uniform(0.2, 0.8), rng)
            e = essential_graph(g)
            kind = ("member", "adversarial", "random")[k % 3]
            if kind == "adversarial" and e.s < 2:
                kind = "random"
            if kind == "member":
                h = random_extension(e, rng)
            elif kind == "adversarial":
                h = hard_instance(e).h
            else:
                h = random_order_dag(n, rng.uniform(0.2, 0.8), rng)
            counts[kind] += 1
            bad += run_membership_test(e, Oracle(h)).verdict != markov_equivalent(g, h)
    ok = bad == 0
    return report(2, ok, f"3000 pairs at n=6,7,8 {counts}, {bad} discrepancies")


def check_3():
    worst_plan = worst_total = 0.0
    over = 0
    plan_total = issued_total = 0
    for rng, g in random_dags(3, 500, (1, 8)):
        e = essential_graph(g)
        budget = class2_budget(e)
        plan = build_plan(e)
        for h in (random_extension(e, rng), random_order_dag(g.n, rng.random(), rng)):
            r = run_membership_test(e, Oracle(h))
            issued_total += r.queries_issued
            worst_total = max(worst_total, r.queries_issued / (g.n ** 2 + budget))
            over += r.queries_issued > g.n ** 2 + budget
        plan_total += len(plan.class2)
        worst_plan = max(worst_plan, len(plan.class2) / budget)
        over += len(plan.class2) > budget
    ok = over == 0
    return report(
        3,
        ok,
        f"500 CPDAGs, {over} over budget; class-II plan total {plan_total}, issued total {issued_total}, "
        f"max plan/budget {worst_plan:.4f}, max issued/(n^2+budget) {worst_total:.4f}",
    )


def check_4():
    t0 = time.perf_counter()
    ok = [worst_case_count(3), worst_case_count(4), worst_case_count(5)] == [3, 4, 10]
    ok &= all(worst_case_count(s) == math.comb(s, math.ceil(s / 2) - 1) for s in range(2, 13))
    details = []
    for s in (3, 4, 5):
        inst = hard_instance(essential_graph(complete_dag(s)))
        dq = distinguishing_queries(inst.h, inst.g, (inst.i, inst.j))
        wrong = sum(q.c & set(inst.S) != inst.K for q, _, _ in dq)
        ok &= bool(dq) and wrong == 0
        details.append(f"s={s}: {len(dq)} distinguishing, {wrong} with C&S != K")
    secs = time.perf_counter() - t0
    ok &= secs < 30
    return report(4, ok, "; ".join(details) + f"; counts 3,4,10; {secs:.2f}s")


def check_5():
    rng = random.Random(5)
    instances = violations = distinguishing = 0
    while instances < 100:
        g = random_order_dag(rng.randint(2, 6), rng.random(), rng)
        e = essential_graph(g)
        if e.s < 2:
            continue
        g2 = random_extension(e, rng)
        und = sorted(x for x in g2.edges if x in e.pdag.undirected or x[::-1] in e.pdag.undirected)
        edge = rng.choice(und)
        g1 = g2.remove_edge(*edge)
        instances += 1
        for q, r1, r2 in distinguishing_queries(g1, g2, edge):
            distinguishing += 1
            # a disagreement must be independent in the smaller graph only
            violations += r2 and not r1
    ok = violations == 0
    return report(5, ok, f"{instances} one-edge-short instances, {distinguishing} distinguishing queries, {violations} violations")


def check_6():
    dis = singles = 0
    for g in all_dags(4):
        for a, b in itertools.combinations(range(4), 2):
            rest = [v for v in range(4) if v not in (a, b)]
            for k in range(3):
                for C in itertools.combinations(rest, k):
                    q = CiQuery.of(a, b, C)
                    singles += 1
                    dis += d_separated(g, q) != d_separated_moral(g, q)
    rng = random.Random(6)
    for _ in range(500):
        g = random_order_dag(8, rng.random(), rng)
        labels = [rng.randrange(4) for _ in range(8)]
        labels[0], labels[1] = 0, 1
        q = CiQuery(
            frozenset(v for v in range(8) if labels[v] == 0),
            frozenset(v for v in range(8) if labels[v] == 1),
            frozenset(v for v in range(8) if labels[v] == 2),
        )
        dis += d_separated(g, q) != d_separated_moral(g, q)
    ok = dis == 0
    return report(6, ok, f"{singles} singleton queries on 4 nodes + 500 set queries at n=8, {dis} disagreements")


def check_7():
    ds = list(all_dags(4))
    cps = [essential_graph(g).pdag for g in ds]
    bad = sum((cps[x] == cps[y]) != markov_equivalent(g, h) for x, g in enumerate(ds) for y, h in enumerate(ds))
    rules = {
        1: (P("1->2, 2-3"), (1, 2)),
        2: (P("1->2, 2->3, 1-3"), (0, 2)),
        3: (P("1-2, 1-3, 1-4, 2->3, 4->3"), (0, 2)),
        4: (P("1-2, 1-3, 1-4, 3->2, 4->3"), (0, 1)),
    }
    rule_ok = {r: arc in meek_closure(p, rules=(r,)).directed for r, (p, arc) in rules.items()}
    ok = bad == 0 and all(rule_ok.values())
    return report(7, ok, f"{len(ds) ** 2} pairs, {bad} mismatches; single-rule instances {rule_ok}")


def check_8():
    worst = 0
    over = 0
    for _, g in random_dags(8, 500, (1, 10)):
        e = essential_graph(g)
        k = len(maximal_undirected_cliques(e))
        over += k > g.n
        worst = max(worst, k / g.n)
    return report(8, over == 0, f"500 CPDAGs, {over} with more than n maximal cliques, max cliques/n {worst:.2f}")


def check_9():
    t0 = time.perf_counter()
    h = Dag(3, [(0, 2), (1, 2)])
    A = build_associahedron(h)
    sparse = [A.vertices[k].imap for k in A.sparsest]
    ok = len(A.contracted) == 1 and len(A.vertices) == 5 and sparse == [h]
    violations = 0
    graphs = list(all_dags(3))
    for g in graphs:
        B = build_associahedron(g)  # raises on disagreement
        for v in B.vertices:
            violations += sum(minimal_imap(g, p) != v.imap for p in v.perms)
    secs = time.perf_counter() - t0
    ok &= violations == 0 and secs < 1.0
    return report(
        9,
        ok,
        f"1->3<-2: {len(A.contracted)} contracted, {len(A.vertices)} vertices, sparsest = [H]: {sparse == [h]}; "
        f"{len(graphs)} DAGs on 3 nodes, {violations} agreement violations; {secs * 1000:.0f} ms",
    )


def check_10():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for n, size in ((8, 16), (10, 32), (12, 64)):
        g = matching_dag(n)
        e = essential_graph(g)
        m = mec_size_bruteforce(e)
        r = run_membership_test(e, Oracle(g))
        budget = class2_budget(e)
        ok &= e.s == 2 and m == size and budget <= n ** 3 * 4 and r.queries_issued <= n ** 3 * 4
        parts.append(f"n={n}: s={e.s}, class size {m}, tester {r.queries_issued} queries, budget {budget}")
    secs = time.perf_counter() - t0
    ok &= secs < 60
    return report(10, ok, "; ".join(parts) + f"; {secs:.1f}s")


def check_11():
    wrong = 0
    measured = formula = 0
    for _, h in random_dags(11, 200, (1, 8)):
        cp, q = pc_baseline(Oracle(h))
        wrong += cp != essential_graph(h).pdag
        measured += q
        formula += pc_formula_reference(h.n, max_in_degree(h))
    return report(11, wrong == 0, f"200 hiddens, {wrong} wrong CPDAGs; PC queries {measured} vs reference formula total {formula}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{k}" for k in range(1, 12)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    sys.exit(0 if all(results) else 1)

"""Canonical CI test plans and MEC membership testing against an oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .dsep import CiQuery, Oracle, d_separated
from .graphs import Dag, GraphError, topological_order
from .mec import EssentialGraph, MecStats, consistent_extension, essential_graph, undirected_cliques_within

CLASS_I = "class-I"
CLASS_II = "class-II"


class NotAnExtension(GraphError):
    pass


@dataclass
class TestPlan:
    class1: list[CiQuery]
    class2: list[CiQuery]
    budget: MecStats

    __test__ = False  # not a pytest class


@dataclass
class Failure:
    query: CiQuery
    expected_independent: bool
    got_independent: bool
    tag: str

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "expected": "independent" if self.expected_independent else "dependent",
            "got": "independent" if self.got_independent else "dependent",
            "class": self.tag,
        }


@dataclass
class TestReport:
    verdict: bool
    failing_query: Failure | None
    queries_issued: int
    queries_unique: int
    plan_sizes: tuple[int, int]
    failures: list[Failure] = field(default_factory=list)

    __test__ = False

    def to_json(self) -> dict:
        return {
            "verdict": "member" if self.verdict else "non-member",
            "failing_query": self.failing_query.to_json() if self.failing_query else None,
            "queries_issued": self.queries_issued,
            "queries_unique": self.queries_unique,
            "plan_sizes": {"class1": self.plan_sizes[0], "class2": self.plan_sizes[1]},
            "failures": [f.to_json() for f in self.failures],
        }


def class_i_plan(e: EssentialGraph, rep: Dag | None = None, check: bool = True) -> list[CiQuery]:
    """Independence tests for every non-adjacent pair.

    For a pair ``{a, b}`` the member appearing later in the representative's
    topological order plays ``i`` (so the other cannot be its descendant) and
    the query is ``i _|_ j | pa_rep(i)``.  Sorted by ``(i, j)``.
    """
    if rep is None:
        rep = consistent_extension(e)
    elif check and essential_graph(rep) != e:
        raise NotAnExtension("representative is not a member of the given class")
    pos = {v: k for k, v in enumerate(topological_order(rep))}
    tests = []
    for a in range(e.n):
        for b in range(a + 1, e.n):
            if rep.adjacent(a, b):
                continue
            i, j = (a, b) if pos[a] > pos[b] else (b, a)
            tests.append((i, j, CiQuery.of(i, j, rep.parents(i) - {j})))
    tests.sort(key=lambda t: (t[0], t[1]))
    plan = [q for _, _, q in tests]
    if check:
        for q in plan:
            # local Markov property of the representative
            assert d_separated(rep, q), f"class-I query {q} is not implied by the representative"
    return plan


def iter_class_ii(e: EssentialGraph) -> Iterator[CiQuery]:
    """Lazily generate the dependence tests for every adjacent pair and both roles.

    For role ``(i, j)`` each undirected clique ``C`` within the undirected
    neighbours of ``i`` gives ``i vs j | (pa(i) | C) - {j}``.  Cliques that
    contain ``j`` are enumerated too; ``j`` is stripped and repeats for the
    same pair are dropped.
    """
    for a in range(e.n):
        for b in range(a + 1, e.n):
            if not e.adjacent(a, b):
                continue
            seen: set[frozenset[int]] = set()
            for i, j in ((a, b), (b, a)):
                pa = e.parents(i)
                for C in undirected_cliques_within(e, e.undirected_neighbors(i)):
                    cond = (pa | C) - {j}
                    if cond in seen:
                        continue
                    seen.add(cond)
                    yield CiQuery.of(i, j, cond)


def class_ii_plan(e: EssentialGraph) -> list[CiQuery]:
    return list(iter_class_ii(e))


def class2_budget(e: EssentialGraph) -> int:
    return e.n ** 3 * 2 ** e.s


def build_plan(e: EssentialGraph, rep: Dag | None = None) -> TestPlan:
    return TestPlan(class_i_plan(e, rep), class_ii_plan(e), e.stats())


def run_membership_test(
    e: EssentialGraph,
    oracle: Oracle,
    plan: TestPlan | None = None,
    exhaustive: bool = False,
) -> TestReport:
    """Decide whether the oracle's hidden DAG belongs to the class of ``e``.

    Class-I tests run first, then class-II; the first unexpected answer ends
    the run unless ``exhaustive`` is set.  Without a prebuilt ``plan`` the
    class-II tests are generated lazily, and ``plan_sizes[1]`` then counts the
    class-II tests generated before stopping.
    """
    if oracle.n != e.n:
        raise GraphError(f"node-count mismatch: class has {e.n} nodes, hidden graph {oracle.n}")
    t0, u0 = oracle.total_queries, oracle.unique_queries
    if plan is None:
        class1 = class_i_plan(e, check=False)
        class2 = iter_class_ii(e)
    else:
        class1, class2 = plan.class1, plan.class2
    failures: list[Failure] = []
    n2 = 0

    def report():
        return TestReport(
            verdict=not failures,
            failing_query=failures[0] if failures else None,
            queries_issued=oracle.total_queries - t0,
            queries_unique=oracle.unique_queries - u0,
            plan_sizes=(len(class1), n2 if plan is None else len(plan.class2)),
            failures=failures,
        )

    for q in class1:
        if not oracle.query(q):
            failures.append(Failure(q, True, False, CLASS_I))
            if not exhaustive:
                return report()
    for q in class2:
        n2 += 1
        if oracle.query(q):
            failures.append(Failure(q, False, True, CLASS_II))
            if not exhaustive:
                return report()
    return report()


def find_imap_violation(g: Dag, oracle: Oracle):
    """First reason ``g`` is not a minimal I-map of the hidden DAG, or None.

    Returns ``("class-I", query)`` when ``g`` is not an I-map and
    ``("removable", (i, j))`` when edge ``i -> j`` can be dropped.
    """
    e = essential_graph(g)
    for q in class_i_plan(e, g, check=False):
        if not oracle.query(q):
            return CLASS_I, q
    for i, j in sorted(g.edges):
        if oracle.query(CiQuery.of(j, i, g.parents(j) - {i})):
            return "removable", (i, j)
    return None


def is_minimal_imap_test(g: Dag, oracle: Oracle) -> tuple[bool, int]:
    """Whether ``g`` is a minimal I-map of the hidden DAG, and the number of queries spent."""
    t0 = oracle.total_queries
    ok = find_imap_violation(g, oracle) is None
    return ok, oracle.total_queries - t0

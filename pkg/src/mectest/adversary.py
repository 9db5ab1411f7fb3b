"""Worst-case hidden graphs one undirected edge short of a class, and brute-force
checks of the path and conditioning-set properties such pairs satisfy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .dsep import CiQuery, d_separated
from .graphs import Dag, GraphError
from .mec import EssentialGraph, clique_upstream_extension, essential_graph

QUERY_GUARD = 9
PATH_GUARD = 8


class NoUndirectedEdge(GraphError):
    pass


class PreconditionError(GraphError):
    pass


def worst_case_count(s: int) -> int:
    """``binomial(s, ceil(s/2) - 1)``: candidate conditioning sets an adversary can hide behind."""
    if s < 2:
        raise ValueError("worst_case_count needs s >= 2")
    return math.comb(s, (s + 1) // 2 - 1)


@dataclass(frozen=True)
class HardInstance:
    g: Dag
    h: Dag
    i: int
    j: int
    S: tuple[int, ...]
    K: frozenset[int]
    worst_case_count: int

    def to_json(self) -> dict:
        return {
            "i": self.i + 1,
            "j": self.j + 1,
            "S": [v + 1 for v in self.S],
            "K": [v + 1 for v in sorted(self.K)],
            "s": len(self.S),
            "worst_case_count": self.worst_case_count,
        }


def hard_instance(e: EssentialGraph) -> HardInstance:
    """Hidden DAG that differs from a class member by one undirected edge.

    A maximum undirected clique ``S`` is made most upstream and ordered by id;
    ``i`` is its first node and ``j`` the node at position ``ceil(s/2) + 1``,
    so the ``ceil(s/2) - 1`` clique nodes in between form ``K``.
    """
    if e.s < 2:
        raise NoUndirectedEdge("the class has no undirected edge")
    S = next(c for c in e.max_cliques if len(c) == e.s)
    order = sorted(S)
    g = clique_upstream_extension(e, S, order)
    half = (e.s + 1) // 2
    i, j = order[0], order[half]
    K = frozenset(order[1:half])
    return HardInstance(g, g.remove_edge(i, j), i, j, tuple(order), K, worst_case_count(e.s))


def _check_pair(g1: Dag, g2: Dag, edge, guard: int) -> EssentialGraph:
    i, j = edge
    if g1.n != g2.n:
        raise PreconditionError("graphs have different node counts")
    if g1.n > guard:
        raise PreconditionError(f"brute force limited to n <= {guard}, got {g1.n}")
    if not g2.has_edge(i, j):
        raise PreconditionError(f"{i}->{j} is not an edge of the larger graph")
    if g1.edges != g2.edges - {(i, j)}:
        raise PreconditionError("graphs must differ by exactly the given edge")
    e2 = essential_graph(g2)
    if j not in e2.undirected_neighbors(i):
        raise PreconditionError(f"{i}->{j} is not undirected in the essential graph")
    return e2


def _assignments(n: int):
    # every node goes to A, B, C or nowhere; A, B non-empty, min(A) < min(B)
    for labels in itertools.product(range(4), repeat=n):
        a = [v for v in range(n) if labels[v] == 0]
        if not a:
            continue
        b = [v for v in range(n) if labels[v] == 1]
        if not b or a[0] > b[0]:
            continue
        c = [v for v in range(n) if labels[v] == 2]
        yield CiQuery(frozenset(a), frozenset(b), frozenset(c))


def distinguishing_queries(g1: Dag, g2: Dag, edge, guard: int = QUERY_GUARD) -> list[tuple[CiQuery, bool, bool]]:
    """All ``(query, independent_in_g1, independent_in_g2)`` on which the graphs disagree."""
    _check_pair(g1, g2, edge, guard)
    out = []
    for q in _assignments(g1.n):
        r1 = d_separated(g1, q)
        r2 = d_separated(g2, q)
        if r1 != r2:
            out.append((q, r1, r2))
    out.sort(key=lambda t: (sorted(t[0].a), sorted(t[0].b), sorted(t[0].c)))
    return out


@dataclass
class SandwichReport:
    holds: bool
    queries: int
    upper_equality: int
    cliques: list[frozenset[int]]
    violations: list[CiQuery]


def sandwich_report(g1: Dag, g2: Dag, edge, guard: int = QUERY_GUARD) -> SandwichReport:
    """Check the conditioning-set sandwich on every distinguishing query.

    For each maximal undirected clique ``S`` of ``g2``'s class containing the
    edge, a distinguishing ``C`` must satisfy
    ``pa(j) & ch(i) & S  <=  C & S  <=  (pa(j) - {i}) & S``.
    ``upper_equality`` counts the (query, clique) cases where the upper bound
    is attained.
    """
    e2 = _check_pair(g1, g2, edge, guard)
    i, j = edge
    cliques = [S for S in e2.max_cliques if i in S and j in S]
    lower = g2.parents(j) & g2.children(i)
    upper = g2.parents(j) - {i}
    violations = []
    eq = 0
    dq = distinguishing_queries(g1, g2, edge, guard)
    for q, r1, r2 in dq:
        ok = r1 and not r2
        for S in cliques:
            cs = q.c & S
            if not (lower & S <= cs <= upper & S):
                ok = False
            elif cs == upper & S:
                eq += 1
        if not ok:
            violations.append(q)
    return SandwichReport(not violations, len(dq), eq, cliques, violations)


def verify_conditioning_sandwich(g1: Dag, g2: Dag, edge, guard: int = QUERY_GUARD) -> bool:
    return sandwich_report(g1, g2, edge, guard).holds


# ---------------------------------------------------------------------------
# explicit path enumeration


@dataclass(frozen=True)
class PathWitness:
    path: tuple[int, ...]
    colliders: frozenset[int]
    active_in_g1: bool
    active_in_g2: bool


def simple_paths(g: Dag, a: int, b: int):
    """Simple paths from ``a`` to ``b`` in the skeleton of ``g``."""
    nbrs = [g.parents(v) | g.children(v) for v in range(g.n)]
    path = [a]
    on = {a}

    def rec(v):
        if v == b:
            yield tuple(path)
            return
        for w in sorted(nbrs[v]):
            if w not in on:
                on.add(w)
                path.append(w)
                yield from rec(w)
                path.pop()
                on.discard(w)

    yield from rec(a)


def path_colliders(g: Dag, path) -> frozenset[int]:
    return frozenset(
        path[k]
        for k in range(1, len(path) - 1)
        if g.has_edge(path[k - 1], path[k]) and g.has_edge(path[k + 1], path[k])
    )


def path_active(g: Dag, path, C) -> bool:
    """Active given ``C``: no conditioned non-collider, every collider has a conditioned closed descendant."""
    C = frozenset(C)
    col = path_colliders(g, path)
    for v in path[1:-1]:
        if v in col:
            if not ((g.descendants(v) | {v}) & C):
                return False
        elif v in C:
            return False
    return True


def d_separated_by_paths(g: Dag, a: int, b: int, C) -> bool:
    """Definition-level d-separation by enumerating simple paths (exponential, for tests)."""
    return not any(path_active(g, p, C) for p in simple_paths(g, a, b))


def common_paths(g1: Dag, g2: Dag, a: int, b: int, C) -> list[PathWitness]:
    """Paths between ``a`` and ``b`` present in both graphs, with their activity in each."""
    out = []
    for p in simple_paths(g1, a, b):
        if all(g2.adjacent(p[k], p[k + 1]) for k in range(len(p) - 1)):
            out.append(PathWitness(p, path_colliders(g2, p), path_active(g1, p, C), path_active(g2, p, C)))
    return out


def verify_path_preservation(g1: Dag, g2: Dag, edge, a: int, b: int, C, guard: int = PATH_GUARD) -> bool:
    """Check, by explicit path enumeration, that for the one-edge-short pair:

    1. a common path blocked by ``C`` in ``g2`` is blocked in ``g1``;
    2. if a common path is active in ``g2``, some path of ``g1`` joining
       ``a`` and ``b`` is active given ``C``.
    """
    _check_pair(g1, g2, edge, guard)
    C = frozenset(C)
    if a == b or a in C or b in C:
        raise ValueError("a, b must be distinct and outside C")
    witnesses = common_paths(g1, g2, a, b, C)
    for w in witnesses:
        if not w.active_in_g2 and w.active_in_g1:
            return False
    if any(w.active_in_g2 for w in witnesses):
        if not any(path_active(g1, p, C) for p in simple_paths(g1, a, b)):
            return False
    return True

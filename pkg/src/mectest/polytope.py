"""DAG associahedron for small ``n``: the permutohedron with adjacent
transpositions contracted wherever the swapped pair is separated by the prefix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dsep import CiQuery, Oracle, d_separated
from .graphs import Dag, topological_order
from .mec import essential_graph, mec_members
from .tester import class_ii_plan

BUILD_GUARD = 8
MEC_GUARD = 7


class AssociahedronError(RuntimeError):
    pass


def _ci_source(h):
    if isinstance(h, Oracle):
        return h.query, h.n
    return (lambda q: d_separated(h, q)), h.n


def _cached_ci(h: Dag):
    cache: dict[tuple[int, int, frozenset[int]], bool] = {}

    def ci(a, b, cond):
        key = (a, b, cond) if a < b else (b, a, cond)
        r = cache.get(key)
        if r is None:
            r = cache[key] = d_separated(h, CiQuery(frozenset((a,)), frozenset((b,)), cond))
        return r

    return ci


def minimal_imap(h, pi) -> Dag:
    """Minimal I-map of ``h`` along the order ``pi``.

    ``pi[p] -> pi[q]`` (p < q) is kept unless ``pi[p]`` and ``pi[q]`` are
    separated by the other predecessors of ``pi[q]``; exactly
    ``n(n-1)/2`` CI queries.  ``h`` may be a Dag or an Oracle.
    """
    query, n = _ci_source(h)
    pi = tuple(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError("pi must be a permutation of the nodes")
    edges = []
    for q in range(n):
        before = frozenset(pi[:q])
        for p in range(q):
            if not query(CiQuery(frozenset((pi[p],)), frozenset((pi[q],)), before - {pi[p]})):
                edges.append((pi[p], pi[q]))
    return Dag(n, edges)


def _imap_edges(ci, n, pi) -> frozenset[tuple[int, int]]:
    edges = []
    for q in range(n):
        before = frozenset(pi[:q])
        for p in range(q):
            if not ci(pi[p], pi[q], before - {pi[p]}):
                edges.append((pi[p], pi[q]))
    return frozenset(edges)


@dataclass
class Vertex:
    perms: list[tuple[int, ...]]
    imap: Dag

    @property
    def edge_count(self) -> int:
        return len(self.imap.edges)


@dataclass
class Associahedron:
    n: int
    vertices: list[Vertex]
    adjacency: set[tuple[int, int]]
    contracted: set[tuple[tuple[int, ...], int]]
    sparsest: list[int]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "num_vertices": len(self.vertices),
            "num_edges": len(self.adjacency),
            "num_contracted": len(self.contracted),
            "sparsest": [
                {
                    "vertex": k,
                    "edges": sorted([a + 1, b + 1] for a, b in self.vertices[k].imap.edges),
                    "num_perms": len(self.vertices[k].perms),
                }
                for k in self.sparsest
            ],
            "vertex_edge_counts": [v.edge_count for v in self.vertices],
        }


class _UnionFind:
    def __init__(self, k):
        self.parent = list(range(k))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def build_associahedron(h: Dag, guard: int = BUILD_GUARD) -> Associahedron:
    """Contract the permutohedron of ``h``'s nodes and attach a minimal I-map to every vertex.

    Raises AssociahedronError if two permutations of one contracted vertex
    produce different I-maps.
    """
    n = h.n
    if n > guard:
        raise ValueError(f"build_associahedron is limited to n <= {guard}, got {n}")
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    ci = _cached_ci(h)
    uf = _UnionFind(len(perms))
    contracted = set()
    plain_edges = []
    for k, p in enumerate(perms):
        for q in range(n - 1):
            if p[q] > p[q + 1]:
                continue  # each edge once, from its endpoint with the ascending pair
            swapped = p[:q] + (p[q + 1], p[q]) + p[q + 2:]
            if ci(p[q], p[q + 1], frozenset(p[:q])):
                contracted.add((p, q))
                uf.union(k, index[swapped])
            else:
                plain_edges.append((k, index[swapped]))
    roots: dict[int, int] = {}
    vertices: list[Vertex] = []
    for k, p in enumerate(perms):
        r = uf.find(k)
        imap = _imap_edges(ci, n, p)
        if r not in roots:
            roots[r] = len(vertices)
            vertices.append(Vertex([p], Dag(n, imap)))
        else:
            v = vertices[roots[r]]
            if v.imap.edges != imap:
                raise AssociahedronError(f"permutations {v.perms[0]} and {p} share a vertex but give different I-maps")
            v.perms.append(p)
    adjacency = set()
    for x, y in plain_edges:
        vx, vy = roots[uf.find(x)], roots[uf.find(y)]
        if vx != vy:
            adjacency.add((min(vx, vy), max(vx, vy)))
    fewest = min(v.edge_count for v in vertices)
    sparsest = [k for k, v in enumerate(vertices) if v.edge_count == fewest]
    return Associahedron(n, vertices, adjacency, contracted, sparsest)


def sparsest_vertices_equal_mec(h: Dag, guard: int = MEC_GUARD) -> bool:
    if h.n > guard:
        raise ValueError(f"limited to n <= {guard}, got {h.n}")
    A = build_associahedron(h)
    sparse = {A.vertices[k].imap for k in A.sparsest}
    return sparse == set(mec_members(essential_graph(h)))


def associahedron_dot(A: Associahedron) -> str:
    lines = ["graph associahedron {"]
    for k, v in enumerate(A.vertices):
        style = ", style=filled, fillcolor=palegreen" if k in A.sparsest else ""
        label = "".join(str(x + 1) for x in v.perms[0])
        lines.append(f'  v{k} [label="{label}\\n{v.edge_count}"{style}];')
    for a, b in sorted(A.adjacency):
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# edgewalks


def covered_edges(g: Dag) -> list[tuple[int, int]]:
    """Edges ``i -> j`` with ``pa(j) == pa(i) | {i}``."""
    return sorted((i, j) for i, j in g.edges if g.parents(j) == g.parents(i) | {i})


@dataclass
class EdgewalkResult:
    dag: Dag
    queries: int
    steps: int
    visited: int


def edgewalk_sparsify(g: Dag, oracle: Oracle, max_visits: int = 10_000) -> EdgewalkResult:
    """Greedy walk over I-maps by covered-edge flips.

    From the minimal I-map of ``g``'s topological order, repeatedly flip a
    covered edge, take the minimal I-map of the flipped graph's order, and
    move as soon as a strictly sparser DAG turns up.  Equal-size I-maps are
    explored breadth-first until ``max_visits``.  Every CI answer comes from
    ``oracle``, so its counters measure the walk.  A demonstration, not a tuned
    learner.
    """
    t0 = oracle.total_queries
    current = minimal_imap(oracle, topological_order(g))
    steps = 0
    visited = 1
    while True:
        frontier = [current]
        seen = {current}
        better = None
        while frontier and better is None and visited < max_visits:
            nxt = []
            for d in frontier:
                for i, j in covered_edges(d):
                    cand = minimal_imap(oracle, topological_order(d.reverse_edge(i, j)))
                    visited += 1
                    if len(cand.edges) < len(current.edges):
                        better = cand
                        break
                    if len(cand.edges) == len(current.edges) and cand not in seen:
                        seen.add(cand)
                        nxt.append(cand)
                if better is not None:
                    break
            frontier = nxt
        if better is None:
            return EdgewalkResult(current, oracle.total_queries - t0, steps, visited)
        current = better
        steps += 1


def compare_edgewalk_with_class_ii(g: Dag, hidden: Dag) -> dict:
    """Query counts of the edgewalk sparsifier versus the class-II plan of ``g``'s class."""
    walk = edgewalk_sparsify(g, Oracle(hidden))
    return {
        "edgewalk_queries": walk.queries,
        "edgewalk_steps": walk.steps,
        "edgewalk_result_edges": len(walk.dag.edges),
        "class2_plan_size": len(class_ii_plan(essential_graph(g))),
    }

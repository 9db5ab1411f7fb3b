"""Directed, undirected and partially directed graphs over dense node ids.

Nodes are the integers ``0 .. n-1``.  All graph types are immutable; every
operation that "changes" a graph returns a new one.
"""

from __future__ import annotations

import heapq
from collections import deque
from functools import cached_property
from typing import Iterable, NamedTuple


class GraphError(ValueError):
    pass


class CycleError(GraphError):
    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class CyclicCompletion(CycleError):
    pass


def _check_node(n: int, v: int):
    if not 0 <= v < n:
        raise GraphError(f"node id {v} out of range for a graph on {n} nodes")


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _kahn(n: int, children) -> list[int] | None:
    """Smallest-id-first topological sort; None if a cycle exists."""
    indeg = [0] * n
    for v in range(n):
        for c in children[v]:
            indeg[c] += 1
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    return order if len(order) == n else None


def _find_cycle(n: int, children) -> list[int]:
    color = [0] * n
    stack_path: list[int] = []

    def visit(v):
        color[v] = 1
        stack_path.append(v)
        for c in children[v]:
            if color[c] == 1:
                return stack_path[stack_path.index(c):] + [c]
            if color[c] == 0:
                found = visit(c)
                if found:
                    return found
        stack_path.pop()
        color[v] = 2
        return None

    for v in range(n):
        if color[v] == 0:
            found = visit(v)
            if found:
                return found
    return []


class UndirectedGraph:
    """Simple undirected graph; edges are stored as ``(a, b)`` with ``a < b``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        self.n = n
        es = set()
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            _check_node(n, a)
            _check_node(n, b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            e = _pair(a, b)
            if e in es:
                raise GraphError(f"duplicate edge {e}")
            es.add(e)
            nbrs[a].add(b)
            nbrs[b].add(a)
        self.edges = frozenset(es)
        self._nbrs = tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbrs[v]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._nbrs[a]

    def induced(self, nodes: Iterable[int]) -> tuple["UndirectedGraph", tuple[int, ...]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the local->global map."""
        nodes = tuple(sorted(nodes))
        local = {v: i for i, v in enumerate(nodes)}
        es = [(local[a], local[b]) for a, b in self.edges if a in local and b in local]
        return UndirectedGraph(len(nodes), es), nodes

    def __eq__(self, other):
        return isinstance(other, UndirectedGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        es = ", ".join(f"{a}-{b}" for a, b in sorted(self.edges))
        return f"UndirectedGraph(n={self.n}, [{es}])"


class Dag:
    """A directed acyclic graph.  Acyclicity is checked at construction."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        self.n = n
        es = set()
        pa: list[set[int]] = [set() for _ in range(n)]
        ch: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            _check_node(n, a)
            _check_node(n, b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if (a, b) in es:
                raise GraphError(f"duplicate edge {a}->{b}")
            if (b, a) in es:
                raise GraphError(f"edges in both directions between {a} and {b}")
            es.add((a, b))
            pa[b].add(a)
            ch[a].add(b)
        self.edges = frozenset(es)
        self._pa = tuple(frozenset(s) for s in pa)
        self._ch = tuple(frozenset(s) for s in ch)
        order = _kahn(n, self._ch)
        if order is None:
            cycle = _find_cycle(n, self._ch)
            raise CycleError("graph has a directed cycle " + "->".join(map(str, cycle)), cycle)
        self._order = tuple(order)

    def parents(self, v: int) -> frozenset[int]:
        return self._pa[v]

    def children(self, v: int) -> frozenset[int]:
        return self._ch[v]

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self.edges

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._pa[a] or b in self._ch[a]

    def descendants(self, v: int) -> frozenset[int]:
        seen: set[int] = set()
        stack = list(self._ch[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self._ch[u])
        return frozenset(seen)

    def ancestors(self, v: int) -> frozenset[int]:
        seen: set[int] = set()
        stack = list(self._pa[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self._pa[u])
        return frozenset(seen)

    @cached_property
    def skeleton_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(_pair(a, b) for a, b in self.edges)

    @cached_property
    def v_structure_set(self) -> frozenset[tuple[int, int, int]]:
        out = set()
        for k in range(self.n):
            ps = sorted(self._pa[k])
            for x, i in enumerate(ps):
                for j in ps[x + 1:]:
                    if not self.adjacent(i, j):
                        out.add((i, k, j))
        return frozenset(out)

    def remove_edge(self, a: int, b: int) -> "Dag":
        if (a, b) not in self.edges:
            raise GraphError(f"no edge {a}->{b}")
        return Dag(self.n, self.edges - {(a, b)})

    def add_edge(self, a: int, b: int) -> "Dag":
        return Dag(self.n, self.edges | {(a, b)})

    def reverse_edge(self, a: int, b: int) -> "Dag":
        if (a, b) not in self.edges:
            raise GraphError(f"no edge {a}->{b}")
        return Dag(self.n, (self.edges - {(a, b)}) | {(b, a)})

    def as_pdag(self) -> "Pdag":
        return Pdag(self.n, self.edges, ())

    def __eq__(self, other):
        return isinstance(other, Dag) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        es = ", ".join(f"{a}->{b}" for a, b in sorted(self.edges))
        return f"Dag(n={self.n}, [{es}])"


class Pdag:
    """Partially directed graph: a set of arcs plus a set of undirected edges."""

    def __init__(self, n: int, directed: Iterable[tuple[int, int]] = (), undirected: Iterable[tuple[int, int]] = ()):
        self.n = n
        d = set()
        u = set()
        pa: list[set[int]] = [set() for _ in range(n)]
        ch: list[set[int]] = [set() for _ in range(n)]
        un: list[set[int]] = [set() for _ in range(n)]
        for a, b in directed:
            _check_node(n, a)
            _check_node(n, b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if (a, b) in d or (b, a) in d:
                raise GraphError(f"duplicate edge between {a} and {b}")
            d.add((a, b))
            pa[b].add(a)
            ch[a].add(b)
        for a, b in undirected:
            _check_node(n, a)
            _check_node(n, b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            e = _pair(a, b)
            if e in u or (a, b) in d or (b, a) in d:
                raise GraphError(f"duplicate edge between {a} and {b}")
            u.add(e)
            un[a].add(b)
            un[b].add(a)
        self.directed = frozenset(d)
        self.undirected = frozenset(u)
        self._pa = tuple(frozenset(s) for s in pa)
        self._ch = tuple(frozenset(s) for s in ch)
        self._un = tuple(frozenset(s) for s in un)

    def parents(self, v: int) -> frozenset[int]:
        return self._pa[v]

    def children(self, v: int) -> frozenset[int]:
        return self._ch[v]

    def undirected_neighbors(self, v: int) -> frozenset[int]:
        return self._un[v]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._pa[a] or b in self._ch[a] or b in self._un[a]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._pa[v] | self._ch[v] | self._un[v]

    @property
    def skeleton_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(_pair(a, b) for a, b in self.directed) | self.undirected

    def undirected_graph(self) -> UndirectedGraph:
        return UndirectedGraph(self.n, self.undirected)

    def __eq__(self, other):
        return (
            isinstance(other, Pdag)
            and self.n == other.n
            and self.directed == other.directed
            and self.undirected == other.undirected
        )

    def __hash__(self):
        return hash((self.n, self.directed, self.undirected))

    def __repr__(self):
        parts = [f"{a}->{b}" for a, b in sorted(self.directed)]
        parts += [f"{a}-{b}" for a, b in sorted(self.undirected)]
        return f"Pdag(n={self.n}, [{', '.join(parts)}])"


class Relatives(NamedTuple):
    parents: frozenset[int]
    children: frozenset[int]
    descendants: frozenset[int]
    closed_descendants: frozenset[int]


class ChainComponent(NamedTuple):
    """A chain component: ``graph`` is over local ids, ``nodes[local]`` is the global id."""

    nodes: tuple[int, ...]
    graph: UndirectedGraph


def topological_order(g: Dag) -> tuple[int, ...]:
    """Topological order, ties broken by smallest node id."""
    return g._order


def relatives(g: Dag, v: int) -> Relatives:
    _check_node(g.n, v)
    de = g.descendants(v)
    return Relatives(g.parents(v), g.children(v), de, de | {v})


def skeleton(g: Dag | Pdag) -> UndirectedGraph:
    return UndirectedGraph(g.n, g.skeleton_edges)


def v_structures(g: Dag) -> frozenset[tuple[int, int, int]]:
    """Triples ``(i, k, j)`` with ``i -> k <- j``, ``i`` and ``j`` non-adjacent, ``i < j``."""
    return g.v_structure_set


def max_in_degree(g: Dag) -> int:
    return max((len(g.parents(v)) for v in range(g.n)), default=0)


def _components(n: int, nbrs) -> list[tuple[int, ...]]:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in nbrs[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(tuple(sorted(comp)))
    return comps


def chain_components(p: Pdag) -> list[ChainComponent]:
    """Connected components of the undirected part, ordered by smallest member."""
    out = []
    for nodes in _components(p.n, p._un):
        graph, _ = p.undirected_graph().induced(nodes)
        out.append(ChainComponent(nodes, graph))
    return out


def component_index(p: Pdag) -> list[int]:
    """Map each node to the index of its chain component."""
    idx = [0] * p.n
    for k, nodes in enumerate(_components(p.n, p._un)):
        for v in nodes:
            idx[v] = k
    return idx


def is_chain_graph(p: Pdag) -> bool:
    """True iff ``p`` has no partially directed cycle.

    Chain components are contracted to single nodes; the quotient must be a DAG
    and no arc may join two nodes of the same component.
    """
    idx = component_index(p)
    k = max(idx, default=-1) + 1
    qch: list[set[int]] = [set() for _ in range(k)]
    for a, b in p.directed:
        if idx[a] == idx[b]:
            return False
        qch[idx[a]].add(idx[b])
    return _kahn(k, qch) is not None


def acyclic_completion(p: Pdag, order) -> Dag:
    """Orient every undirected edge from earlier to later in ``order``."""
    order = list(order)
    if sorted(order) != list(range(p.n)):
        raise GraphError("order must be a permutation of the nodes")
    pos = {v: i for i, v in enumerate(order)}
    edges = set(p.directed)
    for a, b in p.undirected:
        edges.add((a, b) if pos[a] < pos[b] else (b, a))
    try:
        return Dag(p.n, edges)
    except CycleError as exc:
        raise CyclicCompletion(f"completion along {order} is cyclic", exc.cycle) from None

"""Markov equivalence classes and their essential graphs (CPDAGs)."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .graphs import (
    Dag,
    GraphError,
    Pdag,
    UndirectedGraph,
    chain_components,
    is_chain_graph,
    v_structures,
)


class InvalidCpdag(GraphError):
    """Base class for CPDAG validation failures; ``witness`` names the offending structure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotChainGraph(InvalidCpdag):
    pass


class NotChordal(InvalidCpdag):
    pass


class NotMeekClosed(InvalidCpdag):
    pass


class NotAnEssentialGraph(InvalidCpdag):
    pass


class SizeGuardExceeded(ValueError):
    pass


def markov_equivalent(g: Dag, h: Dag) -> bool:
    if g.n != h.n:
        raise GraphError(f"node-count mismatch: {g.n} vs {h.n}")
    return g.skeleton_edges == h.skeleton_edges and v_structures(g) == v_structures(h)


# ---------------------------------------------------------------------------
# Meek rules


class _MutablePdag:
    def __init__(self, p: Pdag):
        self.n = p.n
        self.pa = [set(p.parents(v)) for v in range(p.n)]
        self.ch = [set(p.children(v)) for v in range(p.n)]
        self.un = [set(p.undirected_neighbors(v)) for v in range(p.n)]

    def adjacent(self, a, b):
        return b in self.pa[a] or b in self.ch[a] or b in self.un[a]

    def orient(self, a, b):
        self.un[a].discard(b)
        self.un[b].discard(a)
        self.ch[a].add(b)
        self.pa[b].add(a)

    def freeze(self) -> Pdag:
        directed = [(a, b) for a in range(self.n) for b in self.ch[a]]
        undirected = [(a, b) for a in range(self.n) for b in self.un[a] if a < b]
        return Pdag(self.n, directed, undirected)

    def forcing_rule(self, u, v, rules) -> int:
        """Number of the first rule in ``rules`` forcing the undirected ``u - v`` to ``u -> v``; 0 if none."""
        pa, ch, un = self.pa, self.ch, self.un
        for r in rules:
            if r == 1:
                # i -> u - v, i not adjacent to v
                if any(not self.adjacent(i, v) for i in pa[u]):
                    return 1
            elif r == 2:
                # u -> k -> v
                if ch[u] & pa[v]:
                    return 2
            elif r == 3:
                # u - j -> v, u - l -> v, j and l non-adjacent
                cand = sorted(un[u] & pa[v])
                for x, j in enumerate(cand):
                    for l in cand[x + 1:]:
                        if not self.adjacent(j, l):
                            return 3
            elif r == 4:
                # u - l, l -> k -> v, u adjacent to k, l not adjacent to v
                for k in pa[v]:
                    if not self.adjacent(u, k):
                        continue
                    for l in pa[k]:
                        if l in un[u] and not self.adjacent(l, v):
                            return 4
        return 0


def _closure(p: Pdag, rules=(1, 2, 3, 4), rng: random.Random | None = None) -> Pdag:
    m = _MutablePdag(p)
    queue: deque[tuple[int, int]] = deque()
    queued: set[tuple[int, int]] = set()

    def push(a, b):
        if (a, b) not in queued:
            queued.add((a, b))
            queue.append((a, b))

    initial = [(a, b) for a, b in sorted(p.undirected)]
    initial += [(b, a) for a, b in initial]
    if rng is not None:
        rng.shuffle(initial)
    for a, b in initial:
        push(a, b)
    while queue:
        if rng is not None and len(queue) > 1:
            # randomised processing order for confluence checks
            k = rng.randrange(len(queue))
            queue.rotate(-k)
        u, v = queue.popleft()
        queued.discard((u, v))
        if v not in m.un[u]:
            continue
        if not m.forcing_rule(u, v, rules):
            continue
        m.orient(u, v)
        touched = {u, v} | m.pa[u] | m.ch[u] | m.un[u] | m.pa[v] | m.ch[v] | m.un[v]
        for x in touched:
            for y in list(m.un[x]):
                push(x, y)
                push(y, x)
    return m.freeze()


def meek_closure(p: Pdag, rules=(1, 2, 3, 4)) -> Pdag:
    """Apply the orientation rules to a fixed point.

    Rules, for an undirected edge ``i - j`` (adjacency of any kind is written ``~``):

    1. ``k -> i``, ``k`` not adjacent to ``j``: orient ``i -> j``.
    2. ``i -> k -> j``: orient ``i -> j``.
    3. ``i - k -> j`` and ``i - l -> j`` with ``k``, ``l`` non-adjacent: orient ``i -> j``.
    4. ``i - l``, ``l -> k -> j``, ``i ~ k``, ``l`` not adjacent to ``j``: orient ``i -> j``.

    ``rules`` selects a subset, which is mostly useful for testing single rules.
    Partially directed cycles are allowed (rule 2 exists to break them), but a
    cycle made of arcs alone is rejected with NotChainGraph.
    """
    cyc = _chain_cycle_witness(p, through_undirected=False)
    if cyc is not None:
        raise NotChainGraph("meek_closure input has a directed cycle", cyc)
    return _closure(p, rules)


def meek_violation(p: Pdag) -> tuple[int, int, int] | None:
    """``(rule, i, j)`` for the first rule that would orient ``i -> j``, or None if closed."""
    m = _MutablePdag(p)
    for a, b in sorted(p.undirected):
        for u, v in ((a, b), (b, a)):
            r = m.forcing_rule(u, v, (1, 2, 3, 4))
            if r:
                return r, u, v
    return None


def _skeleton_pdag_with_vstructs(g: Dag) -> Pdag:
    directed = set()
    for i, k, j in v_structures(g):
        directed.add((i, k))
        directed.add((j, k))
    undirected = [(a, b) for a, b in g.skeleton_edges if (a, b) not in directed and (b, a) not in directed]
    return Pdag(g.n, directed, undirected)


# ---------------------------------------------------------------------------
# chordal machinery


def mcs_order(u: UndirectedGraph, start: Iterable[int] = (), rng: random.Random | None = None) -> list[int]:
    """Maximum cardinality search visit order.

    Ties go to the smallest id, or are broken by ``rng`` when given.  The first
    visits are forced to ``start`` (which should be a clique for the result to
    stay a genuine MCS run).  On a chordal graph the reverse of the visit order
    is a perfect elimination ordering.
    """
    n = u.n
    weight = [0] * n
    done = [False] * n
    order: list[int] = []

    def visit(v):
        done[v] = True
        order.append(v)
        for w in u.neighbors(v):
            if not done[w]:
                weight[w] += 1

    for v in start:
        visit(v)
    while len(order) < n:
        best = max(weight[v] for v in range(n) if not done[v])
        cands = [v for v in range(n) if not done[v] and weight[v] == best]
        visit(rng.choice(cands) if rng is not None else cands[0])
    return order


def _is_peo(u: UndirectedGraph, peo: list[int]) -> bool:
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [w for w in u.neighbors(v) if pos[w] > pos[v]]
        if not later:
            continue
        first = min(later, key=pos.__getitem__)
        nf = u.neighbors(first)
        if any(w != first and w not in nf for w in later):
            return False
    return True


def is_chordal(u: UndirectedGraph) -> tuple[bool, list[int] | None]:
    """``(True, peo)`` for chordal graphs, ``(False, None)`` otherwise."""
    peo = mcs_order(u)[::-1]
    if _is_peo(u, peo):
        return True, peo
    return False, None


def chordless_cycle(u: UndirectedGraph) -> list[int] | None:
    """An induced cycle of length >= 4, or None if the graph is chordal."""
    for v in range(u.n):
        nb = sorted(u.neighbors(v))
        for x, a in enumerate(nb):
            for b in nb[x + 1:]:
                if u.adjacent(a, b):
                    continue
                banned = set(nb) | {v}
                banned.discard(a)
                banned.discard(b)
                prev = {a: None}
                queue = deque([a])
                while queue and b not in prev:
                    w = queue.popleft()
                    for y in sorted(u.neighbors(w)):
                        if y not in prev and y not in banned:
                            prev[y] = w
                            queue.append(y)
                if b in prev:
                    path = [b]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return [v] + path[::-1]
    return None


def _component_cliques(graph: UndirectedGraph, nodes: tuple[int, ...]) -> list[frozenset[int]]:
    ok, peo = is_chordal(graph)
    if not ok:
        raise NotChordal("chain component is not chordal", [nodes[v] for v in chordless_cycle(graph)])
    pos = {v: i for i, v in enumerate(peo)}
    cands = []
    for v in peo:
        cands.append(frozenset([v]) | frozenset(w for w in graph.neighbors(v) if pos[w] > pos[v]))
    maximal = [c for c in cands if not any(c < d for d in cands)]
    return sorted({frozenset(nodes[v] for v in c) for c in maximal}, key=lambda c: sorted(c))


# ---------------------------------------------------------------------------
# essential graphs


@dataclass(frozen=True)
class MecStats:
    n: int
    s: int
    num_max_cliques: int
    component_sizes: tuple[int, ...]
    class2_budget: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "num_max_cliques": self.num_max_cliques,
            "component_sizes": list(self.component_sizes),
            "class2_budget": self.class2_budget,
        }


class EssentialGraph:
    """A CPDAG with its chain components and maximal undirected cliques cached.

    Build one with :func:`essential_graph` (from a DAG) or :func:`validate_cpdag`
    (from untrusted input).  The constructor itself only checks chordality.
    """

    def __init__(self, pdag: Pdag):
        self.pdag = pdag
        self.n = pdag.n
        self.chain_comps = chain_components(pdag)
        cliques: list[frozenset[int]] = []
        for comp in self.chain_comps:
            cliques.extend(_component_cliques(comp.graph, comp.nodes))
        self.max_cliques: tuple[frozenset[int], ...] = tuple(sorted(cliques, key=lambda c: sorted(c)))
        self.s = max((len(c) for c in self.max_cliques), default=0)
        self._cliques_of = [[] for _ in range(self.n)]
        for c in self.max_cliques:
            for v in c:
                self._cliques_of[v].append(c)

    def parents(self, v: int) -> frozenset[int]:
        """Directed parents of ``v``."""
        return self.pdag.parents(v)

    def children(self, v: int) -> frozenset[int]:
        return self.pdag.children(v)

    def undirected_neighbors(self, v: int) -> frozenset[int]:
        return self.pdag.undirected_neighbors(v)

    def adjacent(self, a: int, b: int) -> bool:
        return self.pdag.adjacent(a, b)

    def cliques_containing(self, v: int) -> list[frozenset[int]]:
        return self._cliques_of[v]

    def stats(self) -> MecStats:
        return MecStats(
            n=self.n,
            s=self.s,
            num_max_cliques=len(self.max_cliques),
            component_sizes=tuple(len(c.nodes) for c in self.chain_comps),
            class2_budget=self.n ** 3 * 2 ** self.s,
        )

    def __eq__(self, other):
        return isinstance(other, EssentialGraph) and self.pdag == other.pdag

    def __hash__(self):
        return hash(self.pdag)

    def __repr__(self):
        return f"EssentialGraph({self.pdag!r}, s={self.s})"


def essential_graph(g: Dag) -> EssentialGraph:
    """CPDAG of ``g``: skeleton, v-structures oriented, then Meek closure."""
    return EssentialGraph(_closure(_skeleton_pdag_with_vstructs(g)))


def maximal_undirected_cliques(e: EssentialGraph) -> list[frozenset[int]]:
    """Maximal cliques of the undirected part; nodes without undirected edges appear as singletons."""
    return list(e.max_cliques)


def undirected_cliques_within(e: EssentialGraph, nodes: Iterable[int]) -> Iterator[frozenset[int]]:
    """Every clique of the undirected graph induced on ``nodes``, the empty set included.

    Ordered by size, then lexicographically.
    """
    S = frozenset(nodes)
    found = {frozenset()}
    for K in e.max_cliques:
        part = sorted(K & S)
        for r in range(1, len(part) + 1):
            for sub in itertools.combinations(part, r):
                found.add(frozenset(sub))
    yield from sorted(found, key=lambda c: (len(c), sorted(c)))


def _orient_component_by(order_pos: dict[int, int], comp_edges, out: set):
    for a, b in comp_edges:
        out.add((a, b) if order_pos[a] < order_pos[b] else (b, a))


def _extension(e: EssentialGraph, orders: dict[int, list[int]]) -> Dag:
    """Keep arcs, orient each component along ``orders[k]`` (global ids, visit order)."""
    edges = set(e.pdag.directed)
    for k, comp in enumerate(e.chain_comps):
        pos = {v: i for i, v in enumerate(orders[k])}
        _orient_component_by(pos, [(comp.nodes[a], comp.nodes[b]) for a, b in comp.graph.edges], edges)
    return Dag(e.n, edges)


def consistent_extension(e: EssentialGraph) -> Dag:
    """A member of the class: each chain component oriented along its MCS visit order."""
    orders = {}
    for k, comp in enumerate(e.chain_comps):
        orders[k] = [comp.nodes[v] for v in mcs_order(comp.graph)]
    return _extension(e, orders)


def random_extension(e: EssentialGraph, rng: random.Random) -> Dag:
    """A member of the class picked by MCS with random tie-breaking (not uniform over the class)."""
    orders = {}
    for k, comp in enumerate(e.chain_comps):
        orders[k] = [comp.nodes[v] for v in mcs_order(comp.graph, rng=rng)]
    return _extension(e, orders)


def clique_upstream_extension(e: EssentialGraph, K: Iterable[int], internal_order: Iterable[int] | None = None) -> Dag:
    """A member of the class where clique ``K`` is most upstream in its chain component.

    ``K``'s own edges follow ``internal_order`` and every other edge of the
    component incident to ``K`` points away from it.  The rest of the
    component is oriented by an MCS run that starts with ``K``.
    """
    K = list(internal_order) if internal_order is not None else sorted(K)
    if len(set(K)) != len(K):
        raise GraphError("internal order repeats a node")
    if not K:
        return consistent_extension(e)
    for x, a in enumerate(K):
        for b in K[x + 1:]:
            if b not in e.undirected_neighbors(a):
                raise GraphError(f"{sorted(K)} is not an undirected clique ({a}, {b} not joined by an undirected edge)")
    orders = {}
    for k, comp in enumerate(e.chain_comps):
        local = {v: i for i, v in enumerate(comp.nodes)}
        if K[0] in local:
            start = [local[v] for v in K]
            orders[k] = [comp.nodes[v] for v in mcs_order(comp.graph, start=start)]
        else:
            orders[k] = [comp.nodes[v] for v in mcs_order(comp.graph)]
    return _extension(e, orders)


def _chain_cycle_witness(p: Pdag, through_undirected: bool = True) -> list[int] | None:
    # shortest path back from the head of some arc to its tail, moving along arcs (and undirected edges)
    for a, b in sorted(p.directed):
        prev = {b: None}
        queue = deque([b])
        while queue and a not in prev:
            v = queue.popleft()
            step = p.children(v) | p.undirected_neighbors(v) if through_undirected else p.children(v)
            for w in sorted(step):
                if w not in prev:
                    prev[w] = v
                    queue.append(w)
        if a in prev:
            path = [a]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return [a] + path[::-1]
    return None


def validate_cpdag(p: Pdag) -> EssentialGraph:
    """Check that ``p`` is the essential graph of some DAG and wrap it.

    Raises a subclass of InvalidCpdag whose ``witness`` is a cycle, a
    chordless cycle, a ``(rule, i, j)`` rule instance, or a mismatched edge.
    """
    if not is_chain_graph(p):
        raise NotChainGraph("graph has a partially directed cycle", _chain_cycle_witness(p))
    for comp in chain_components(p):
        cyc = chordless_cycle(comp.graph)
        if cyc is not None:
            raise NotChordal("chain component has a chordless cycle", [comp.nodes[v] for v in cyc])
    bad = meek_violation(p)
    if bad is not None:
        rule, i, j = bad
        raise NotMeekClosed(f"rule {rule} orients {i} -> {j}", bad)
    e = EssentialGraph(p)
    back = essential_graph(consistent_extension(e)).pdag
    if back != p:
        diff = sorted((back.directed ^ p.directed) | (back.undirected ^ p.undirected))
        raise NotAnEssentialGraph("graph is not the essential graph of its own extension", diff[0])
    return e


# ---------------------------------------------------------------------------
# brute-force class enumeration


def _component_orientations(nodes: tuple[int, ...], graph: UndirectedGraph) -> Iterator[list[tuple[int, int]]]:
    """Acyclic orientations of a component without v-structures, by backtracking."""
    edges = sorted(graph.edges)
    k = graph.n
    pa: list[set[int]] = [set() for _ in range(k)]
    ch: list[set[int]] = [set() for _ in range(k)]
    chosen: list[tuple[int, int]] = []

    def reaches(src, dst):
        stack, seen = [src], {src}
        while stack:
            v = stack.pop()
            if v == dst:
                return True
            for w in ch[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def ok(a, b):
        if reaches(b, a):
            return False
        return all(graph.adjacent(p, a) for p in pa[b])

    def rec(idx):
        if idx == len(edges):
            yield [(nodes[a], nodes[b]) for a, b in chosen]
            return
        x, y = edges[idx]
        for a, b in ((x, y), (y, x)):
            if ok(a, b):
                pa[b].add(a)
                ch[a].add(b)
                chosen.append((a, b))
                yield from rec(idx + 1)
                chosen.pop()
                pa[b].discard(a)
                ch[a].discard(b)

    yield from rec(0)


MEC_SIZE_GUARD = 12


def mec_size_bruteforce(e: EssentialGraph, guard: int = MEC_SIZE_GUARD) -> int:
    """Number of DAGs in the class, by enumerating each component's orientations.

    Cost is proportional to the answer, so keep classes small.
    """
    if e.n > guard:
        raise SizeGuardExceeded(f"mec_size_bruteforce is limited to n <= {guard}, got {e.n}")
    total = 1
    for comp in e.chain_comps:
        total *= sum(1 for _ in _component_orientations(comp.nodes, comp.graph))
    return total


def mec_members(e: EssentialGraph, guard: int = MEC_SIZE_GUARD) -> Iterator[Dag]:
    """Every DAG of the class."""
    if e.n > guard:
        raise SizeGuardExceeded(f"mec_members is limited to n <= {guard}, got {e.n}")
    per_comp = [list(_component_orientations(c.nodes, c.graph)) for c in e.chain_comps]
    base = set(e.pdag.directed)
    for combo in itertools.product(*per_comp):
        edges = set(base)
        for part in combo:
            edges.update(part)
        yield Dag(e.n, edges)

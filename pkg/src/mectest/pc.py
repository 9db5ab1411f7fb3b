"""PC-style adjacency search against an oracle; a learning baseline for query counts."""

from __future__ import annotations

import itertools
import math

from .dsep import CiQuery, Oracle
from .graphs import Pdag
from .mec import _closure


def pc_baseline(oracle: Oracle, n: int | None = None) -> tuple[Pdag, int]:
    """Learn the CPDAG of the oracle's hidden DAG.

    Level ``l`` tests every remaining edge ``a - b`` against conditioning sets
    of size ``l`` drawn from the neighbours of ``a`` and then of ``b``, as they
    stood at the start of the level (the order-independent "stable" variant).
    A set already tried from ``a``'s side is not asked again from ``b``'s.
    Unshielded triples whose middle node is absent from the separating set
    become v-structures, then the orientation rules run to a fixed point.

    Returns the CPDAG and the number of queries issued.
    """
    if n is None:
        n = oracle.n
    t0 = oracle.total_queries
    adj = [set(range(n)) - {v} for v in range(n)]
    sepset: dict[tuple[int, int], frozenset[int]] = {}
    level = 0
    while any(len(adj[v]) - 1 >= level for v in range(n)):
        snapshot = [frozenset(s) for s in adj]
        for a in range(n):
            for b in range(a + 1, n):
                if b not in adj[a]:
                    continue
                found = None
                tried = set()
                for x, y in ((a, b), (b, a)):
                    pool = sorted(snapshot[x] - {y})
                    if len(pool) < level:
                        continue
                    for S in itertools.combinations(pool, level):
                        # sets shared by both neighbourhoods are asked once
                        if S in tried:
                            continue
                        tried.add(S)
                        if oracle.query(CiQuery.of(x, y, S)):
                            found = frozenset(S)
                            break
                    if found is not None:
                        break
                if found is not None:
                    adj[a].discard(b)
                    adj[b].discard(a)
                    sepset[(a, b)] = found
        level += 1
    directed = set()
    for k in range(n):
        nb = sorted(adj[k])
        for x, a in enumerate(nb):
            for b in nb[x + 1:]:
                if b in adj[a]:
                    continue
                if k not in sepset[(a, b)]:
                    directed.add((a, k))
                    directed.add((b, k))
    undirected = [(a, b) for a in range(n) for b in adj[a] if a < b and (a, b) not in directed and (b, a) not in directed]
    pdag = _closure(Pdag(n, directed, undirected))
    return pdag, oracle.total_queries - t0


def pc_formula_reference(n: int, d: int) -> int:
    """``round(n**2 * (n-1)**(d-1) / (d-1)!)``; in-degrees below 1 are treated as 1."""
    d = max(d, 1)
    return round(n ** 2 * (n - 1) ** (d - 1) / math.factorial(d - 1))

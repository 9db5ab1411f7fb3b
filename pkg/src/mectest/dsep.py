"""Exact d-separation and the counting conditional-independence oracle.

Two structurally different procedures are provided.  ``d_separated`` walks
active trails (Bayes-ball style) and is the one used everywhere in
production; ``d_separated_moral`` tests plain graph separation in the
moralized ancestral graph and exists to cross-check it.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graphs import Dag


class QueryError(ValueError):
    pass


def _as_set(x) -> frozenset[int]:
    if isinstance(x, int):
        return frozenset((x,))
    return frozenset(x)


@dataclass(frozen=True)
class CiQuery:
    """Is ``a`` independent of ``b`` given ``c``?

    Stored canonically: ``a`` holds whichever side has the smaller minimum.
    """

    a: frozenset[int]
    b: frozenset[int]
    c: frozenset[int] = frozenset()

    def __post_init__(self):
        a, b, c = _as_set(self.a), _as_set(self.b), _as_set(self.c)
        if not a or not b:
            raise QueryError("both sides of a CI query must be non-empty")
        if a & b or a & c or b & c:
            raise QueryError(f"CI query sets must be disjoint: {sorted(a)}, {sorted(b)} | {sorted(c)}")
        if min(a) > min(b):
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def of(cls, a, b, c=()) -> "CiQuery":
        return cls(_as_set(a), _as_set(b), _as_set(c))

    def nodes(self) -> frozenset[int]:
        return self.a | self.b | self.c

    def to_json(self) -> dict:
        """1-based rendering used in reports and logs."""
        return {
            "A": [v + 1 for v in sorted(self.a)],
            "B": [v + 1 for v in sorted(self.b)],
            "C": [v + 1 for v in sorted(self.c)],
        }

    def __str__(self):
        def fmt(s):
            return "{" + ",".join(str(v + 1) for v in sorted(s)) + "}"

        return f"{fmt(self.a)} _|_ {fmt(self.b)} | {fmt(self.c)}"


def _check(g: Dag, q: CiQuery):
    for v in q.nodes():
        if not 0 <= v < g.n:
            raise QueryError(f"query node {v} out of range for a graph on {g.n} nodes")


def _ancestral_mask(g: Dag, seed: int) -> int:
    # bitmask of seed nodes and all their ancestors
    mask = seed
    stack = [v for v in range(g.n) if seed >> v & 1]
    pa = g._pa
    while stack:
        v = stack.pop()
        for p in pa[v]:
            if not mask >> p & 1:
                mask |= 1 << p
                stack.append(p)
    return mask


def d_separated(g: Dag, q: CiQuery) -> bool:
    """True iff every trail between ``q.a`` and ``q.b`` is blocked by ``q.c``.

    Linear-time reachability over (node, direction) states: a trail may pass a
    collider only if the collider is an ancestor of (or in) the conditioning
    set, and may pass a non-collider only if it is not conditioned on.
    """
    _check(g, q)
    pa, ch = g._pa, g._ch
    cmask = 0
    for v in q.c:
        cmask |= 1 << v
    bmask = 0
    for v in q.b:
        bmask |= 1 << v
    anc = _ancestral_mask(g, cmask)
    up = down = 0
    # (node, arrived_from_child)
    stack = [(v, True) for v in q.a]
    while stack:
        v, from_child = stack.pop()
        bit = 1 << v
        if from_child:
            if up & bit:
                continue
            up |= bit
        else:
            if down & bit:
                continue
            down |= bit
        blocked = cmask & bit
        if not blocked and bmask & bit:
            return False
        if from_child:
            if not blocked:
                for p in pa[v]:
                    stack.append((p, True))
                for c in ch[v]:
                    stack.append((c, False))
        else:
            if not blocked:
                for c in ch[v]:
                    stack.append((c, False))
            if anc & bit:
                for p in pa[v]:
                    stack.append((p, True))
    return True


def d_separated_moral(g: Dag, q: CiQuery) -> bool:
    """Same contract as :func:`d_separated`, via the moralized ancestral graph."""
    _check(g, q)
    keep = set(q.nodes())
    stack = list(keep)
    while stack:
        v = stack.pop()
        for p in g.parents(v):
            if p not in keep:
                keep.add(p)
                stack.append(p)
    adj: dict[int, set[int]] = {v: set() for v in keep}
    for v in keep:
        ps = list(g.parents(v))
        for p in ps:
            adj[v].add(p)
            adj[p].add(v)
        for x in range(len(ps)):
            for y in range(x + 1, len(ps)):
                adj[ps[x]].add(ps[y])
                adj[ps[y]].add(ps[x])
    seen = set(q.a)
    queue = deque(q.a)
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u in q.c or u in seen:
                continue
            if u in q.b:
                return False
            seen.add(u)
            queue.append(u)
    return True


class Oracle:
    """Counting independence oracle over a hidden DAG.

    ``total_queries`` counts every call, ``unique_queries`` only cache misses.
    If ``log`` is a writable text stream each query is appended to it as one
    JSON line.
    """

    def __init__(self, hidden: Dag, cache: bool = True, log=None):
        self.hidden = hidden
        self.total_queries = 0
        self.unique_queries = 0
        self._cache: dict[CiQuery, bool] | None = {} if cache else None
        self._log = log

    @property
    def n(self) -> int:
        return self.hidden.n

    def query(self, q: CiQuery) -> bool:
        """True if the hidden graph entails the independence ``q``."""
        self.total_queries += 1
        if self._cache is not None and q in self._cache:
            ans = self._cache[q]
        else:
            ans = d_separated(self.hidden, q)
            self.unique_queries += 1
            if self._cache is not None:
                self._cache[q] = ans
        if self._log is not None:
            rec = q.to_json()
            rec.update(independent=ans, total=self.total_queries, unique=self.unique_queries)
            self._log.write(json.dumps(rec) + "\n")
        return ans

    def independent(self, a, b, c: Iterable[int] = ()) -> bool:
        return self.query(CiQuery.of(a, b, c))

    def __repr__(self):
        return f"Oracle({self.hidden!r}, total={self.total_queries}, unique={self.unique_queries})"

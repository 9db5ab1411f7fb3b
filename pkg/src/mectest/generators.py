"""Deterministic instance generators."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .graphs import CycleError, Dag, GraphError

FAMILIES = ("erdos-ordered", "clique", "matching", "ladder")


@dataclass(frozen=True)
class GenConfig:
    n: int
    p: float = 0.5
    seed: int = 0
    family: str = "erdos-ordered"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"density must lie in [0, 1], got {self.p}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.n < 0:
            raise ValueError("n must be non-negative")


def random_dag(cfg: GenConfig) -> Dag:
    """Each forward edge ``i -> j`` (i < j) kept independently with probability ``cfg.p``."""
    rng = random.Random(cfg.seed)
    edges = [(i, j) for i in range(cfg.n) for j in range(i + 1, cfg.n) if rng.random() < cfg.p]
    return Dag(cfg.n, edges)


def complete_dag(n: int) -> Dag:
    return Dag(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def matching_dag(n: int) -> Dag:
    """``n/2`` disjoint edges ``2k -> 2k+1``: largest undirected clique 2, class size ``2**(n/2)``."""
    if n % 2 or n < 4:
        raise ValueError("matching family needs an even n >= 4")
    return Dag(n, [(2 * k, 2 * k + 1) for k in range(n // 2)])


def exponential_mec_family(n: int) -> Dag:
    return matching_dag(n)


def ladder_dag(n: int) -> Dag:
    """Connected family with largest undirected clique 2 and class size ``2**(n/2 - 1)``.

    Two sources ``0, 1`` point into the first rung ``(2, 3)``; each later rung
    ``(x', y')`` has both nodes of the previous rung as parents, and every rung
    carries one edge ``x -> y``.  The arcs between rungs are compelled, the
    rung edges stay reversible independently.
    """
    if n % 2 or n < 4:
        raise ValueError("ladder family needs an even n >= 4")
    edges = [(0, 2), (1, 2), (0, 3), (1, 3)]
    for x in range(2, n, 2):
        edges.append((x, x + 1))
        if x + 2 < n:
            edges += [(x, x + 2), (x, x + 3), (x + 1, x + 2), (x + 1, x + 3)]
    return Dag(n, edges)


def generate(cfg: GenConfig) -> Dag:
    if cfg.family == "erdos-ordered":
        return random_dag(cfg)
    if cfg.family == "clique":
        return complete_dag(cfg.n)
    if cfg.family == "matching":
        return matching_dag(cfg.n)
    return ladder_dag(cfg.n)


def all_dags(n: int):
    """Every labelled DAG on ``n`` nodes (543 for n = 4, 29281 for n = 5)."""
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (a, b), st in zip(pairs, states):
            if st == 1:
                edges.append((a, b))
            elif st == 2:
                edges.append((b, a))
        try:
            yield Dag(n, edges)
        except CycleError:
            pass


def random_order_dag(n: int, p: float, rng: random.Random) -> Dag:
    """Like :func:`random_dag` but over a random node order."""
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Dag(n, edges)


def perturb(g: Dag, rng: random.Random) -> Dag:
    """Flip one covered edge (stays in the class), then add or remove a random edge."""
    covered = sorted((i, j) for i, j in g.edges if g.parents(j) == g.parents(i) | {i})
    if covered:
        i, j = rng.choice(covered)
        g = g.reverse_edge(i, j)
    missing = [
        (a, b) for a in range(g.n) for b in range(g.n) if a != b and not g.adjacent(a, b)
    ]
    rng.shuffle(missing)
    addable = []
    for a, b in missing:
        if a not in g.descendants(b):
            addable.append((a, b))
            break
    if g.edges and (not addable or rng.random() < 0.5):
        return g.remove_edge(*rng.choice(sorted(g.edges)))
    if addable:
        return g.add_edge(*addable[0])
    raise GraphError("cannot perturb an empty graph on fewer than two nodes")

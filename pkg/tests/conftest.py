import random

import pytest
from hypothesis import strategies as st

from mectest.graphs import Dag
from mectest.io import dag_from_text, pdag_from_text


def D(text, n=None):
    """1-based DAG literal: ``D("1->3, 2->3")``."""
    body = text.replace(",", "\n")
    if n is not None:
        body = f"nodes {n}\n" + body
    return dag_from_text(body)


def P(text, n=None):
    body = text.replace(",", "\n")
    if n is not None:
        body = f"nodes {n}\n" + body
    return pdag_from_text(body)


def S(*vs):
    """1-based ids -> 0-based frozenset."""
    return frozenset(v - 1 for v in vs)


def rand_dag(rng: random.Random, n: int, p: float) -> Dag:
    perm = list(range(n))
    rng.shuffle(perm)
    return Dag(n, [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


@st.composite
def dags(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Dag(n, [(perm[i], perm[j]) for (i, j), k in zip(pairs, keep) if k])


@pytest.fixture
def rng():
    return random.Random(20240517)

import io
import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import D, S, dags, rand_dag
from mectest.adversary import d_separated_by_paths
from mectest.dsep import CiQuery, Oracle, QueryError, d_separated, d_separated_moral
from mectest.generators import all_dags


def q(a, b, c=()):
    """1-based singleton query."""
    return CiQuery.of(a - 1, b - 1, [v - 1 for v in c])


@pytest.mark.parametrize("dsep", [d_separated, d_separated_moral])
def test_examples(dsep):
    assert dsep(D("1->3, 2->3"), q(1, 2))
    assert not dsep(D("1->3, 2->3"), q(1, 2, [3]))
    assert dsep(D("1->2, 2->3"), q(1, 3, [2]))
    assert not dsep(D("1->2"), q(1, 2))


def test_collider_descendant_opens_path():
    g = D("1->3, 2->3, 3->4")
    assert not d_separated(g, q(1, 2, [4]))
    assert not d_separated_moral(g, q(1, 2, [4]))


def test_query_validation_and_canonical_form():
    with pytest.raises(QueryError):
        CiQuery.of([0, 1], [1, 2])
    with pytest.raises(QueryError):
        CiQuery.of(0, 1, [0])
    with pytest.raises(QueryError):
        CiQuery.of([], 1)
    a = CiQuery.of(3, 1, [2])
    assert a.a == {1} and a.b == {3}
    assert a == CiQuery.of(1, 3, [2])
    with pytest.raises(QueryError):
        d_separated(D("1->2"), CiQuery.of(0, 5))


def _singleton_queries(n):
    for a, b in itertools.combinations(range(n), 2):
        rest = [v for v in range(n) if v not in (a, b)]
        for r in range(len(rest) + 1):
            for c in itertools.combinations(rest, r):
                yield CiQuery.of(a, b, c)


def test_cross_check_all_four_node_dags():
    checked = 0
    for g in all_dags(4):
        for qq in _singleton_queries(4):
            assert d_separated(g, qq) == d_separated_moral(g, qq), (g, qq)
            checked += 1
    assert checked == 543 * 24


def test_cross_check_five_nodes_against_path_definition():
    rng = random.Random(3)
    dags5 = list(all_dags(5))
    for g in rng.sample(dags5, 400):
        for qq in _singleton_queries(5):
            (a,), (b,) = qq.a, qq.b
            ref = d_separated_by_paths(g, a, b, qq.c)
            assert d_separated(g, qq) == ref
            assert d_separated_moral(g, qq) == ref


@pytest.mark.slow
def test_cross_check_five_nodes_exhaustive():
    for g in all_dags(5):
        for qq in _singleton_queries(5):
            assert d_separated(g, qq) == d_separated_moral(g, qq)


def _random_set_query(rng, n):
    labels = [rng.randrange(4) for _ in range(n)]
    labels[rng.randrange(n)] = 1
    a = [v for v in range(n) if labels[v] == 0] or [v for v in range(n) if labels[v] != 1][:1]
    if not a:
        labels[0], a = 0, [0]
    b = [v for v in range(n) if labels[v] == 1 and v not in a]
    if not b:
        b = [v for v in range(n) if v not in a][:1]
    c = [v for v in range(n) if labels[v] == 2 and v not in a and v not in b]
    return CiQuery.of(a, b, c)


def test_cross_check_set_valued_against_networkx():
    rng = random.Random(11)
    for _ in range(500):
        n = rng.randint(2, 8)
        g = rand_dag(rng, n, rng.random())
        qq = _random_set_query(rng, n)
        G = nx.DiGraph()
        G.add_nodes_from(range(n))
        G.add_edges_from(g.edges)
        ref = nx.is_d_separator(G, set(qq.a), set(qq.b), set(qq.c))
        assert d_separated(g, qq) == ref
        assert d_separated_moral(g, qq) == ref


@given(dags(min_n=2), st.randoms(use_true_random=False))
def test_symmetry_and_adjacency(g, r):
    qq = _random_set_query(r, g.n)
    swapped = CiQuery(qq.b, qq.a, qq.c)
    assert d_separated(g, qq) == d_separated(g, swapped)
    for a, b in g.edges:
        rest = [v for v in range(g.n) if v not in (a, b)]
        c = [v for v in rest if r.random() < 0.5]
        assert not d_separated(g, CiQuery.of(a, b, c))


def test_oracle_counts_and_cache():
    o = Oracle(D("1->3, 2->3"))
    assert (o.total_queries, o.unique_queries) == (0, 0)
    assert o.query(q(1, 2)) and o.query(q(2, 1))
    assert (o.total_queries, o.unique_queries) == (2, 1)
    assert Oracle(D("", n=2)).query(q(1, 2))
    o = Oracle(D("1->2"), cache=False)
    o.query(q(1, 2))
    o.query(q(1, 2))
    assert (o.total_queries, o.unique_queries) == (2, 2)


def test_oracle_is_deterministic_and_logs():
    rng = random.Random(5)
    g = rand_dag(rng, 6, 0.5)
    seq = [_random_set_query(rng, 6) for _ in range(50)]
    buf = io.StringIO()
    a = [Oracle(g, log=buf).query(x) for x in seq]
    b = [Oracle(g).query(x) for x in seq]
    assert a == b
    recs = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert len(recs) == 50
    assert all(set(r) == {"A", "B", "C", "independent", "total", "unique"} for r in recs)
    assert min(v for r in recs for v in r["A"] + r["B"]) >= 1

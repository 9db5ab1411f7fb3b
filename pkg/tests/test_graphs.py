import random

import pytest
from hypothesis import given

from conftest import D, P, S, dags, rand_dag
from mectest.graphs import (
    CycleError,
    CyclicCompletion,
    Dag,
    GraphError,
    Pdag,
    acyclic_completion,
    chain_components,
    is_chain_graph,
    max_in_degree,
    relatives,
    skeleton,
    topological_order,
    v_structures,
)


def test_topological_order_examples():
    assert topological_order(D("1->3, 2->3")) == (0, 1, 2)
    assert topological_order(D("", n=4)) == (0, 1, 2, 3)
    assert topological_order(D("1->2, 2->3, 3->4")) == (0, 1, 2, 3)
    assert topological_order(D("3->1, 2->1", n=3)) == (1, 2, 0)


def test_construction_rejects_bad_input():
    with pytest.raises(CycleError) as exc:
        Dag(3, [(0, 1), (1, 2), (2, 0)])
    assert set(exc.value.cycle) == {0, 1, 2}
    with pytest.raises(GraphError):
        Dag(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Dag(2, [(0, 0)])
    with pytest.raises(GraphError):
        Dag(2, [(0, 2)])
    with pytest.raises(GraphError):
        Pdag(3, [(0, 1)], [(1, 0)])


def test_relatives():
    r = relatives(D("1->3, 2->3"), 2)
    assert r.parents == S(1, 2) and r.children == frozenset() and r.closed_descendants == S(3)
    r = relatives(D("1->2, 2->3"), 0)
    assert r.descendants == S(2, 3) and r.closed_descendants == S(1, 2, 3)
    r = relatives(D("", n=3), 1)
    assert r == (frozenset(), frozenset(), frozenset(), S(2))
    with pytest.raises(GraphError):
        relatives(D("", n=3), 3)


def test_skeleton_and_v_structures():
    g = D("1->3, 2->3")
    assert skeleton(g).edges == {(0, 2), (1, 2)}
    assert v_structures(g) == {(0, 2, 1)}
    tri = D("1->2, 1->3, 2->3")
    assert skeleton(tri).edges == {(0, 1), (0, 2), (1, 2)}
    assert v_structures(tri) == frozenset()
    assert v_structures(D("1->2, 2->3")) == frozenset()


def test_max_in_degree():
    assert max_in_degree(D("1->3, 2->3")) == 2
    assert max_in_degree(D("", n=3)) == 0


def test_chain_components():
    comps = chain_components(P("1-2, 2->3"))
    assert [c.nodes for c in comps] == [(0, 1), (2,)]
    assert comps[0].graph.edges == {(0, 1)}
    assert [c.nodes for c in chain_components(D("1->2, 2->3").as_pdag())] == [(0,), (1,), (2,)]
    comps = chain_components(P("1-2, 2-3, 3-4, 4-1"))
    assert len(comps) == 1 and comps[0].nodes == (0, 1, 2, 3)


def test_is_chain_graph():
    assert not is_chain_graph(P("1->2, 2-3, 3->1"))
    assert is_chain_graph(D("1->2, 2->3, 1->3").as_pdag())
    assert is_chain_graph(P("1-2, 2-3, 1-3"))
    # arc inside a component
    assert not is_chain_graph(P("1-2, 2-3, 1->3"))


def test_acyclic_completion():
    g = acyclic_completion(P("1-2, 1-3, 2-3"), [0, 1, 2])
    assert g.edges == {(0, 1), (0, 2), (1, 2)}
    g = acyclic_completion(P("1->2, 2-3"), [2, 1, 0])
    assert g.edges == {(0, 1), (2, 1)}
    with pytest.raises(CyclicCompletion):
        acyclic_completion(P("1->2, 2-3, 3-1"), [1, 2, 0])


def _naive_skeleton(g):
    return {(a, b) for a in range(g.n) for b in range(a + 1, g.n) if (a, b) in g.edges or (b, a) in g.edges}


def _naive_v_structures(g):
    out = set()
    for i in range(g.n):
        for j in range(i + 1, g.n):
            for k in range(g.n):
                if (i, k) in g.edges and (j, k) in g.edges and (i, j) not in g.edges and (j, i) not in g.edges:
                    out.add((i, k, j))
    return out


def test_against_naive_reference():
    rng = random.Random(7)
    for _ in range(200):
        g = rand_dag(rng, rng.randint(1, 8), rng.random())
        assert skeleton(g).edges == _naive_skeleton(g)
        assert v_structures(g) == _naive_v_structures(g)


@given(dags())
def test_topological_order_respects_edges(g):
    pos = {v: k for k, v in enumerate(topological_order(g))}
    assert sorted(pos) == list(range(g.n))
    assert all(pos[a] < pos[b] for a, b in g.edges)


@given(dags(), dags())
def test_v_structures_commute_with_relabelling(g, _other):
    rng = random.Random(g.n * 31 + len(g.edges))
    perm = list(range(g.n))
    rng.shuffle(perm)
    h = Dag(g.n, [(perm[a], perm[b]) for a, b in g.edges])
    inv = {perm[v]: v for v in range(g.n)}
    back = {tuple(sorted((inv[i], inv[j]))) + (inv[k],) for i, k, j in v_structures(h)}
    assert back == {(i, j, k) for i, k, j in v_structures(g)}


@given(dags())
def test_chain_components_partition(g):
    rng = random.Random(len(g.edges))
    und = [e for e in sorted(g.edges) if rng.random() < 0.5]
    p = Pdag(g.n, g.edges - set(und), und)
    nodes = [v for c in chain_components(p) for v in c.nodes]
    assert sorted(nodes) == list(range(g.n))


@given(dags())
def test_completion_keeps_arcs(g):
    rng = random.Random(len(g.edges) + 1)
    und = [e for e in sorted(g.edges) if rng.random() < 0.5]
    p = Pdag(g.n, g.edges - set(und), und)
    out = acyclic_completion(p, topological_order(g))
    assert p.directed <= out.edges
    assert out.skeleton_edges == g.skeleton_edges

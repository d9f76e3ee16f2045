from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rtlab.profile import realize
from rtlab.wgraph import (
    CellularDecomposition,
    Dyadic,
    GraphInputError,
    NotCellular,
    WeightedGraph,
    all_vertex_q_weights,
    cellular_decomposition,
    clique_weight,
    count_cliques,
    find_half_half_one_triangle,
    pi_product,
    twin_classes,
    vertex_q_weight,
)

from conftest import naive_count, random_graph

H = "1/2"


def half_half_one():
    # vertex 0 is the apex: w(01)=w(02)=1/2, w(12)=1
    return WeightedGraph.from_edges(3, [(0, 1, H), (0, 2, H), (1, 2, 1)])


def bipartite22():
    return WeightedGraph.from_edges(4, [(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)])


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    codes = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            codes[i][j] = codes[j][i] = draw(st.sampled_from((0, 1, 2)))
    return WeightedGraph.from_codes(codes)


# -- Dyadic -----------------------------------------------------------------


def test_dyadic_canonical_form():
    d = Dyadic(12, 4)  # 12/16 = 3/4
    assert (d.num, d.exp) == (3, 2)
    assert Dyadic(0, 9).exp == 0
    assert Dyadic(5, -2) == 20


def test_dyadic_arithmetic_is_exact():
    a, b = Dyadic(1, 3), Dyadic(3, 2)
    assert a + b == Fraction(7, 8)
    assert a * b == Fraction(3, 32)
    assert b - a == Fraction(5, 8)
    assert a < b and not b < a
    assert Dyadic.from_value(Fraction(81, 4)) == Dyadic(81, 2)
    with pytest.raises(ValueError):
        Dyadic.from_value(Fraction(1, 3))


# -- clique_weight ------------------------------------------------------------


def test_clique_weight_examples():
    assert clique_weight(half_half_one(), [0, 1, 2]) == Fraction(1, 4)
    G = WeightedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    assert clique_weight(G, [0, 1, 2]) == 0
    # one vertex from each of four cells of a single part
    one_part = realize((4,), (Fraction(1),), 4)
    assert clique_weight(one_part, range(4)) == Fraction(1, 64)
    assert clique_weight(G, [2]) == 1


def test_clique_weight_rejects_unknown_vertex():
    with pytest.raises(GraphInputError):
        clique_weight(half_half_one(), [0, 7])


# -- count_cliques ------------------------------------------------------------


def test_count_cliques_examples():
    assert count_cliques(bipartite22(), 2) == 4
    two_cells = WeightedGraph.from_edges(4, [(0, 2, H), (0, 3, H), (1, 2, H), (1, 3, H)])
    assert count_cliques(two_cells, 2) == 2
    G = realize((2, 2), (Fraction(1, 2), Fraction(1, 2)), 12)
    assert count_cliques(G, 4) == Fraction(81, 4)


def test_count_cliques_edge_cases():
    G = bipartite22()
    assert count_cliques(G, 1) == 4
    assert count_cliques(G, 5) == 0
    with pytest.raises(GraphInputError):
        count_cliques(G, 0)


@settings(max_examples=150, deadline=None)
@given(graphs(), st.integers(1, 6))
def test_count_cliques_matches_naive(G, q):
    assert count_cliques(G, q).as_fraction() == naive_count(G, q)


# -- vertex weights and pi ------------------------------------------------------


def test_vertex_q_weight_examples():
    G = WeightedGraph.from_edges(3, [(0, 1, 1)])
    assert vertex_q_weight(G, 2, 2) == 0
    assert vertex_q_weight(G, 2, 3) == 0
    K = bipartite22()
    assert all(vertex_q_weight(K, v, 2) == 2 for v in range(4))
    two_cells = WeightedGraph.from_edges(4, [(0, 2, H), (0, 3, H), (1, 2, H), (1, 3, H)])
    assert sum(vertex_q_weight(two_cells, v, 2) for v in range(4)) == 2 * count_cliques(two_cells, 2) == 4
    with pytest.raises(GraphInputError):
        vertex_q_weight(K, 4, 2)


@settings(max_examples=120, deadline=None)
@given(graphs(), st.integers(2, 5))
def test_handshake(G, q):
    if q > G.n:
        return
    total = sum((vertex_q_weight(G, v, q) for v in range(G.n)), Dyadic(0))
    assert total == q * count_cliques(G, q)
    assert all_vertex_q_weights(G, q) == [vertex_q_weight(G, v, q) for v in range(G.n)]


def test_pi_product_examples():
    G = half_half_one()
    assert pi_product(G, 0, []) == 1
    assert pi_product(G, 0, [1, 2]) == Fraction(1, 4)
    Z = WeightedGraph.from_edges(3, [(0, 1, 1)])
    assert pi_product(Z, 0, [1, 2]) == 0
    with pytest.raises(GraphInputError):
        pi_product(G, 0, [0, 1])


@settings(max_examples=120, deadline=None)
@given(graphs(), st.data())
def test_clique_weight_factorization(G, data):
    v = data.draw(st.integers(0, G.n - 1))
    rest = [u for u in range(G.n) if u != v]
    S = data.draw(st.lists(st.sampled_from(rest), unique=True, min_size=1)) if rest else []
    if not S:
        return
    assert clique_weight(G, S + [v]) == pi_product(G, v, S) * clique_weight(G, S)


@settings(max_examples=120, deadline=None)
@given(graphs(), st.data())
def test_raising_a_weight_never_lowers_counts(G, data):
    if G.n < 2:
        return
    i = data.draw(st.integers(0, G.n - 2))
    j = data.draw(st.integers(i + 1, G.n - 1))
    if G.codes[i][j] == 2:
        return
    codes = G.code_matrix()
    codes[i][j] = codes[j][i] = codes[i][j] + 1
    H2 = WeightedGraph.from_codes(codes)
    for q in range(1, G.n + 1):
        assert count_cliques(H2, q) >= count_cliques(G, q)


# -- structure ------------------------------------------------------------------


def test_cellular_decomposition_examples():
    dec = cellular_decomposition(realize((2, 1), (Fraction(1, 2), Fraction(1, 2)), 6))
    assert isinstance(dec, CellularDecomposition)
    assert len(dec.cells) == 3 and len(dec.parts) == 2

    path = WeightedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    dec = cellular_decomposition(path)
    assert isinstance(dec, CellularDecomposition)
    assert sorted(dec.cells) == [(0, 2), (1,)]

    bad = cellular_decomposition(half_half_one())
    assert isinstance(bad, NotCellular) and bad.kind == "triangle"
    assert bad.triple == (0, 1, 2)


def test_noncellular_witness():
    # 0 and 1 nonadjacent but see 2 differently
    G = WeightedGraph.from_edges(3, [(0, 2, 1), (1, 2, H)])
    bad = cellular_decomposition(G)
    assert isinstance(bad, NotCellular) and bad.kind == "noncellular"
    assert bad.triple == (0, 1, 2)


def test_find_triangle_examples():
    assert find_half_half_one_triangle(half_half_one()) == (0, 1, 2)
    assert find_half_half_one_triangle(realize((2, 2), (Fraction(1, 2),) * 2, 8)) is None
    assert find_half_half_one_triangle(realize((3, 2, 1), (Fraction(1, 3),) * 3, 12)) is None


def test_decomposition_round_trip(rng):
    for P in [(1,), (2,), (2, 1), (3, 2, 2), (2, 2, 1, 1)]:
        n = 2 * sum(P) + 1
        G = realize(P, [Fraction(1, len(P))] * len(P), n)
        dec = cellular_decomposition(G)
        assert dec.profile() == tuple(P)
        assert WeightedGraph.from_codes(dec.implied_codes(G.n)) == G


def test_twin_classes():
    G = realize((2, 1), (Fraction(1, 2), Fraction(1, 2)), 6)
    # parts of 3 and 3; the 2-cell part splits 2 + 1
    assert sorted(len(c) for c in twin_classes(G)) == [1, 2, 3]


# -- input validation and JSON ----------------------------------------------------


def test_from_codes_validation():
    with pytest.raises(GraphInputError):
        WeightedGraph.from_codes([[0, 1], [2, 0]])
    with pytest.raises(GraphInputError):
        WeightedGraph.from_codes([[1, 0], [0, 0]])
    with pytest.raises(GraphInputError):
        WeightedGraph.from_codes([[0, 3], [3, 0]])
    with pytest.raises(GraphInputError):
        WeightedGraph.from_edges(3, [(0, 1, "1/3")])
    with pytest.raises(GraphInputError):
        WeightedGraph.from_edges(3, [(0, 1, 1), (1, 0, 1)])


def test_json_round_trip():
    r = random.Random(3)
    for _ in range(30):
        G = random_graph(r, r.randint(1, 9))
        text = G.to_json()
        assert WeightedGraph.from_json(text) == G
        data = json.loads(text)
        assert all(w in ("1", "1/2") for _, _, w in data["edges"])


def test_json_rejects_bad_entries():
    with pytest.raises(GraphInputError):
        WeightedGraph.from_json('{"n": 3, "edges": [[1, 0, "1"]]}')
    with pytest.raises(GraphInputError):
        WeightedGraph.from_json('{"n": 3, "edges": [[0, 1, "1"], [0, 1, "1/2"]]}')
    with pytest.raises(GraphInputError):
        WeightedGraph.from_json('{"n": 3, "edges": [[0, 1, "0"]]}')
    with pytest.raises(GraphInputError):
        WeightedGraph.from_json('{"edges": []}')

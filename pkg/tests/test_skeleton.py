from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rtlab.profile import Profile, partitions, realize
from rtlab.skeleton import is_skeleton_free, max_skeleton_value, profile_skeleton_free
from rtlab.wgraph import WeightedGraph

from conftest import naive_skeleton_value, random_graph


def check_witness(G, value, sk):
    X, Y = set(sk.X), set(sk.Y)
    assert X <= Y and X
    assert len(X) + len(Y) == value == sk.value
    assert all(G.codes[a][b] == 2 for a, b in combinations(X, 2))
    assert all(G.codes[a][b] >= 1 for a, b in combinations(Y, 2))


def test_examples():
    G = WeightedGraph.empty(1)
    value, sk = max_skeleton_value(G)
    assert value == 2
    check_witness(G, value, sk)

    E = WeightedGraph.from_edges(2, [(0, 1, 1)])
    value, sk = max_skeleton_value(E)
    assert value == 4 and set(sk.X) == set(sk.Y) == {0, 1}

    R = realize((2, 2, 2), (Fraction(1, 3),) * 3, 12)
    assert max_skeleton_value(R)[0] == 9
    assert is_skeleton_free(R, 10)
    assert not is_skeleton_free(R, 9)
    assert not is_skeleton_free(WeightedGraph.empty(5), 2)


def test_profile_formula_examples():
    assert profile_skeleton_free(Profile((2, 1, 1, 1)), 10)
    assert profile_skeleton_free(Profile((3, 3)), 9)
    assert not profile_skeleton_free(Profile((1, 1)), 4)


def test_agreement_with_profile_criterion():
    for s in range(1, 8):
        for t in range(1, s + 1):
            for parts in partitions(s, t):
                P = Profile(parts)
                n = s + t  # every cell nonempty, some with two vertices
                G = realize(P, [Fraction(k, s) for k in P], max(n, s))
                assert max_skeleton_value(G)[0] == s + t
                for p in range(2, 17):
                    assert profile_skeleton_free(P, p) == is_skeleton_free(G, p)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**31))
def test_matches_naive_search(n, seed):
    G = random_graph(random.Random(seed), n, mix=(0, 1, 1, 2, 2))
    value, sk = max_skeleton_value(G)
    assert value == naive_skeleton_value(G)
    check_witness(G, value, sk)


def test_monotone_in_p_and_under_deletion():
    r = random.Random(7)
    for _ in range(150):
        G = random_graph(r, r.randint(2, 9))
        value = max_skeleton_value(G)[0]
        free = [is_skeleton_free(G, p) for p in range(2, 20)]
        # once free, free for every larger p
        assert free == sorted(free)
        assert free.index(True) + 2 == value + 1
        v = r.randrange(G.n)
        assert max_skeleton_value(G.delete_vertex(v))[0] <= value

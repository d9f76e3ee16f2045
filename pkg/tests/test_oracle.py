from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import comb

import pytest

from rtlab.oracle import (
    _decode,
    _graph_from_index,
    _scaled_counts,
    _skeleton_values,
    brute_force_grid,
    brute_force_max,
    profile_values,
    verify_zykov_small,
)
from rtlab.profile import Profile
from rtlab.skeleton import max_skeleton_value
from rtlab.symmetrize import zykov_reduce
from rtlab.wgraph import Dyadic, GraphInputError, count_cliques

from conftest import naive_count, naive_skeleton_value


def test_examples():
    rep = brute_force_max(4, 2, 4)
    assert rep.max_value == 2 and rep.graphs_scanned == 3**6
    assert rep.profile_witness == Profile((2,))
    rep = brute_force_max(4, 2, 5)
    assert rep.max_value == 4 and rep.profile_witness == Profile((1, 1))
    assert brute_force_max(3, 3, 4).max_value == 0


def test_witnesses_are_genuine():
    rep = brute_force_max(4, 2, 5, keep=5)
    assert 1 <= len(rep.witnesses) <= min(5, rep.witness_count)
    for G in rep.witnesses:
        assert count_cliques(G, 2) == rep.max_value
        assert max_skeleton_value(G)[0] <= 4


def test_vectorized_pieces_match_python():
    n = 5
    r = random.Random(0)
    idx = sorted(r.sample(range(3 ** comb(n, 2)), 300))
    for i in idx:
        G = _graph_from_index(n, i)
        codes = _decode(n, i, i + 1)
        assert int(_skeleton_values(n, codes)[0]) == max_skeleton_value(G)[0] == naive_skeleton_value(G)
        for q in (2, 3, 4):
            scaled = int(_scaled_counts(n, codes, q)[0])
            assert Fraction(scaled, 2 ** comb(q, 2)) == naive_count(G, q)


def test_decode_order():
    # slot 0 is the most significant digit
    codes = _decode(3, 0, 27)
    assert codes[1].tolist() == [0, 0, 1]
    assert codes[9].tolist() == [1, 0, 0]
    assert {tuple(c) for c in codes} == set(product(range(3), repeat=3))


def test_errors():
    with pytest.raises(GraphInputError):
        brute_force_max(7, 2, 5)
    with pytest.raises(GraphInputError):
        brute_force_max(4, 3, 3)


def test_verify_examples():
    assert verify_zykov_small(4, 2, 4)
    assert verify_zykov_small(5, 2, 5)
    assert verify_zykov_small(5, 3, 6)


def test_monotone_in_p_and_n():
    grid4 = brute_force_grid(4, [(2, p) for p in range(3, 8)])
    vals = [grid4[(2, p)].max_value for p in range(3, 8)]
    assert vals == sorted(vals)
    grid5 = brute_force_grid(5, [(2, p) for p in range(3, 8)])
    for p in range(3, 8):
        assert grid5[(2, p)].max_value >= grid4[(2, p)].max_value


def test_reduction_stays_below_the_maximum():
    n, q, p = 4, 2, 5
    rep = brute_force_max(n, q, p)
    r = random.Random(9)
    for i in r.sample(range(3**6), 200):
        G = _graph_from_index(n, i)
        if max_skeleton_value(G)[0] > p - 1:
            continue
        H, _, _ = zykov_reduce(G, q, p)
        assert count_cliques(G, q) <= count_cliques(H, q) <= rep.max_value


def test_profile_values_are_exact():
    vals = dict(profile_values(4, 2, 5))
    assert vals[Profile((1, 1))] == 4
    assert vals[Profile((2,))] == 2
    assert all(isinstance(v, Dyadic) for v in vals.values())


def test_jobs_do_not_change_the_result():
    a = brute_force_grid(5, [(2, 5), (3, 6)], jobs=1, block=4096)
    b = brute_force_grid(5, [(2, 5), (3, 6)], jobs=2, block=4096)
    for key in a:
        assert a[key].to_json_dict(graphs=True) == b[key].to_json_dict(graphs=True)

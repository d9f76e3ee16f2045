from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from rtlab.be import (
    GeometricGraph,
    ResourceCapError,
    SphereConfig,
    build_construction,
    clique_census,
    naive_clique_counts,
    structural_report,
)
from rtlab.be import save_construction
from rtlab.wgraph import GraphInputError, WeightedGraph


def within_cell_triangles(G):
    total = 0
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if G.cell_of[u] != G.cell_of[v] or not G.adj[u] >> v & 1:
                continue
            for w in range(v + 1, G.n):
                if G.cell_of[w] == G.cell_of[u] and G.adj[u] >> w & 1 and G.adj[v] >> w & 1:
                    total += 1
    return total


def test_config_validation():
    assert SphereConfig(20, 200, 0.5).mu == pytest.approx(0.5 / 20**0.5)
    with pytest.raises(GraphInputError):
        SphereConfig(1, 10, 0.1)
    with pytest.raises(GraphInputError):
        SphereConfig(10, 11, 0.1)
    with pytest.raises(GraphInputError):
        SphereConfig(4, 10, 1.0)  # mu = 1/2


def test_be_pair_bookkeeping():
    G = build_construction(SphereConfig(20, 200, 0.5, seed=1), 2, 1)
    assert G.n == 200
    assert G.labels().count("U") == G.labels().count("V") == 100
    norms = np.linalg.norm(G.points.astype(float), axis=1)
    assert np.all(np.abs(norms - 1) < 1e-12)
    assert G.rule_violations() == 0


def test_be_pair_is_k4_free():
    G = build_construction(SphereConfig(20, 200, 0.5, seed=3), 2, 1)
    census = clique_census(G, 4)
    assert census.counts[4] == 0 and census.omega <= 3
    assert within_cell_triangles(G) == 0


def test_assembly_six_three():
    G = build_construction(SphereConfig(10, 60, 0.5, seed=2), 6, 3)
    assert G.meta["cells_per_part"] == [2, 2, 2]
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if G.part_of[u] != G.part_of[v]:
                assert G.adj[u] >> v & 1
    assert clique_census(G, 3).omega <= 9
    rep = structural_report(G)
    assert rep["same_domain_non_edges"] == 0 and rep["rule_violations"] == 0


def test_degenerate_classes():
    G = build_construction(SphereConfig(10, 12, 0.5, seed=0), 3, 3)
    census = clique_census(G, 3)
    assert census.counts[3] >= 64  # 4+4+4 plus any near-antipodal pairs
    assert census.omega <= 6


def test_census_matches_naive():
    for seed, (s, t) in enumerate([(2, 1), (3, 2), (4, 2), (5, 3)]):
        G = build_construction(SphereConfig(10, 30, 0.5, seed=seed), s, t)
        census = clique_census(G, 5)
        assert census.counts == naive_clique_counts(G, 5)
        assert census.omega <= s + t


def test_census_cap():
    G = build_construction(SphereConfig(10, 60, 0.5, seed=0), 4, 2)
    with pytest.raises(ResourceCapError):
        clique_census(G, 6, limit=10)


def test_complete_bipartite_control():
    n = 10
    half = (1 << 5) - 1
    adj = [half << 5 if v < 5 else half for v in range(n)]
    G = GeometricGraph.from_adjacency(adj, [0] * n, [0] * 5 + [1] * 5)
    rep = structural_report(G)
    assert rep["cell_pair_density"][0]["density"] == 1.0
    assert rep["independence"]["lower"] == rep["independence"]["upper"] == 5


def test_independence_bounds_bracket_exact():
    G = build_construction(SphereConfig(10, 50, 0.5, seed=4), 2, 1)
    exact = structural_report(G)["independence"]
    approx = structural_report(G, exact_limit=10)["independence"]
    assert approx["lower"] <= exact["lower"] == exact["upper"] <= approx["upper"]


def test_determinism_and_export(tmp_path):
    cfg = SphereConfig(10, 40, 0.5, seed=7)
    a, b = build_construction(cfg, 3, 2), build_construction(cfg, 3, 2)
    assert a.adj == b.adj and np.array_equal(a.points, b.points)
    gp, sp = tmp_path / "g.json", tmp_path / "s.json"
    save_construction(a, str(gp), str(sp))
    W = WeightedGraph.from_json(gp.read_text())
    assert W.n == a.n and sum(1 for _ in W.edges()) == a.edge_count()
    side = json.loads(sp.read_text())
    assert side["cell_of"] == a.cell_of and len(side["points"]) == a.n


def test_build_errors():
    cfg = SphereConfig(10, 10, 0.5)
    with pytest.raises(GraphInputError):
        build_construction(cfg, 2, 3)
    with pytest.raises(GraphInputError):
        build_construction(cfg, 4, 2, sizes=[Fraction(1)])
    with pytest.raises(GraphInputError):
        build_construction(SphereConfig(10, 4, 0.5), 6, 1)

"""Finite sphere realizations of Bollobás-Erdős type graphs.

A part with ``k`` cells is a k-class BE graph: domain centers are sampled
near-uniformly on S^d (normalized Gaussians) and each domain holds at most one
point per cell, placed within ``mu/4`` of its center.  Adjacency:

* different parts: always adjacent;
* same part, different cells: chord distance ``< sqrt(2) - mu``;
* same cell: chord distance ``> 2 - mu`` (near antipodal).

Squared distances are computed in long double; if any pair lands within 1e-9
of a threshold the whole point set is redrawn.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .cliques import ResourceCapError, bits, count_cliques_upto, max_clique
from .profile import _largest_remainder
from .wgraph import GraphInputError

__all__ = [
    "SphereConfig",
    "GeometricGraph",
    "CliqueCensus",
    "build_construction",
    "clique_census",
    "structural_report",
    "naive_clique_counts",
    "ResourceCapError",
]

GUARD = 1e-9


@dataclass(frozen=True)
class SphereConfig:
    d: int
    n: int
    eps: float
    seed: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise GraphInputError("d must be at least 2")
        if self.n < 2 or self.n % 2:
            raise GraphInputError("n must be a positive even number")
        if self.eps <= 0:
            raise GraphInputError("eps must be positive")
        if self.mu > 0.25:
            raise GraphInputError(f"mu = eps/sqrt(d) = {self.mu:.4g} exceeds 1/4")

    @property
    def mu(self) -> float:
        return self.eps / math.sqrt(self.d)


@dataclass
class GeometricGraph:
    adj: list  # bitsets
    part_of: list
    cell_of: list  # global cell ids
    points: np.ndarray | None = None
    domain_of: list | None = None
    mu: float | None = None
    d: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.adj)

    def labels(self) -> list[str]:
        if self.meta.get("s") == 2 and self.meta.get("t") == 1:
            return ["U" if c == 0 else "V" for c in self.cell_of]
        return [f"part{p}.cell{c}" for p, c in zip(self.part_of, self.cell_of)]

    def edges(self):
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    @classmethod
    def from_adjacency(cls, adj: Sequence[int], part_of: Sequence[int], cell_of: Sequence[int]) -> "GeometricGraph":
        """Control inputs without geometry (points stay ``None``)."""
        adj = list(adj)
        for u in range(len(adj)):
            if adj[u] >> u & 1:
                raise GraphInputError("loops are not allowed")
            for v in bits(adj[u]):
                if not adj[v] >> u & 1:
                    raise GraphInputError("adjacency must be symmetric")
        return cls(adj, list(part_of), list(cell_of))

    def to_graph_json(self) -> dict:
        return {"n": self.n, "edges": [[u, v, "1"] for u, v in self.edges()]}

    def sidecar_json(self) -> dict:
        return {
            "points": self.points.tolist() if self.points is not None else None,
            "part_of": self.part_of,
            "cell_of": self.cell_of,
            "labels": self.labels(),
            "domain_of": self.domain_of,
            "mu": self.mu,
            "d": self.d,
            "meta": self.meta,
        }

    def rule_violations(self) -> int:
        """Pairs whose stored adjacency disagrees with the three distance rules."""
        if self.points is None:
            return 0
        D2 = _sq_dists(self.points)
        expected = _adjacency(D2, self.part_of, self.cell_of, self.mu)
        return sum((a ^ b).bit_count() for a, b in zip(expected, self.adj)) // 2


def _sq_dists(points: np.ndarray) -> np.ndarray:
    P = points.astype(np.longdouble)
    norms = np.einsum("ij,ij->i", P, P)
    G = P @ P.T
    return norms[:, None] + norms[None, :] - 2 * G


def _thresholds(mu: float):
    return (math.sqrt(2) - mu) ** 2, (2 - mu) ** 2


def _adjacency(D2, part_of, cell_of, mu) -> list[int]:
    n = len(part_of)
    t_cross, t_anti = _thresholds(mu)
    part = np.asarray(part_of)
    cell = np.asarray(cell_of)
    same_part = part[:, None] == part[None, :]
    same_cell = cell[:, None] == cell[None, :]
    A = np.where(~same_part, True, np.where(same_cell, D2 > t_anti, D2 < t_cross))
    np.fill_diagonal(A, False)
    adj = []
    for u in range(n):
        row = 0
        for v in np.flatnonzero(A[u]):
            row |= 1 << int(v)
        adj.append(row)
    return adj


def _near_threshold(D2, part_of, cell_of, mu) -> bool:
    t_cross, t_anti = _thresholds(mu)
    part = np.asarray(part_of)
    cell = np.asarray(cell_of)
    same_part = part[:, None] == part[None, :]
    same_cell = cell[:, None] == cell[None, :]
    np.fill_diagonal(same_cell, False)
    near_cross = same_part & ~same_cell & (np.abs(D2 - t_cross) < GUARD)
    np.fill_diagonal(near_cross, False)
    near_anti = same_cell & (np.abs(D2 - t_anti) < GUARD)
    return bool(near_cross.any() or near_anti.any())


def _point_near(rng, center: np.ndarray, radius: float) -> np.ndarray:
    """Unit vector at chord distance below ``radius`` from the unit vector ``center``."""
    w = rng.standard_normal(center.shape)
    w -= (w @ center) * center
    w /= np.linalg.norm(w)
    chord = radius * rng.random()
    theta = 2 * math.asin(chord / 2)
    x = math.cos(theta) * center + math.sin(theta) * w
    return x / np.linalg.norm(x)


def _cell_sizes(m: int, k: int) -> list[int]:
    base, extra = divmod(m, k)
    return [base + (j < extra) for j in range(k)]


def build_construction(cfg: SphereConfig, s: int, t: int, sizes: Sequence | None = None,
                       max_attempts: int = 100) -> GeometricGraph:
    """Geometric member of the family with ``s`` cells in ``t`` parts on ``cfg.n`` vertices.

    Part i gets ``ceil(s/t)`` cells for the first ``s mod t`` parts and
    ``floor(s/t)`` otherwise; ``sizes`` are the part shares (default equal).
    """
    if t < 1 or s < t:
        raise GraphInputError(f"need s >= t >= 1, got s={s}, t={t}")
    if sizes is None:
        sizes = [Fraction(1, t)] * t
    if len(sizes) != t:
        raise GraphInputError(f"{len(sizes)} part shares for {t} parts")
    base, r = divmod(s, t)
    cells_per_part = [base + 1] * r + [base] * (t - r)
    part_sizes = _largest_remainder(cfg.n, sizes)
    for k, m in zip(cells_per_part, part_sizes):
        if m < k:
            raise GraphInputError(f"a part of {m} vertices cannot hold {k} cells")
    rng = np.random.default_rng(cfg.seed)
    dim = cfg.d + 1
    radius = cfg.mu / 4
    part_of, cell_of, domain_of = [], [], []
    cell_id = 0
    layout = []  # (part, cells) with per-cell sizes
    for pi, (k, m) in enumerate(zip(cells_per_part, part_sizes)):
        csz = _cell_sizes(m, k)
        layout.append((pi, cell_id, csz))
        for j, c in enumerate(csz):
            for dom in range(c):
                part_of.append(pi)
                cell_of.append(cell_id + j)
                domain_of.append(dom)
        cell_id += k
    for _ in range(max_attempts):
        pts = []
        for pi, first_cell, csz in layout:
            centers = rng.standard_normal((max(csz), dim))
            centers /= np.linalg.norm(centers, axis=1, keepdims=True)
            for j, c in enumerate(csz):
                for dom in range(c):
                    pts.append(_point_near(rng, centers[dom], radius))
        points = np.array(pts)
        D2 = _sq_dists(points)
        if not _near_threshold(D2, part_of, cell_of, cfg.mu):
            adj = _adjacency(D2, part_of, cell_of, cfg.mu)
            meta = {"s": s, "t": t, "n": cfg.n, "eps": cfg.eps, "seed": cfg.seed,
                    "cells_per_part": cells_per_part, "part_sizes": part_sizes}
            return GeometricGraph(adj, part_of, cell_of, points, domain_of, cfg.mu, cfg.d, meta)
    raise RuntimeError("could not sample points away from the distance thresholds")


# -- censuses -----------------------------------------------------------------


@dataclass
class CliqueCensus:
    counts: dict  # size -> exact count, sizes 2..q_max
    omega: int

    def to_json_dict(self) -> dict:
        return {"counts": {str(k): v for k, v in self.counts.items()}, "omega": self.omega}


def clique_census(G: GeometricGraph, q_max: int, limit: int | None = None) -> CliqueCensus:
    """Exact K_2..K_qmax counts and the clique number.

    ``limit`` caps search nodes; exceeding it raises :class:`ResourceCapError`
    whose ``partial`` counts are not valid totals.
    """
    if q_max < 2:
        raise GraphInputError("q_max must be at least 2")
    counts = count_cliques_upto(G.adj, q_max, limit=limit)
    omega, _ = max_clique(G.adj)
    return CliqueCensus({k: counts[k - 1] for k in range(2, q_max + 1)}, omega)


def naive_clique_counts(G: GeometricGraph, q_max: int) -> dict:
    """Subset enumeration, for cross-checking on small graphs."""
    from itertools import combinations

    out = {}
    for k in range(2, q_max + 1):
        c = 0
        for K in combinations(range(G.n), k):
            if all(G.adj[a] >> b & 1 for a, b in combinations(K, 2)):
                c += 1
        out[k] = c
    return out


def _complement(adj: list[int]) -> list[int]:
    full = (1 << len(adj)) - 1
    return [(full ^ a) & ~(1 << u) for u, a in enumerate(adj)]


def _greedy_independent(adj: list[int]) -> int:
    """Min-degree greedy independent set size."""
    alive = (1 << len(adj)) - 1
    size = 0
    while alive:
        v = min(bits(alive), key=lambda u: ((adj[u] & alive).bit_count(), u))
        size += 1
        alive &= ~adj[v] & ~(1 << v)
    return size


def _fractional_cover_bound(adj: list[int]) -> float:
    """LP value of a fractional clique cover using greedy maximal cliques; bounds alpha from above."""
    n = len(adj)
    cliques = set()
    for v in range(n):
        K = 1 << v
        cand = adj[v]
        while cand:
            u = max(bits(cand), key=lambda w: ((adj[w] & cand).bit_count(), -w))
            K |= 1 << u
            cand &= adj[u]
        cliques.add(K)
    cols = sorted(cliques)
    A = np.zeros((n, len(cols)))
    for j, K in enumerate(cols):
        for v in bits(K):
            A[v, j] = 1.0
    res = linprog(np.ones(len(cols)), A_ub=-A, b_ub=-np.ones(n), bounds=(0, None), method="highs")
    return float(res.fun) if res.success else float(n)


def independence_bounds(adj: list[int], exact_limit: int = 60) -> dict:
    n = len(adj)
    if n <= exact_limit:
        a, _ = max_clique(_complement(adj))
        return {"lower": a, "upper": a, "method": "exact (max clique of the complement)"}
    lo = _greedy_independent(adj)
    hi = _fractional_cover_bound(adj)
    return {"lower": lo, "upper": math.floor(hi + 1e-9),
            "method": "greedy lower bound; fractional clique cover upper bound"}


def structural_report(G: GeometricGraph, exact_limit: int = 60) -> dict:
    """Edge densities between cells of a part, within-cell edges, degree spread into the
    other cells of the same part, and labelled independence-number bounds."""
    n = G.n
    cells: dict[int, int] = {}
    for v, c in enumerate(G.cell_of):
        cells[c] = cells.get(c, 0) | 1 << v
    part_of_cell = {c: G.part_of[v] for v, c in enumerate(G.cell_of)}
    pair_density = []
    within = {}
    for c, mask in sorted(cells.items()):
        within[c] = sum((G.adj[v] & mask).bit_count() for v in bits(mask)) // 2
    for c1 in sorted(cells):
        for c2 in sorted(cells):
            if c2 <= c1 or part_of_cell[c1] != part_of_cell[c2]:
                continue
            m1, m2 = cells[c1], cells[c2]
            e = sum((G.adj[v] & m2).bit_count() for v in bits(m1))
            pair_density.append({"cells": [c1, c2], "edges": e,
                                 "density": e / (m1.bit_count() * m2.bit_count())})
    opp = []
    for v in range(n):
        c = G.cell_of[v]
        others = 0
        for c2, mask in cells.items():
            if c2 != c and part_of_cell[c2] == part_of_cell[c]:
                others |= mask
        if others:
            opp.append((G.adj[v] & others).bit_count() / others.bit_count())
    cross_parts = []
    parts = sorted(set(G.part_of))
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            ma = sum(1 << v for v in range(n) if G.part_of[v] == a)
            mb = sum(1 << v for v in range(n) if G.part_of[v] == b)
            e = sum((G.adj[v] & mb).bit_count() for v in bits(ma))
            cross_parts.append({"parts": [a, b], "density": e / (ma.bit_count() * mb.bit_count())})
    rep = {
        "n": n,
        "edges": G.edge_count(),
        "cell_pair_density": pair_density,
        "within_cell_edges": {str(k): v for k, v in within.items()},
        "part_pair_density": cross_parts,
        "opposite_degree_fraction": (
            {"min": min(opp), "mean": float(np.mean(opp)), "max": max(opp)} if opp else None),
        "independence": independence_bounds(G.adj, exact_limit),
    }
    if G.points is not None:
        rep["rule_violations"] = G.rule_violations()
        if G.domain_of is not None:
            same_domain_missing = 0
            for u in range(n):
                for v in range(u + 1, n):
                    if (G.part_of[u] == G.part_of[v] and G.cell_of[u] != G.cell_of[v]
                            and G.domain_of[u] == G.domain_of[v] and not G.adj[u] >> v & 1):
                        same_domain_missing += 1
            rep["same_domain_non_edges"] = same_domain_missing
    return rep


def save_construction(G: GeometricGraph, graph_path: str, sidecar_path: str) -> None:
    with open(graph_path, "w") as f:
        json.dump(G.to_graph_json(), f)
    with open(sidecar_path, "w") as f:
        json.dump(G.sidecar_json(), f)

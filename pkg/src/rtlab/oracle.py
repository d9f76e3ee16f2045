"""Exhaustive ground truth for small n.

Every assignment of weights {0, 1/2, 1} to the C(n,2) pairs is enumerated with
numpy, in blocks of a mixed-radix counter whose most significant digit is the
first pair (0,1).  For each graph the skeleton value comes from a subset DP
and ``N_q`` is kept as the exact integer ``2^C(q,2) * N_q`` (codes 0/1/2 are
weights times two).  Nothing here uses floating point.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .profile import Profile, partitions, realize_cells
from .wgraph import Dyadic, GraphInputError, WeightedGraph, count_cliques

__all__ = ["SearchReport", "brute_force_max", "brute_force_grid", "verify_zykov_small", "profile_values"]

MAX_N = 6
BLOCK = 1 << 19


@dataclass
class SearchReport:
    n: int
    q: int
    p: int
    max_value: Dyadic
    witness_count: int
    graphs_scanned: int
    skeleton_free: int = 0
    profile_witness: Profile | None = None
    witnesses: list = field(default_factory=list)  # first maximizers in counter order

    def to_json_dict(self, graphs: bool = False) -> dict:
        d = {
            "n": self.n, "q": self.q, "p": self.p,
            "max_value": str(self.max_value),
            "max_value_decimal": float(self.max_value),
            "witness_count": self.witness_count,
            "graphs_scanned": self.graphs_scanned,
            "skeleton_free": self.skeleton_free,
            "profile_witness": list(self.profile_witness) if self.profile_witness else None,
        }
        if graphs:
            d["witnesses"] = [g.to_json_dict() for g in self.witnesses]
        return d


def _pairs(n: int):
    return list(combinations(range(n), 2))


def _decode(n: int, start: int, stop: int) -> np.ndarray:
    """Codes of graphs ``start..stop-1`` as an array of shape (B, m)."""
    m = comb(n, 2)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, m), dtype=np.int8)
    for slot in range(m - 1, -1, -1):
        out[:, slot] = idx % 3
        idx //= 3
    return out


def _skeleton_values(n: int, codes: np.ndarray) -> np.ndarray:
    pairs = _pairs(n)
    slot = {pr: k for k, pr in enumerate(pairs)}
    B = codes.shape[0]
    pos = codes > 0
    one = codes == 2
    nsub = 1 << n
    sup = [None] * nsub
    full = [None] * nsub
    best1 = [None] * nsub
    value = np.zeros(B, dtype=np.int8)
    true = np.ones(B, dtype=bool)
    for S in range(1, nsub):
        v = S.bit_length() - 1
        rest = S ^ (1 << v)
        if rest == 0:
            sup[S] = true
            full[S] = true
        else:
            s_ok, f_ok = sup[rest], full[rest]
            for u in range(v):
                if rest >> u & 1:
                    k = slot[(u, v)]
                    s_ok = s_ok & pos[:, k]
                    f_ok = f_ok & one[:, k]
            sup[S], full[S] = s_ok, f_ok
        size = S.bit_count()
        b = np.zeros(B, dtype=np.int8)
        for u in range(n):
            if S >> u & 1 and S != 1 << u:
                np.maximum(b, best1[S ^ (1 << u)], out=b)
        if size == 1:
            b[:] = 1
        b = np.where(full[S], np.int8(size), b)
        best1[S] = b
        np.maximum(value, np.where(sup[S], size + b, 0).astype(np.int8), out=value)
    return value


def _scaled_counts(n: int, codes: np.ndarray, q: int) -> np.ndarray:
    """``2^C(q,2) * N_q`` per graph, exact int64."""
    if q > n:
        return np.zeros(codes.shape[0], dtype=np.int64)
    slot = {pr: k for k, pr in enumerate(_pairs(n))}
    c = codes.astype(np.int64)
    total = np.zeros(codes.shape[0], dtype=np.int64)
    for K in combinations(range(n), q):
        prod = np.ones(codes.shape[0], dtype=np.int64)
        for a, b in combinations(K, 2):
            prod *= c[:, slot[(a, b)]]
        total += prod
    return total


def _scan_block(args):
    n, start, stop, cells, keep = args  # cells: list of (q, p)
    codes = _decode(n, start, stop)
    sk = _skeleton_values(n, codes)
    out = {}
    counts = {}
    for q, p in cells:
        if q not in counts:
            counts[q] = _scaled_counts(n, codes, q)
        ok = sk <= p - 1
        vals = np.where(ok, counts[q], -1)
        best = int(vals.max())
        hits = np.flatnonzero(vals == best)
        out[(q, p)] = (best, int(hits.size), int(ok.sum()), [start + int(i) for i in hits[:keep]])
    return out


def _graph_from_index(n: int, index: int) -> WeightedGraph:
    codes = _decode(n, index, index + 1)[0]
    mat = [[0] * n for _ in range(n)]
    for (a, b), c in zip(_pairs(n), codes):
        mat[a][b] = mat[b][a] = int(c)
    return WeightedGraph.from_codes(mat)


def brute_force_grid(n: int, cells, jobs: int = 1, keep: int = 1, max_n: int = MAX_N,
                     block: int = BLOCK) -> dict:
    """One enumeration pass serving several ``(q, p)`` cells; returns ``{(q, p): SearchReport}``."""
    if n < 1:
        raise GraphInputError("n must be positive")
    if n > max_n:
        raise GraphInputError(f"n={n} exceeds the enumeration cap {max_n}")
    cells = [(int(q), int(p)) for q, p in cells]
    for q, p in cells:
        if not 2 <= q < p:
            raise GraphInputError(f"need 2 <= q < p, got q={q}, p={p}")
    total = 3 ** comb(n, 2)
    tasks = [(n, a, min(a + block, total), cells, keep) for a in range(0, total, block)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan_block, tasks))
    else:
        parts = [_scan_block(t) for t in tasks]
    reports = {}
    for q, p in cells:
        best, count, free, wit = -1, 0, 0, []
        for part in parts:  # merge in counter order: deterministic
            b, c, f, w = part[(q, p)]
            free += f
            if b > best:
                best, count, wit = b, c, list(w)
            elif b == best:
                count += c
                wit.extend(w)
        value = Dyadic(best, comb(q, 2)) if best > 0 else Dyadic(0)
        rep = SearchReport(n, q, p, value, count, total, free,
                           witnesses=[_graph_from_index(n, i) for i in wit[:keep]])
        reports[(q, p)] = rep
    return reports


def brute_force_max(n: int, q: int, p: int, jobs: int = 1, keep: int = 1, max_n: int = MAX_N) -> SearchReport:
    """Exact maximum of ``N_q`` over all p-skeleton-free weighted graphs on ``n`` vertices."""
    rep = brute_force_grid(n, [(q, p)], jobs=jobs, keep=keep, max_n=max_n)[(q, p)]
    best = profile_values(n, q, p)
    for P, val in best:
        if val == rep.max_value:
            rep.profile_witness = P
            break
    return rep


def _part_size_vectors(n: int, P: Profile):
    """All ways to give part i at least ``P[i]`` vertices, ``n`` in total."""
    t = len(P)

    def rec(i, left):
        if i == t - 1:
            if left >= P[i]:
                yield (left,)
            return
        for k in range(P[i], left - sum(P[i + 1:]) + 1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest

    yield from rec(0, n)


def profile_values(n: int, q: int, p: int) -> list[tuple[Profile, Dyadic]]:
    """Best ``N_q`` over realizations of each profile with ``s + t <= p - 1`` and ``s <= n``,
    cells balanced inside parts, every split of ``n`` into part sizes; sorted by profile."""
    out = []
    for s in range(1, n + 1):
        for t in range(1, min(s, p - 1 - s) + 1):
            for parts in partitions(s, t):
                P = Profile(parts)
                best = None
                for sizes in set(_part_size_vectors(n, P)):
                    val = count_cliques(realize_cells(P, sizes), q)
                    if best is None or val > best:
                        best = val
                out.append((P, best))
    return sorted(out)


def verify_zykov_small(n: int, q: int, p: int, jobs: int = 1, report: SearchReport | None = None) -> bool:
    """True iff some profile-graph realization attains the exhaustive maximum exactly."""
    if report is None:
        report = brute_force_max(n, q, p, jobs=jobs)
    values = profile_values(n, q, p)
    return any(v == report.max_value for _, v in values)

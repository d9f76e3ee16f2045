"""Bitset clique routines shared by the skeleton search and the geometric census.

Graphs are lists of integer bitmasks: bit ``j`` of ``adj[i]`` is set when ``i``
and ``j`` are adjacent.
"""
from __future__ import annotations


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _color_bound(adj, cand: int):
    """Greedy colouring of ``cand``; returns vertices with their colour numbers, ascending."""
    order = []
    color = 0
    rest = cand
    while rest:
        color += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            rest &= ~low
            order.append((v, color))
    return order


def max_clique(adj, cand: int | None = None, lower: int = 0) -> tuple[int, int]:
    """Maximum clique inside ``cand`` (default: all vertices).

    Returns ``(size, mask)``.  ``lower`` is a size already known to be
    attainable; only strictly larger cliques are searched for, and ``(lower, 0)``
    is returned when none exists.
    """
    if cand is None:
        cand = (1 << len(adj)) - 1
    best = [lower, 0]

    def expand(clique: int, size: int, P: int) -> None:
        order = _color_bound(adj, P)
        for v, col in reversed(order):
            if size + col <= best[0]:
                return
            bit = 1 << v
            nxt = P & adj[v]
            if nxt:
                expand(clique | bit, size + 1, nxt)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | bit
            P &= ~bit

    if cand:
        expand(0, 0, cand)
    return best[0], best[1]


def maximal_cliques(adj, cand: int | None = None):
    """Bron-Kerbosch with pivoting; yields maximal cliques as bitmasks."""
    if cand is None:
        cand = (1 << len(adj)) - 1

    def bk(R: int, P: int, X: int):
        if not P and not X:
            yield R
            return
        PX = P | X
        pivot = max(bits(PX), key=lambda u: (P & adj[u]).bit_count())
        for v in bits(P & ~adj[pivot]):
            bit = 1 << v
            yield from bk(R | bit, P & adj[v], X & adj[v])
            P &= ~bit
            X |= bit

    if cand:
        yield from bk(0, cand, 0)


def count_cliques_upto(adj, q_max: int, limit: int | None = None) -> list[int]:
    """Exact counts ``[N_1, ..., N_qmax]`` of cliques in a simple graph.

    Cliques are expanded in increasing vertex order; the last level is counted
    by popcount.  ``limit`` bounds the number of search nodes; exceeding it
    raises :class:`ResourceCapError`.
    """
    n = len(adj)
    counts = [0] * (q_max + 1)
    if q_max >= 1:
        counts[1] = n
    higher = [adj[v] & ~((1 << (v + 1)) - 1) for v in range(n)]
    nodes = [0]

    def grow(size: int, P: int) -> None:
        # the current clique has ``size`` vertices; P = common higher neighbours
        if size + 1 > q_max:
            return
        counts[size + 1] += P.bit_count()
        if size + 2 > q_max:
            return
        for v in bits(P):
            nxt = P & higher[v]
            if nxt:
                nodes[0] += 1
                if limit is not None and nodes[0] > limit:
                    raise ResourceCapError("census_nodes", counts[1:])
                grow(size + 1, nxt)

    for v in range(n):
        if higher[v] and q_max >= 2:
            grow(1, higher[v])
    return counts[1:]


class ResourceCapError(RuntimeError):
    """A search exceeded its configured cap; ``partial`` results are not valid counts."""

    def __init__(self, cap: str, partial=None):
        super().__init__(f"resource cap exceeded: {cap}")
        self.cap = cap
        self.partial = partial

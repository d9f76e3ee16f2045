"""p-skeleton detection.

A skeleton is a pair ``X ⊆ Y`` where every pair in ``X`` has weight 1 and every
pair in ``Y`` has weight at least 1/2; its value is ``|X| + |Y|``.  The graph is
p-skeleton-free when no skeleton reaches value ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cliques import bits, max_clique
from .wgraph import WeightedGraph, twin_classes

__all__ = ["Skeleton", "max_skeleton_value", "is_skeleton_free", "profile_skeleton_free"]


@dataclass(frozen=True)
class Skeleton:
    X: frozenset
    Y: frozenset

    @property
    def value(self) -> int:
        return len(self.X) + len(self.Y)


def max_skeleton_value(G: WeightedGraph) -> tuple[int, Skeleton]:
    """Largest ``|X| + |Y|`` over all skeletons of ``G`` with an attaining witness.

    Twins are merged first (a skeleton holds at most one vertex of a class).
    Support cliques ``Y`` are grown by branch and bound with the bound
    ``2 * (|Y| + |candidates|)``; at each node the best weight-1 clique inside
    ``Y`` is found with a colouring-bounded max-clique search.
    """
    if G.n == 0:
        return 0, Skeleton(frozenset(), frozenset())
    classes = twin_classes(G)
    reps = [c[0] for c in classes]
    k = len(reps)
    sup = [0] * k
    full = [0] * k
    for a in range(k):
        row = G.codes[reps[a]]
        for b in range(k):
            c = row[reps[b]]
            if c:
                sup[a] |= 1 << b
                if c == 2:
                    full[a] |= 1 << b

    best = [0, 0, 0]  # value, Y mask, X mask

    def visit(Y: int, ysize: int, P: int) -> None:
        if 2 * (ysize + P.bit_count()) <= best[0]:
            return
        if not P:
            # Y is maximal among extensions explored here
            need = best[0] - ysize
            w, xmask = max_clique(full, Y, lower=need)
            if xmask and ysize + w > best[0]:
                best[0], best[1], best[2] = ysize + w, Y, xmask
            return
        for v in bits(P):
            bit = 1 << v
            visit(Y | bit, ysize + 1, P & sup[v])
            P &= ~bit
            if 2 * (ysize + P.bit_count()) <= best[0]:
                return

    visit(0, 0, (1 << k) - 1)
    value, ymask, xmask = best
    Y = frozenset(reps[i] for i in bits(ymask))
    X = frozenset(reps[i] for i in bits(xmask))
    return value, Skeleton(X, Y)


def is_skeleton_free(G: WeightedGraph, p: int) -> bool:
    if p < 2:
        raise ValueError("p must be at least 2")
    return max_skeleton_value(G)[0] <= p - 1


def profile_skeleton_free(profile, p: int) -> bool:
    """Closed-form criterion for profile graphs with non-empty cells: ``s + t <= p - 1``."""
    parts = tuple(profile)
    return sum(parts) + len(parts) <= p - 1

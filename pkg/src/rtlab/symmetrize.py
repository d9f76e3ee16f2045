"""Reduction of a p-skeleton-free weighted graph to a profile graph.

Three phases, each step checked to never lower ``N_q``:

1. cellularize: repeatedly take a vertex of largest q-weight among the
   unprocessed ones and copy its weight row onto each unprocessed non-neighbour;
2. remove (1/2,1/2,1)-triangles: for a triangle with apex ``y`` (two half edges)
   and base ``x z`` (weight 1), copy the weights of ``x`` onto ``y`` wherever both
   are positive (R_x) or the reverse (R_y), keep one that does not lower ``N_q``,
   then cellularize again;
3. balance the cells inside each part by moving one vertex at a time from a
   largest to a smallest cell.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .profile import Profile
from .skeleton import max_skeleton_value
from .wgraph import (
    CellularDecomposition,
    Dyadic,
    GraphInputError,
    WeightedGraph,
    all_vertex_q_weights,
    cellular_decomposition,
    count_cliques,
    count_half_half_one_triangles,
    find_half_half_one_triangle,
)

__all__ = [
    "TraceStep",
    "ReductionTrace",
    "SymmetrizationError",
    "symmetrize_vertex",
    "zykov_reduce",
    "triangle_options",
    "is_profile_graph",
    "STEP_KINDS",
]

STEP_KINDS = ("symmetrize-vertex", "triangle-R_x", "triangle-R_y", "re-cellularize", "balance-cells")


class SymmetrizationError(RuntimeError):
    """A reduction step violated its contract (never expected)."""


@dataclass(frozen=True)
class TraceStep:
    kind: str
    vertices: tuple
    before: Dyadic
    after: Dyadic
    options: tuple | None = None  # (N_q(R_x), N_q(R_y)) on triangle steps

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "vertices": list(self.vertices),
             "before": str(self.before), "after": str(self.after)}
        if self.options is not None:
            d["R_x"], d["R_y"] = str(self.options[0]), str(self.options[1])
        return d


@dataclass
class ReductionTrace:
    q: int
    p: int
    steps: list = field(default_factory=list)
    graphs: list | None = None  # intermediate graphs, only when requested

    def __len__(self):
        return len(self.steps)

    def to_json_dict(self) -> dict:
        return {"q": self.q, "p": self.p, "steps": [s.to_json_dict() for s in self.steps]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)


def _copy_row(codes: list, dst: int, src: int) -> None:
    for z in range(len(codes)):
        if z != dst and z != src:
            codes[dst][z] = codes[z][dst] = codes[src][z]


def symmetrize_vertex(G: WeightedGraph, y: int, x: int) -> WeightedGraph:
    """Give ``y`` the weight row of the non-adjacent vertex ``x``."""
    G._check(x)
    G._check(y)
    if x == y:
        raise GraphInputError("x and y must differ")
    if G.codes[x][y]:
        raise GraphInputError(f"vertices {x} and {y} are adjacent")
    codes = G.code_matrix()
    _copy_row(codes, y, x)
    return WeightedGraph.from_codes(codes)


def _copy_on_common_support(codes: list, src: int, dst: int) -> list:
    out = [row[:] for row in codes]
    for v in range(len(out)):
        if v != src and v != dst and out[src][v] and out[dst][v]:
            out[dst][v] = out[v][dst] = out[src][v]
    return out


def triangle_options(G: WeightedGraph, triangle, q: int) -> dict:
    """``N_q`` of R_x and R_y for a triangle ``(y, x, z)`` with apex ``y``."""
    y, x, _ = triangle
    codes = G.code_matrix()
    rx = WeightedGraph.from_codes(_copy_on_common_support(codes, x, y))
    ry = WeightedGraph.from_codes(_copy_on_common_support(codes, y, x))
    return {"R_x": (rx, count_cliques(rx, q)), "R_y": (ry, count_cliques(ry, q))}


class _Reducer:
    def __init__(self, G: WeightedGraph, q: int, p: int, check_skeleton: bool, keep_graphs: bool):
        self.q, self.p = q, p
        self.codes = G.code_matrix()
        self.N = count_cliques(G, q)
        self.check_skeleton = check_skeleton
        self.trace = ReductionTrace(q, p, graphs=[] if keep_graphs else None)

    def graph(self) -> WeightedGraph:
        return WeightedGraph.from_codes(self.codes)

    def commit(self, kind: str, vertices: tuple, codes: list, N_after: Dyadic | None = None,
               options: tuple | None = None) -> None:
        G = WeightedGraph.from_codes(codes)
        if N_after is None:
            N_after = count_cliques(G, self.q)
        if N_after < self.N:
            raise SymmetrizationError(f"{kind} on {vertices} lowered N_q from {self.N} to {N_after}")
        if self.check_skeleton and max_skeleton_value(G)[0] > self.p - 1:
            raise SymmetrizationError(f"{kind} on {vertices} created a {self.p}-skeleton")
        self.trace.steps.append(TraceStep(kind, vertices, self.N, N_after, options))
        if self.trace.graphs is not None:
            self.trace.graphs.append(G)
        self.codes, self.N = codes, N_after

    def cellularize(self, kind: str) -> None:
        n = len(self.codes)
        U = list(range(n))
        while U:
            wq = all_vertex_q_weights(self.graph(), self.q)
            vi = max(U, key=lambda v: (wq[v], -v))
            U.remove(vi)
            for vj in [u for u in U if self.codes[vi][u] == 0]:
                U.remove(vj)
                if all(self.codes[vj][z] == self.codes[vi][z] for z in range(n) if z not in (vi, vj)):
                    continue
                codes = [row[:] for row in self.codes]
                _copy_row(codes, vj, vi)
                self.commit(kind, (vj, vi), codes)

    def remove_triangles(self) -> None:
        n = len(self.codes)
        stalled = 0
        while True:
            G = self.graph()
            tri = find_half_half_one_triangle(G)
            if tri is None:
                return
            before = count_half_half_one_triangles(G)
            options = triangle_options(G, tri, self.q)
            viable = [(k, g, N) for k, (g, N) in options.items() if N >= self.N]
            if not viable:
                raise SymmetrizationError(
                    f"neither R_x ({options['R_x'][1]}) nor R_y ({options['R_y'][1]}) keeps N_q={self.N} "
                    f"for triangle {tri}")
            # look ahead: triangle count after re-cellularizing each viable option
            scored = []
            for k, g, N in viable:
                probe = _Reducer(g, self.q, self.p, False, False)
                probe.cellularize("re-cellularize")
                scored.append((count_half_half_one_triangles(probe.graph()) < before, probe.N, k, g, N))
            reducing = [s for s in scored if s[0]]
            if reducing:
                _, _, k, g, N = max(reducing, key=lambda s: (s[1], s[2] == "R_y"))
                stalled = 0
            else:
                choice = [s for s in scored if s[2] == "R_y"] or scored
                _, _, k, g, N = choice[0]
                stalled += 1
                if stalled > n * n:
                    raise SymmetrizationError(f"triangle count stopped decreasing after {stalled} rounds")
            y, x, _ = tri
            self.commit("triangle-" + k, (y, x) if k == "R_x" else (x, y), g.code_matrix(), N,
                        (options["R_x"][1], options["R_y"][1]))
            self.cellularize("re-cellularize")

    def balance(self) -> CellularDecomposition:
        while True:
            dec = cellular_decomposition(self.graph())
            if not isinstance(dec, CellularDecomposition):
                raise SymmetrizationError(f"graph is not a cellular triangle-free graph: {dec}")
            move = None
            for part in dec.parts:
                cells = sorted((dec.cells[ci] for ci in part), key=lambda c: (-len(c), c[0]))
                if len(cells[0]) - len(cells[-1]) > 1:
                    move = (cells[0][-1], cells[-1][0])
                    break
            if move is None:
                return dec
            y, x = move
            codes = [row[:] for row in self.codes]
            _copy_row(codes, y, x)
            codes[x][y] = codes[y][x] = 0
            self.commit("balance-cells", (y, x), codes)


def zykov_reduce(G: WeightedGraph, q: int, p: int, phases=(1, 2, 3), check_skeleton: bool = False,
                 keep_graphs: bool = False):
    """Transform ``G`` into a profile graph without lowering ``N_q``.

    Returns ``(graph, profile, trace)``.  With ``check_skeleton`` every
    intermediate graph is verified to stay p-skeleton-free; with
    ``keep_graphs`` the trace also stores every intermediate graph.  Running a
    subset of ``phases`` returns ``profile=None`` unless the result happens to
    be a profile graph.
    """
    if not 2 <= q < p:
        raise GraphInputError("need 2 <= q < p")
    if max_skeleton_value(G)[0] > p - 1:
        raise GraphInputError(f"input graph contains a {p}-skeleton")
    red = _Reducer(G, q, p, check_skeleton, keep_graphs)
    phases = set(phases)
    if 1 in phases:
        red.cellularize("symmetrize-vertex")
    if 2 in phases:
        red.remove_triangles()
    profile = None
    if 3 in phases:
        dec = red.balance()
        profile = Profile(len(part) for part in dec.parts) if dec.parts else None
    else:
        dec = cellular_decomposition(red.graph())
        if isinstance(dec, CellularDecomposition) and dec.parts and _balanced(dec):
            profile = Profile(len(part) for part in dec.parts)
    return red.graph(), profile, red.trace


def _balanced(dec: CellularDecomposition) -> bool:
    for part in dec.parts:
        sizes = [len(dec.cells[ci]) for ci in part]
        if max(sizes) - min(sizes) > 1:
            return False
    return True


def is_profile_graph(G: WeightedGraph):
    """The profile of ``G`` if it is a profile graph, else ``None``."""
    dec = cellular_decomposition(G)
    if not isinstance(dec, CellularDecomposition) or not dec.parts or not _balanced(dec):
        return None
    return Profile(len(part) for part in dec.parts)

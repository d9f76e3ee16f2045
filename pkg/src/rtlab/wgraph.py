"""Weighted graphs with edge weights in {0, 1/2, 1} and exact clique counting.

Weights are stored internally as integer codes (twice the weight), so a clique
with ``h`` half-weight edges and no zero edges has weight ``2**-h``.  Every
count is therefore a dyadic rational and is returned as a :class:`Dyadic`.

Vertices with identical weight rows (twins; necessarily non-adjacent) are
merged into classes before counting.  A clique uses at most one vertex of a
class, so counting over the class quotient with multiplicities is exact and
turns profile-graph realizations into graphs on a handful of classes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

__all__ = [
    "Dyadic",
    "WeightedGraph",
    "CellularDecomposition",
    "NotCellular",
    "GraphInputError",
    "clique_weight",
    "count_cliques",
    "vertex_q_weight",
    "pi_product",
    "cellular_decomposition",
    "find_half_half_one_triangle",
    "count_half_half_one_triangles",
]

HALF = Fraction(1, 2)
_CODE_OF = {0: 0, HALF: 1, 1: 2}
_WEIGHT_OF = (Fraction(0), HALF, Fraction(1))


class GraphInputError(ValueError):
    """Malformed graph, vertex id or parameter."""


@total_ordering
class Dyadic:
    """Exact value ``num / 2**exp`` kept in canonical form (odd or zero numerator)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num, exp = num << -exp, 0
        if num == 0:
            exp = 0
        else:
            tz = (num & -num).bit_length() - 1
            shift = min(tz, exp)
            num >>= shift
            exp -= shift
        self.num = num
        self.exp = exp

    @classmethod
    def from_value(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        f = Fraction(value)
        d = f.denominator
        if d & (d - 1):
            raise ValueError(f"{value!r} is not dyadic")
        return cls(f.numerator, d.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, (int, Fraction)):
            try:
                return Dyadic.from_value(other)
            except ValueError:
                return None
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Dyadic(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Dyadic):
            e = max(self.exp, other.exp)
            return (self.num << (e - self.exp)) < (other.num << (e - other.exp))
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() < other
        if isinstance(other, float):
            return float(self) < other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __float__(self):
        return self.num / (1 << self.exp) if self.exp < 1000 else float(self.as_fraction())

    def __bool__(self):
        return self.num != 0

    def __str__(self):
        return str(self.as_fraction())

    def __repr__(self):
        return f"Dyadic({self.as_fraction()})"


def _to_code(value) -> int:
    if isinstance(value, str):
        value = Fraction(value.strip())
    try:
        return _CODE_OF[Fraction(value)]
    except (KeyError, TypeError, ValueError):
        raise GraphInputError(f"edge weight must be 0, 1/2 or 1, got {value!r}") from None


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted graph on vertices ``0..n-1``.

    ``codes[i][j]`` is ``2 * w(i, j)``.  Build with :meth:`from_edges`,
    :meth:`from_matrix` or :meth:`from_codes` rather than directly.
    """

    n: int
    codes: tuple
    support: tuple = field(repr=False)
    full: tuple = field(repr=False)
    half: tuple = field(repr=False)

    @classmethod
    def from_codes(cls, codes: Sequence[Sequence[int]]) -> "WeightedGraph":
        n = len(codes)
        rows = tuple(tuple(int(c) for c in row) for row in codes)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GraphInputError("weight matrix must be square")
            if row[i] != 0:
                raise GraphInputError(f"w({i},{i}) must be 0")
            for j, c in enumerate(row):
                if c not in (0, 1, 2):
                    raise GraphInputError(f"invalid weight code {c} at ({i},{j})")
                if rows[j][i] != c:
                    raise GraphInputError(f"weights not symmetric at ({i},{j})")
        support, full, half = [], [], []
        for row in rows:
            s = f = h = 0
            for j, c in enumerate(row):
                if c:
                    s |= 1 << j
                    if c == 2:
                        f |= 1 << j
                    else:
                        h |= 1 << j
            support.append(s)
            full.append(f)
            half.append(h)
        return cls(n, rows, tuple(support), tuple(full), tuple(half))

    @classmethod
    def from_matrix(cls, weights) -> "WeightedGraph":
        return cls.from_codes([[_to_code(w) for w in row] for row in weights])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "WeightedGraph":
        if n < 0:
            raise GraphInputError("n must be non-negative")
        codes = [[0] * n for _ in range(n)]
        seen = set()
        for edge in edges:
            i, j, w = edge
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise GraphInputError(f"bad edge ({i},{j}) for n={n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphInputError(f"duplicate pair {key}")
            seen.add(key)
            codes[i][j] = codes[j][i] = _to_code(w)
        return cls.from_codes(codes)

    @classmethod
    def empty(cls, n: int) -> "WeightedGraph":
        return cls.from_codes([[0] * n for _ in range(n)])

    def weight(self, i: int, j: int) -> Fraction:
        self._check(i)
        self._check(j)
        return _WEIGHT_OF[self.codes[i][j]]

    def edges(self):
        """Yield ``(i, j, weight)`` for every positive-weight pair with ``i < j``."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = self.codes[i][j]
                if c:
                    yield i, j, _WEIGHT_OF[c]

    def with_codes(self, codes) -> "WeightedGraph":
        return WeightedGraph.from_codes(codes)

    def code_matrix(self) -> list:
        return [list(row) for row in self.codes]

    def induced(self, vertices: Iterable[int]) -> "WeightedGraph":
        vs = sorted(set(vertices))
        for v in vs:
            self._check(v)
        return WeightedGraph.from_codes([[self.codes[a][b] for b in vs] for a in vs])

    def delete_vertex(self, v: int) -> "WeightedGraph":
        self._check(v)
        return self.induced(u for u in range(self.n) if u != v)

    def _check(self, v) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise GraphInputError(f"unknown vertex {v!r}")

    def __eq__(self, other):
        return isinstance(other, WeightedGraph) and self.codes == other.codes

    def __hash__(self):
        return hash(self.codes)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [[i, j, str(w)] for i, j, w in self.edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "WeightedGraph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise GraphInputError('graph JSON needs "n" and "edges"')
        n = data["n"]
        if not isinstance(n, int):
            raise GraphInputError('"n" must be an integer')
        edges = []
        for e in data["edges"]:
            if not isinstance(e, (list, tuple)) or len(e) != 3:
                raise GraphInputError(f"edge entry must be [i, j, weight], got {e!r}")
            i, j, w = e
            if not (isinstance(i, int) and isinstance(j, int)) or not i < j:
                raise GraphInputError(f"edge endpoints must be integers with i < j, got {e!r}")
            if str(w) not in ("1", "1/2"):
                raise GraphInputError(f'edge weight must be "1" or "1/2", got {w!r}')
            edges.append((i, j, w))
        return cls.from_edges(n, edges)

    @classmethod
    def from_json(cls, text: str) -> "WeightedGraph":
        return cls.from_json_dict(json.loads(text))


# -- twin-class quotient ----------------------------------------------------


def twin_classes(G: WeightedGraph) -> list[list[int]]:
    """Groups of vertices with identical weight rows, ordered by first vertex."""
    groups: dict[tuple, list[int]] = {}
    for v, row in enumerate(G.codes):
        groups.setdefault(row, []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


class _Quotient:
    __slots__ = ("classes", "mult", "support", "half", "class_of")

    def __init__(self, G: WeightedGraph):
        self.classes = twin_classes(G)
        self.mult = [len(c) for c in self.classes]
        self.class_of = [0] * G.n
        for ci, members in enumerate(self.classes):
            for v in members:
                self.class_of[v] = ci
        reps = [c[0] for c in self.classes]
        k = len(reps)
        self.support = []
        self.half = []
        for a in range(k):
            row = G.codes[reps[a]]
            s = h = 0
            for b in range(k):
                c = row[reps[b]]
                if c:
                    s |= 1 << b
                    if c == 1:
                        h |= 1 << b
            self.support.append(s)
            self.half.append(h)


def _clique_hist(support, half, mult, size, cand, chosen, prod, halves, hist) -> None:
    """Accumulate ``hist[h] += multiplicity`` over ``size``-cliques drawn from ``cand``."""
    if size == 0:
        hist[halves] = hist.get(halves, 0) + prod
        return
    if size == 1:
        for v in _bits(cand):
            h = halves + (half[v] & chosen).bit_count()
            hist[h] = hist.get(h, 0) + prod * mult[v]
        return
    while cand:
        if cand.bit_count() < size:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        _clique_hist(
            support, half, mult, size - 1, cand & support[v], chosen | low,
            prod * mult[v], halves + (half[v] & chosen).bit_count(), hist,
        )


def _hist_to_dyadic(hist: dict, pairs: int) -> Dyadic:
    total = 0
    for h, m in hist.items():
        total += m << (pairs - h)
    return Dyadic(total, pairs)


def clique_half_histogram(G: WeightedGraph, q: int) -> dict[int, int]:
    """Map ``h -> number of positive-weight q-subsets with h half-weight pairs``."""
    Q = _Quotient(G)
    hist: dict[int, int] = {}
    _clique_hist(Q.support, Q.half, Q.mult, q, (1 << len(Q.mult)) - 1, 0, 1, 0, hist)
    return hist


# -- operations ---------------------------------------------------------------


def clique_weight(G: WeightedGraph, K: Iterable[int]) -> Dyadic:
    """Product of the weights of all pairs inside ``K`` (1 for a single vertex)."""
    ks = list(K)
    for v in ks:
        G._check(v)
    if len(set(ks)) != len(ks):
        raise GraphInputError("vertex set has repeated vertices")
    if not ks:
        raise GraphInputError("vertex set must be non-empty")
    halves = 0
    for a, b in combinations(ks, 2):
        c = G.codes[a][b]
        if c == 0:
            return Dyadic(0)
        halves += c == 1
    return Dyadic(1, halves)


def count_cliques(G: WeightedGraph, q: int) -> Dyadic:
    """Total weight ``N_q`` of all ``q``-subsets of ``G``."""
    if not isinstance(q, int) or q < 1:
        raise GraphInputError("q must be a positive integer")
    if q > G.n:
        return Dyadic(0)
    return _hist_to_dyadic(clique_half_histogram(G, q), comb(q, 2))


def vertex_q_weight(G: WeightedGraph, v: int, q: int) -> Dyadic:
    """Total weight of the ``q``-subsets that contain ``v``."""
    G._check(v)
    if not isinstance(q, int) or q < 1:
        raise GraphInputError("q must be a positive integer")
    if q == 1:
        return Dyadic(1)
    if q > G.n:
        return Dyadic(0)
    Q = _Quotient(G)
    c = Q.class_of[v]
    hist: dict[int, int] = {}
    _clique_hist(Q.support, Q.half, Q.mult, q - 1, Q.support[c], 1 << c, 1, 0, hist)
    return _hist_to_dyadic(hist, comb(q, 2))


def all_vertex_q_weights(G: WeightedGraph, q: int) -> list[Dyadic]:
    """``vertex_q_weight`` for every vertex, sharing work across twin classes."""
    if q > G.n:
        return [Dyadic(0)] * G.n
    if q == 1:
        return [Dyadic(1)] * G.n
    Q = _Quotient(G)
    per_class = []
    for c in range(len(Q.mult)):
        hist: dict[int, int] = {}
        _clique_hist(Q.support, Q.half, Q.mult, q - 1, Q.support[c], 1 << c, 1, 0, hist)
        per_class.append(_hist_to_dyadic(hist, comb(q, 2)))
    return [per_class[Q.class_of[v]] for v in range(G.n)]


def pi_product(G: WeightedGraph, v: int, S: Iterable[int]) -> Dyadic:
    """Product of ``w(v, u)`` over ``u`` in ``S``."""
    G._check(v)
    halves = 0
    zero = False
    for u in S:
        G._check(u)
        if u == v:
            raise GraphInputError("v must not belong to S")
        c = G.codes[v][u]
        if c == 0:
            zero = True
        halves += c == 1
    return Dyadic(0) if zero else Dyadic(1, halves)


@dataclass(frozen=True)
class CellularDecomposition:
    cells: tuple  # tuple of sorted vertex tuples
    parts: tuple  # tuple of tuples of cell indices

    def part_vertices(self) -> list[list[int]]:
        return [sorted(v for ci in part for v in self.cells[ci]) for part in self.parts]

    def profile(self) -> tuple:
        return tuple(sorted((len(p) for p in self.parts), reverse=True))

    def implied_codes(self, n: int) -> list[list[int]]:
        cell_of = {v: ci for ci, cell in enumerate(self.cells) for v in cell}
        part_of = {ci: pi for pi, part in enumerate(self.parts) for ci in part}
        codes = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                if a == b or cell_of[a] == cell_of[b]:
                    continue
                codes[a][b] = 1 if part_of[cell_of[a]] == part_of[cell_of[b]] else 2
        return codes


@dataclass(frozen=True)
class NotCellular:
    """Failure witness: ``kind`` is ``"noncellular"`` (x, y, z with w(xy)=0 and
    w(xz) != w(yz)) or ``"triangle"`` (x, y, z with w(xy)=w(xz)=1/2, w(yz)=1)."""

    kind: str
    triple: tuple


def find_noncellular_triple(G: WeightedGraph):
    for x in range(G.n):
        for y in range(x + 1, G.n):
            if G.codes[x][y]:
                continue
            rx, ry = G.codes[x], G.codes[y]
            if rx != ry:
                for z in range(G.n):
                    if z != x and z != y and rx[z] != ry[z]:
                        return (x, y, z)
    return None


def find_half_half_one_triangle(G: WeightedGraph):
    """Lexicographically first ``(x, y, z)``, ``y < z``, with w(xy)=w(xz)=1/2, w(yz)=1."""
    for x in range(G.n):
        hx = G.half[x]
        for y in _bits(hx):
            common = hx & G.full[y] & ~((1 << (y + 1)) - 1)
            if common:
                z = (common & -common).bit_length() - 1
                return (x, y, z)
    return None


def count_half_half_one_triangles(G: WeightedGraph) -> int:
    total = 0
    for x in range(G.n):
        hx = G.half[x]
        for y in _bits(hx):
            total += (hx & G.full[y]).bit_count()
    return total // 2


def cellular_decomposition(G: WeightedGraph):
    """Cells and parts of a cellular, (1/2,1/2,1)-triangle-free graph, else a witness."""
    bad = find_noncellular_triple(G)
    if bad is not None:
        return NotCellular("noncellular", bad)
    tri = find_half_half_one_triangle(G)
    if tri is not None:
        return NotCellular("triangle", tri)
    cells = tuple(tuple(c) for c in twin_classes(G))
    # parts: cells joined by weight <= 1/2 (transitive once the graph is triangle-free)
    parts: list[list[int]] = []
    assigned = [-1] * len(cells)
    for ci, cell in enumerate(cells):
        if assigned[ci] >= 0:
            continue
        assigned[ci] = len(parts)
        group = [ci]
        for cj in range(ci + 1, len(cells)):
            if assigned[cj] < 0 and G.codes[cell[0]][cells[cj][0]] == 1:
                assigned[cj] = assigned[ci]
                group.append(cj)
        parts.append(group)
    return CellularDecomposition(cells, tuple(tuple(p) for p in parts))

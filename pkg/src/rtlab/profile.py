"""Profile graphs: densities as functions of part sizes, optimization, realizations
and the structural pruning rules on profiles.

A profile ``(s_1, ..., s_t)`` describes a complete t-partite frame with weight 1
between parts, where part ``i`` is split into ``s_i`` equal cells joined by
weight 1/2.  With part shares ``x_i`` summing to 1, the normalized K_q count is
the ``z**q`` coefficient of ``prod_i sum_l C(s_i, l) (x_i/s_i)**l 2**-C(l,2) z**l``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .wgraph import GraphInputError, WeightedGraph, count_cliques

__all__ = [
    "Profile",
    "DensityValue",
    "density_at",
    "density_gradient",
    "optimize_sizes",
    "realize",
    "kbound_check",
    "candidate_profiles",
    "repartition_delta",
    "parse_assignment",
    "PRUNING_RULES",
    "FULL_PRUNING",
]

PRUNING_RULES = ("part-plus-cell", "cell-lemma-1", "cell-lemma-2", "no31")
FULL_PRUNING = frozenset(PRUNING_RULES)


class Profile(tuple):
    """Cells-per-part tuple in canonical (descending) order."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a profile needs at least one part")
        if any(p < 1 for p in parts):
            raise ValueError("every part needs at least one cell")
        return super().__new__(cls, sorted(parts, reverse=True))

    @property
    def s(self) -> int:
        return sum(self)

    @property
    def t(self) -> int:
        return len(self)

    def groups(self) -> list[tuple[int, int]]:
        """``(cells, number_of_parts)`` for each distinct cell count, descending."""
        out: list[tuple[int, int]] = []
        for p in self:
            if out and out[-1][0] == p:
                out[-1] = (p, out[-1][1] + 1)
            else:
                out.append((p, 1))
        return out

    def to_json_dict(self) -> dict:
        return {"parts": list(self)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Profile":
        return cls(data["parts"])

    def __repr__(self):
        return f"Profile{tuple(self)}"


@dataclass(frozen=True)
class DensityValue:
    value: float
    exact: Fraction | None = None

    def __float__(self):
        return self.value


def parse_assignment(values: Sequence) -> tuple:
    """Rational strings (``"4/7"``) become Fractions, other entries floats."""
    out = []
    for v in values:
        if isinstance(v, (int, Fraction)):
            out.append(Fraction(v))
        elif isinstance(v, str):
            out.append(Fraction(v) if "." not in v and "e" not in v.lower() else float(v))
        else:
            out.append(float(v))
    return tuple(out)


def _is_exact(a) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in a)


def _check_assignment(P: Profile, a: Sequence) -> None:
    if len(a) != len(P):
        raise GraphInputError(f"assignment has {len(a)} entries for {len(P)} parts")
    if any(v < 0 for v in a):
        raise GraphInputError("part sizes must be non-negative")
    total = sum(a)
    if _is_exact(a):
        if total != 1:
            raise GraphInputError(f"part sizes sum to {total}, not 1")
    elif abs(float(total) - 1.0) > 1e-12:
        raise GraphInputError(f"part sizes sum to {float(total)!r}, not 1")


def _part_poly(s: int, x, q: int, one):
    half = one / 2
    return [comb(s, l) * (x / s) ** l * half ** comb(l, 2) for l in range(min(s, q) + 1)]


def _poly_mul(a, b, q: int, zero):
    out = [zero] * min(len(a) + len(b) - 1, q + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > q:
                break
            out[i + j] += ai * bj
    return out


def _density(P, a, q: int, one):
    zero = one * 0
    poly = [one]
    for s, x in zip(P, a):
        poly = _poly_mul(poly, _part_poly(s, x, q, one), q, zero)
    return poly[q] if len(poly) > q else zero


def density_at(P, a: Sequence, q: int) -> DensityValue:
    """Normalized weighted K_q count of profile ``P`` with part shares ``a``."""
    P = Profile(P)
    if q < 1:
        raise GraphInputError("q must be positive")
    _check_assignment(P, a)
    if _is_exact(a):
        d = _density(P, [Fraction(x) for x in a], q, Fraction(1))
        return DensityValue(float(d), d)
    d = _density(P, [float(x) for x in a], q, 1.0)
    return DensityValue(float(d))


def density_gradient(P, a: Sequence[float], q: int) -> np.ndarray:
    """Partial derivatives of the density with respect to each part share."""
    P = Profile(P)
    a = [float(x) for x in a]
    polys = [_part_poly(s, x, q, 1.0) for s, x in zip(P, a)]
    grad = np.zeros(len(P))
    for i, (s, x) in enumerate(zip(P, a)):
        dpoly = [0.0] + [
            l * comb(s, l) * x ** (l - 1) / s ** l * 0.5 ** comb(l, 2)
            for l in range(1, min(s, q) + 1)
        ]
        poly = dpoly
        for j, other in enumerate(polys):
            if j != i:
                poly = _poly_mul(poly, other, q, 0.0)
        grad[i] = poly[q] if len(poly) > q else 0.0
    return grad


# -- optimization ---------------------------------------------------------


def _expand(groups, y):
    x = []
    for (_, count), yg in zip(groups, y):
        x.extend([yg] * count)
    return x


def _rationalize(y: Sequence[float], counts: Sequence[int], max_den: int = 10**6):
    """Round group shares to nearby rationals that still satisfy the simplex constraint."""
    ys = [Fraction(float(v)).limit_denominator(max_den) for v in y]
    ys = [max(v, Fraction(0)) for v in ys]
    # put the rounding slack on the largest group share
    k = max(range(len(ys)), key=lambda g: ys[g] * counts[g])
    rest = sum(c * v for g, (c, v) in enumerate(zip(counts, ys)) if g != k)
    ys[k] = (1 - rest) / counts[k]
    if ys[k] < 0:
        return None
    return ys


def _grad_groups(P, groups, y, q):
    g = density_gradient(P, _expand(groups, y), q)
    out, i = [], 0
    for _, count in groups:
        out.append(g[i : i + count].sum())
        i += count
    return np.array(out)


def _optimize_1d(P, groups, q):
    """Two distinct cell counts: maximize over the share of one part of the first group."""
    (_, n1), (_, n2) = groups
    hi = 1.0 / n1

    def y_of(u):
        return [u, (1.0 - n1 * u) / n2]

    def val(u):
        return float(_density(P, _expand(groups, y_of(u)), q, 1.0))

    def deriv(u):
        g = _grad_groups(P, groups, y_of(u), q)
        return g[0] - n1 / n2 * g[1]

    grid = np.linspace(0.0, hi, 2001)
    vals = [val(u) for u in grid]
    i = int(np.argmax(vals))
    best_u = grid[i]
    lo_u, hi_u = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    for a, b in ((lo_u, best_u), (best_u, hi_u)):
        da, db = deriv(a), deriv(b)
        if da > 0 > db:
            for _ in range(200):
                if b - a <= 1e-15:
                    break
                m = 0.5 * (a + b)
                if deriv(m) > 0:
                    a = m
                else:
                    b = m
            u = 0.5 * (a + b)
            if val(u) >= val(best_u):
                best_u = u
    return y_of(best_u)


def _project(y, counts):
    """Map ``y`` onto {y >= 0, sum(counts * y) = 1} by a common shift and clipping."""
    c = np.asarray(counts, dtype=float)
    lo, hi = -1.0 / c.min() - np.abs(y).max() - 1, np.abs(y).max() + 1
    for _ in range(200):
        lam = 0.5 * (lo + hi)
        z = np.maximum(y - lam, 0.0)
        if (c * z).sum() > 1:
            lo = lam
        else:
            hi = lam
    z = np.maximum(y - hi, 0.0)
    return z / (c * z).sum()


def _optimize_nd(P, groups, q, starts: int = 16, seed: int = 0):
    counts = [c for _, c in groups]
    m = len(groups)
    c = np.asarray(counts, dtype=float)
    uniform = np.full(m, 1.0 / c.sum())
    inits = [uniform]
    for g in range(m):
        vertex = np.zeros(m)
        vertex[g] = 1.0 / counts[g]
        inits.append(0.75 * vertex + 0.25 * uniform)
    rng = np.random.default_rng(seed)
    while len(inits) < max(starts, m + 1):
        z = rng.dirichlet(np.ones(m))
        inits.append(z / c)

    def f(y):
        return -float(_density(P, _expand(groups, y), q, 1.0))

    def jac(y):
        return -_grad_groups(P, groups, y, q)

    cons = [{"type": "eq", "fun": lambda y: float(c @ y) - 1.0, "jac": lambda y: c}]
    bounds = [(0.0, 1.0 / cg) for cg in counts]
    best_y, best_v = None, -np.inf
    for y0 in inits:
        res = minimize(f, y0, jac=jac, bounds=bounds, constraints=cons, method="SLSQP",
                       options={"ftol": 1e-16, "maxiter": 500})
        y = _project(np.asarray(res.x, dtype=float), counts)
        v = -f(y)
        if v > best_v:
            best_v, best_y = v, y
    # pattern refinement: move mass between pairs of groups, halving the step
    y = best_y.copy()
    step = 1e-2
    while step >= 1e-10:
        improved = False
        for g in range(m):
            for h in range(m):
                if g == h:
                    continue
                cand = y.copy()
                cand[g] += step / counts[g]
                cand[h] -= step / counts[h]
                if cand[h] < 0:
                    continue
                v = -f(cand)
                if v > best_v:
                    y, best_v, improved = cand, v, True
        if not improved:
            step /= 2
    return list(y)


def _stationary_exact(P, groups, ys, q) -> bool:
    """True if the rational group shares ``ys`` satisfy the first-order conditions exactly."""
    counts = [c for _, c in groups]
    x = _expand(groups, ys)
    polys = [_part_poly(s, xi, q, Fraction(1)) for s, xi in zip(P, x)]
    grads = []
    idx = 0
    for (s, count), yg in zip(groups, ys):
        dpoly = [Fraction(0)] + [
            l * comb(s, l) * yg ** (l - 1) / Fraction(s) ** l * Fraction(1, 2 ** comb(l, 2))
            for l in range(1, min(s, q) + 1)
        ]
        poly = dpoly
        for j, other in enumerate(polys):
            if j != idx:
                poly = _poly_mul(poly, other, q, Fraction(0))
        grads.append((poly[q] if len(poly) > q else Fraction(0)) * count)
        idx += count
    # KKT on the scaled simplex: grad_g / count_g equal on the support, not larger off it
    scaled = [g / c for g, c in zip(grads, counts)]
    active = [s for s, yg in zip(scaled, ys) if yg > 0]
    if not active:
        return False
    lam = active[0]
    return all(s == lam for s in active) and all(s <= lam for s, yg in zip(scaled, ys) if yg == 0)


def optimize_sizes(P, q: int, starts: int = 16, seed: int = 0) -> tuple[tuple, DensityValue]:
    """Maximize ``density_at(P, x, q)`` over part shares ``x`` on the simplex.

    Parts with the same number of cells share the same size.  Returns the
    per-part assignment (Fractions when the maximizer is certified exactly,
    floats otherwise) and the optimal density.
    """
    P = Profile(P)
    t = len(P)
    if P.s < q:
        a = tuple(Fraction(1, t) for _ in P)
        return a, DensityValue(0.0, Fraction(0))
    groups = P.groups()
    counts = [c for _, c in groups]
    if len(groups) == 1:
        a = tuple(Fraction(1, t) for _ in P)
        d = _density(P, a, q, Fraction(1))
        return a, DensityValue(float(d), d)
    if len(groups) == 2:
        y = _optimize_1d(P, groups, q)
    else:
        y = _optimize_nd(P, groups, q, starts=starts, seed=seed)
    yf = [float(v) for v in y]
    float_val = float(_density(P, _expand(groups, yf), q, 1.0))
    ys = _rationalize(yf, counts)
    if ys is not None:
        exact_val = _density(P, _expand(groups, ys), q, Fraction(1))
        if _stationary_exact(P, groups, ys, q) or all(v == 0 or v * c == 1 for v, c in zip(ys, counts)):
            if float(exact_val) >= float_val - 1e-15:
                return tuple(_expand(groups, ys)), DensityValue(float(exact_val), exact_val)
        if float(exact_val) >= float_val:
            float_val = float(exact_val)
            yf = [float(v) for v in ys]
    return tuple(_expand(groups, yf)), DensityValue(float_val)


# -- realizations -----------------------------------------------------------


def _largest_remainder(n: int, shares: Sequence) -> list[int]:
    fr = [Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(10**12) for s in shares]
    total = sum(fr)
    quotas = [n * f / total for f in fr]
    base = [int(qv) for qv in quotas]
    left = n - sum(base)
    order = sorted(range(len(fr)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:left]:
        base[i] += 1
    return base


def realize(P, a: Sequence, n: int) -> WeightedGraph:
    """Finite profile graph on ``n`` vertices: parts apportioned by largest remainder,
    cells within a part as equal as possible."""
    P = Profile(P)
    _check_assignment(P, a)
    if n < P.s:
        raise GraphInputError(f"n={n} is smaller than the number of cells {P.s}")
    sizes = _largest_remainder(n, a)
    cell_of, part_of = [], []
    cell_id = 0
    for pi, (s_i, size) in enumerate(zip(P, sizes)):
        if size < s_i:
            raise GraphInputError(f"part {pi} gets {size} vertices for {s_i} cells")
        base, extra = divmod(size, s_i)
        for c in range(s_i):
            for _ in range(base + (c < extra)):
                cell_of.append(cell_id)
                part_of.append(pi)
            cell_id += 1
    codes = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if cell_of[u] == cell_of[v]:
                continue
            codes[u][v] = codes[v][u] = 1 if part_of[u] == part_of[v] else 2
    return WeightedGraph.from_codes(codes)


def realize_cells(P, part_sizes: Sequence[int]) -> WeightedGraph:
    """Profile graph with explicit integer part sizes (cells balanced inside parts)."""
    P = Profile(P)
    n = sum(part_sizes)
    return realize(P, [Fraction(k, n) for k in part_sizes], n)


# -- pruning ------------------------------------------------------------------


def kbound_check(k: int, q: int, s: int) -> bool:
    """Exact test of ``2**(k-2) * (k/(k-1))**(k-1) - k <= (q-k+1)/(s-q)``."""
    if s <= q:
        raise GraphInputError("the bound needs more cells than q (s > q)")
    if k < 2:
        return True
    lhs = Fraction(2) ** (k - 2) * Fraction(k, k - 1) ** (k - 1) - k
    rhs = Fraction(q - k + 1, s - q)
    return lhs <= rhs


def max_cells_allowed(q: int, s: int) -> int:
    """Largest per-part cell count surviving both cell lemmas for ``s`` cells in total."""
    kmax = min(q, s) if s > q else s
    if s > q:
        k = 2
        while k < kmax and kbound_check(k + 1, q, s):
            k += 1
        kmax = min(kmax, max(k, 2))
    return kmax


def partitions(total: int, parts: int, max_part: int | None = None):
    """Partitions of ``total`` into exactly ``parts`` positive parts, descending."""
    if max_part is None:
        max_part = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts or total > parts * max_part:
        return
    hi = min(max_part, total - (parts - 1))
    lo = -(-total // parts)
    for first in range(hi, lo - 1, -1):
        for rest in partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _survives(P: Profile, q: int, rules) -> bool:
    s = P.s
    if "cell-lemma-1" in rules and P[0] > q:
        return False
    if "cell-lemma-2" in rules and s > q:
        k = P[0]
        if k >= 3 and not kbound_check(k, q, s):
            return False
    if "no31" in rules and q == 5 and 3 in P and 1 in P:
        return False
    return True


def candidate_profiles(q: int, p: int, pruning: Iterable[str] = FULL_PRUNING) -> list[Profile]:
    """Profiles with ``s >= q`` and ``s + t <= p - 1`` that survive the chosen rules.

    ``part-plus-cell`` keeps only ``s + t = p - 1``; ``cell-lemma-1`` caps cells
    per part at ``q``; ``cell-lemma-2`` applies the k-bound when ``s > q``;
    ``no31`` (q = 5 only) forbids a 3-cell part together with a 1-cell part.
    """
    rules = frozenset(pruning)
    unknown = rules - FULL_PRUNING
    if unknown:
        raise ValueError(f"unknown pruning rules {sorted(unknown)}")
    if p < q + 2:
        return []
    out = []
    for s in range(q, p - 1):
        t_hi = min(s, p - 1 - s)
        t_lo = t_hi if "part-plus-cell" in rules else 1
        for t in range(t_lo, t_hi + 1):
            if t < 1:
                continue
            for parts in partitions(s, t):
                P = Profile(parts)
                if _survives(P, q, rules):
                    out.append(P)
    return sorted(out)


def repartition_delta(x) -> tuple[Fraction, Fraction, Fraction]:
    """Change in (edges, triangles, K_4) when two 2-cell parts with cells of size 3x
    become three 1-cell parts of size 4x.

    For positive integer ``x`` the closed form is cross-checked against exact
    counts on the two realizations with ``12x`` vertices.
    """
    x = Fraction(x)
    if x <= 0:
        raise GraphInputError("x must be positive")
    delta = (3 * x**2, 10 * x**3, Fraction(-81, 4) * x**4)
    if x.denominator == 1:
        n = 12 * int(x)
        before = realize((2, 2), (Fraction(1, 2), Fraction(1, 2)), n)
        after = realize((1, 1, 1), (Fraction(1, 3),) * 3, n)
        counted = tuple((count_cliques(after, k) - count_cliques(before, k)).as_fraction() for k in (2, 3, 4))
        if counted != delta:
            raise AssertionError(f"closed form {delta} disagrees with recount {counted}")
    return delta

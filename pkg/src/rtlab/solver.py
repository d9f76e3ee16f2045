"""Ramsey-Turán clique densities from profile-graph optimization.

``rt_density(q, p)`` maximizes the profile density over every profile with
``s + t = p - 1`` and ``s >= q``.  ``closed_form(q, p)`` evaluates the known
formulas independently (univariate objectives are maximized by a grid plus
bounded Brent search, not by the profile optimizer), so the two can be compared.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np
from scipy.optimize import minimize_scalar

from .profile import (
    DensityValue,
    Profile,
    candidate_profiles,
    density_at,
    kbound_check,
    max_cells_allowed,
    optimize_sizes,
    partitions,
)
from .wgraph import GraphInputError, WeightedGraph

__all__ = [
    "ClosedForm",
    "DensityResult",
    "rt_density",
    "closed_form",
    "closed_forms",
    "conjecture_profile",
    "counterexample_gap",
    "counterexample_search",
    "CounterexampleCertificate",
    "verify_part_bounds",
    "part_bound_report",
    "delta_bound_check",
    "delta_for_epsilon",
    "balanced_profile",
    "table_rows",
    "alternative_k6_free_graph",
    "OPEN_LABEL",
]

OPEN_LABEL = "profile-optimal lower bound, not a proven density"
TIE_TOL = 1e-12


# -- closed forms -----------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    theorem: str
    value: float
    exact: Fraction | None = None
    expression: str = ""
    argmax: float | None = None  # maximizing x for univariate forms
    objective: float | None = None  # maximum of the stated objective, when one is stated
    note: str | None = None


def _max_univariate(f, grid: int = 20001) -> tuple[float, float]:
    """Global max of a smooth f on [0, 1]: dense grid, then bounded Brent around the best node."""
    xs = np.linspace(0.0, 1.0, grid)
    vals = f(xs)
    i = int(np.argmax(vals))
    h = 1.0 / (grid - 1)
    lo, hi = max(0.0, xs[i] - h), min(1.0, xs[i] + h)
    res = minimize_scalar(lambda x: -float(f(np.array([x]))[0]), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-14})
    best_x, best_v = float(xs[i]), float(vals[i])
    if -res.fun > best_v:
        best_x, best_v = float(res.x), float(-res.fun)
    return best_x, best_v


def _binom_term(m: int, j: int, y):
    """``C(m, j) * (y / m) ** j`` with the convention that an empty block contributes 1 at j = 0."""
    if m == 0:
        return np.ones_like(y) if j == 0 else np.zeros_like(y)
    return comb(m, j) * (y / m) ** j


def p_large_objective(q: int, s: int):
    """Density of the ``s``-cell, ``(s-1)``-part profile as a function of the two-cell part size x."""
    m = s - 2

    def f(x):
        x = np.asarray(x, dtype=float)
        y = 1.0 - x
        out = _binom_term(m, q, y) + x * _binom_term(m, q - 1, y)
        if q >= 2:
            out = out + 0.5 * (x / 2) ** 2 * _binom_term(m, q - 2, y)
        return out

    return f


def _k5_eleven_objective(x):
    x = np.asarray(x, dtype=float)
    return (x / 4) ** 4 * 0.25 * (1 - x) + 4 * (x / 4) ** 3 * 0.5 * ((1 - x) / 2) ** 2


def _frac_pow_half(e: int) -> Fraction:
    return Fraction(1, 2 ** e)


def _q_plus(q: int, p: int) -> ClosedForm | None:
    base = Fraction(1, q ** q)
    if p == q + 2 and q >= 2:
        e = comb(q, 2)
        return ClosedForm("q-plus", float(base * _frac_pow_half(e)), base * _frac_pow_half(e),
                          f"(1/{q})^{q} (1/2)^{e}")
    if p == q + 3 and q >= 2:
        e = comb(q // 2, 2) + comb(-(-q // 2), 2)
        return ClosedForm("q-plus", float(base * _frac_pow_half(e)), base * _frac_pow_half(e),
                          f"(1/{q})^{q} (1/2)^{e}")
    if p == q + 4 and q >= 3:
        e = comb(q // 3, 2) + comb((q + 1) // 3, 2) + comb((q + 2) // 3, 2)
        return ClosedForm("q-plus", float(base * _frac_pow_half(e)), base * _frac_pow_half(e),
                          f"(1/{q})^{q} (1/2)^{e}")
    return None


def _odd_form(theorem: str, q: int, h: int) -> ClosedForm:
    v = Fraction(comb(h, q), h ** q)
    return ClosedForm(theorem, float(v), v, f"C({h},{q}) (1/{h})^{q}")


def _even_form(theorem: str, q: int, h: int) -> ClosedForm:
    x, v = _max_univariate(p_large_objective(q, h))
    if q == 2:
        xs = Fraction(4, 3 * h - 2)
        exact = Fraction(3 * h - 5, 6 * h - 4)
        return ClosedForm(theorem, float(exact), exact, f"(3*{h}-5)/(6*{h}-4)", argmax=float(xs), objective=v)
    return ClosedForm(theorem, v, None, f"max_x p-large objective (q={q}, s={h})", argmax=x, objective=v)


def closed_forms(q: int, p: int) -> list[ClosedForm]:
    """Every known formula covering ``(q, p)``, most specific first."""
    out: list[ClosedForm] = []
    if q < 2 or p <= q:
        return out
    if p == q + 1:
        return [ClosedForm("trivial", 0.0, Fraction(0), "0")]
    h = (p - 1) // 2  # odd p = 2h + 1
    if q == 4 and p in (6, 7, 8):
        e = {6: 6, 7: 2, 8: 1}[p]
        v = Fraction(1, 4 ** 4) * _frac_pow_half(e)
        out.append(ClosedForm("k4-thm", float(v), v, f"(1/4)^4 (1/2)^{e}"))
    if q == 5 and 7 <= p <= 11:
        if p == 11:
            x, v = _max_univariate(_k5_eleven_objective)
            printed = (675 + 228 * math.sqrt(15)) / 480200
            out.append(ClosedForm(
                "k5-thm", printed, None, "(675+228*sqrt(15))/480200", argmax=x, objective=v,
                note="the printed surd is 10x the maximum of the stated objective, "
                     "which equals (675+228*sqrt(15))/4802000"))
        else:
            v = {7: Fraction(1, 5 ** 5 * 2 ** 10), 8: Fraction(1, 5 ** 5 * 2 ** 4),
                 9: Fraction(1, 5 ** 5 * 2 ** 2), 10: Fraction(6, 6 ** 5 * 4)}[p]
            out.append(ClosedForm("k5-thm", float(v), v, str(v)))
    # parity theorems for q <= 5
    parity = {2: ("edge-thm", 4, 5), 3: ("triangle-thm", 6, 7), 4: ("k4-thm", 8, 9), 5: ("k5-thm", 12, 13)}
    if q in parity:
        name, even_lo, odd_lo = parity[q]
        if p % 2 == 0 and p >= even_lo:
            out.append(_even_form(name, q, p // 2))
        elif p % 2 == 1 and p >= odd_lo:
            out.append(_odd_form(name, q, h))
    qp = _q_plus(q, p)
    if qp is not None:
        out.append(qp)
    if q >= 5 and p >= 5 * q:
        if p % 2 == 0:
            out.append(_even_form("general-q", q, p // 2))
        else:
            out.append(_odd_form("general-q", q, h))
    return out


def closed_form(q: int, p: int) -> ClosedForm | None:
    forms = closed_forms(q, p)
    return forms[0] if forms else None


# -- density search -----------------------------------------------------------


@dataclass
class DensityResult:
    q: int
    p: int
    best_profile: Profile | None
    best_assignment: tuple
    value: DensityValue
    ties: list = field(default_factory=list)
    candidates: list = field(default_factory=list)  # (profile, assignment, DensityValue)
    closed_form: ClosedForm | None = None
    closed_form_match: tuple | None = None  # (theorem, |difference|, within 1e-9)
    status: str = "proven"

    def to_json_dict(self) -> dict:
        d = {
            "q": self.q,
            "p": self.p,
            "profile": list(self.best_profile) if self.best_profile else None,
            "assignment": [_num_str(x) for x in self.best_assignment],
            "value": self.value.value,
            "exact": str(self.value.exact) if self.value.exact is not None else None,
            "ties": [list(t) for t in self.ties],
            "status": self.status,
        }
        if self.closed_form is not None:
            d["closed_form"] = {"theorem": self.closed_form.theorem, "value": self.closed_form.value,
                                "expression": self.closed_form.expression}
            if self.closed_form.note:
                d["closed_form"]["note"] = self.closed_form.note
            d["match"] = bool(self.closed_form_match[2])
        return d


def _num_str(x) -> str:
    return str(x) if isinstance(x, (int, Fraction)) else repr(float(x))


def _optimize_task(args):
    P, q = args
    a, d = optimize_sizes(P, q)
    return P, a, d


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("RTLAB_JOBS", "1") or 1)
    return max(1, int(jobs))


def _run_tasks(tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_optimize_task, tasks))
    return [_optimize_task(t) for t in tasks]


def rt_density(q: int, p: int, loose: bool = False, jobs: int | None = 1) -> DensityResult:
    """Best profile density over all profiles with ``s + t = p - 1`` (``<=`` with ``loose``)."""
    if q < 2:
        raise GraphInputError("q must be at least 2")
    if p < q + 1:
        raise GraphInputError("need p >= q + 1")
    cf = closed_form(q, p)
    status = "proven" if cf is not None else OPEN_LABEL
    if p == q + 1:
        res = DensityResult(q, p, None, (), DensityValue(0.0, Fraction(0)), status=status, closed_form=cf)
        res.closed_form_match = (cf.theorem, 0.0, True)
        return res
    rules = set() if loose else {"part-plus-cell"}
    profiles = candidate_profiles(q, p, rules)
    results = _run_tasks([(P, q) for P in profiles], resolve_jobs(jobs))
    best = max(d.value for _, _, d in results)
    ties = sorted(P for P, _, d in results if d.value >= best - TIE_TOL * max(best, 1e-300))
    P0 = ties[0]
    _, a0, d0 = next(r for r in results if r[0] == P0)
    res = DensityResult(q, p, P0, a0, d0, ties=ties, candidates=sorted(results, key=lambda r: r[0]),
                        closed_form=cf, status=status)
    if cf is not None:
        diff = abs(d0.value - cf.value)
        res.closed_form_match = (cf.theorem, diff, diff <= 1e-9)
    return res


# -- conjecture and counterexamples -------------------------------------------


def balanced_profile(s: int, t: int) -> Profile:
    if not 1 <= t <= s:
        raise GraphInputError(f"need 1 <= t <= s, got s={s}, t={t}")
    base, r = divmod(s, t)
    return Profile([base + 1] * r + [base] * (t - r))


def conjecture_profile(q: int, p: int) -> Profile:
    """Balanced profile of the conjectured optimal family."""
    if q < 3 or p < q + 2:
        raise GraphInputError("the conjecture covers p >= q + 2, q >= 3")
    if p <= 2 * q - 1:
        return balanced_profile(q, p - q - 1)
    return balanced_profile(-(-(p - 1) // 2), (p - 1) // 2)


def counterexample_gap(q: int, pA, pB) -> float:
    """``optimize_sizes(pB) - optimize_sizes(pA)``; exact (Fraction) when both optima are."""
    pA, pB = Profile(pA), Profile(pB)
    if pA.s < q or pB.s < q:
        raise GraphInputError("both profiles need at least q cells")
    if pA == pB:
        return Fraction(0)
    _, dA = optimize_sizes(pA, q)
    _, dB = optimize_sizes(pB, q)
    if dA.exact is not None and dB.exact is not None:
        return dB.exact - dA.exact
    return dB.value - dA.value


@dataclass
class CounterexampleCertificate:
    k: int
    c: Fraction
    q: int | None
    lhs: Fraction | None = None  # C(q+k, q) (q/(q+k))^q (1/2)^(2k)
    rhs: Fraction | None = None  # 1 + c
    p: int | None = None
    conjectured: Profile | None = None
    alternative: Profile | None = None
    conjectured_value: float | None = None
    alternative_value: float | None = None
    gap: float | None = None
    gap_ok: bool | None = None
    searched_up_to: int | None = None
    scanned: list = field(default_factory=list)  # (q, lhs) pairs

    @property
    def found(self) -> bool:
        return self.q is not None

    def to_json_dict(self) -> dict:
        return {
            "k": self.k, "c": str(self.c), "q": self.q, "p": self.p,
            "lhs": str(self.lhs) if self.lhs is not None else None,
            "lhs_decimal": float(self.lhs) if self.lhs is not None else None,
            "rhs": str(self.rhs) if self.rhs is not None else None,
            "conjectured": list(self.conjectured) if self.conjectured else None,
            "alternative": list(self.alternative) if self.alternative else None,
            "conjectured_value": self.conjectured_value,
            "alternative_value": self.alternative_value,
            "gap": float(self.gap) if self.gap is not None else None,
            "gap_ok": self.gap_ok,
            "searched_up_to": self.searched_up_to,
        }


def certificate_lhs(k: int, q: int) -> Fraction:
    return comb(q + k, q) * Fraction(q, q + k) ** q / 4 ** k


def counterexample_search(k: int, c, q_max: int = 200, part: int = 1, check_gap: bool = True,
                          ) -> CounterexampleCertificate:
    """Least ``q >= 3k + 4`` with ``C(q+k, q) (q/(q+k))^q / 4^k >= 1 + c``, evaluated exactly.

    Part 1 compares the conjectured ``(q, t)`` family with ``(q + k, t - k)`` at
    ``t = floor((q + 3k) / 2)``; part 2 compares ``(q, q)`` with ``(q + k, q - k)``
    at ``p = 2q + 1``.  With ``check_gap`` both profiles are optimized and the
    density gap is compared with ``c`` times the conjectured value.
    """
    if k < 1:
        raise GraphInputError("k must be positive")
    c = Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**12)
    if c <= 0:
        raise GraphInputError("c must be positive")
    cert = CounterexampleCertificate(k, c, None, rhs=1 + c, searched_up_to=q_max)
    for q in range(3 * k + 4, q_max + 1):
        lhs = certificate_lhs(k, q)
        cert.scanned.append((q, lhs))
        if lhs >= 1 + c:
            cert.q, cert.lhs = q, lhs
            break
    if cert.q is None or not check_gap:
        return cert
    q = cert.q
    if part == 1:
        t = (q + 3 * k) // 2
        cert.p = q + t + 1
        cert.conjectured = balanced_profile(q, t)
        cert.alternative = balanced_profile(q + k, t - k)
    else:
        cert.p = 2 * q + 1
        cert.conjectured = balanced_profile(q, q)
        cert.alternative = balanced_profile(q + k, q - k)
    _, dA = optimize_sizes(cert.conjectured, q)
    _, dB = optimize_sizes(cert.alternative, q)
    cert.conjectured_value, cert.alternative_value = dA.value, dB.value
    if dA.exact is not None and dB.exact is not None:
        cert.gap = dB.exact - dA.exact
        cert.gap_ok = cert.gap >= c * dA.exact
    else:
        cert.gap = dB.value - dA.value
        cert.gap_ok = cert.gap >= float(c) * dA.value
    return cert


# -- part-count bounds ----------------------------------------------------------


@dataclass
class PartBoundReport:
    q: int
    p: int
    c: float
    bound: float | None
    ok: bool
    note: str = ""
    checked: int = 0  # profiles with t below the bound that were examined
    violators: list = field(default_factory=list)


def _pruned_survivors(q: int, s: int, t: int):
    cap = max_cells_allowed(q, s)
    for parts in partitions(s, t, cap):
        P = Profile(parts)
        if P[0] > q:
            continue
        if s > q and P[0] >= 3 and not kbound_check(P[0], q, s):
            continue
        yield P


def part_bound_report(q: int, p: int, c) -> PartBoundReport:
    """Check ``t >= c q / ln q`` for every k-bound survivor with ``s + t = p - 1``.

    The check is vacuous (``ok`` with a ``range`` note) when
    ``p < q + c q / ln q + 1``.  When ``c`` is outside (0, 1) or ``q`` is below the
    size where ``2^(ln q / c) > 4q + 4`` the enumeration still runs and the note
    records that the asymptotic statement does not promise the outcome.
    """
    c = float(c)
    if q < 2 or p < q + 2:
        return PartBoundReport(q, p, c, None, True, "range: p < q + 2")
    bound = c * q / math.log(q)
    if p < q + bound + 1:
        return PartBoundReport(q, p, c, bound, True, "range: p below q + c q / ln q + 1")
    notes = []
    if not 0 < c < 1:
        notes.append("range: c outside (0, 1)")
    elif math.log(q) / c * math.log(2) <= math.log(4 * q + 4):
        notes.append("range: q below the threshold 2^(ln q / c) > 4q + 4")
    rep = PartBoundReport(q, p, c, bound, True, "; ".join(notes))
    for t in range(1, math.ceil(bound)):
        s = p - 1 - t
        if s < q or t > s:
            continue
        for P in _pruned_survivors(q, s, t):
            rep.checked += 1
            rep.violators.append(P)
    rep.ok = not rep.violators
    return rep


def verify_part_bounds(q: int, p: int, c) -> bool:
    return part_bound_report(q, p, c).ok


def delta_for_epsilon(eps: float, step: float = 1e-4) -> float:
    """Largest delta on a grid with ``delta < eps / 2`` and ``2^(1/delta) > 4/eps + 2/delta``."""
    k = math.ceil(eps / 2 / step) - 1
    while k > 0:
        d = k * step
        if math.log(2) / d > math.log(4 / eps + 2 / d):
            return d
        k -= 1
    raise ValueError(f"no admissible delta for eps={eps}")


def delta_bound_check(q: int, p: int, eps: float) -> PartBoundReport:
    """Check ``t >= delta q`` for every k-bound survivor when ``p - 1 >= (1 + eps) q``."""
    if p - 1 < (1 + eps) * q:
        return PartBoundReport(q, p, eps, None, True, "range: p - 1 < (1 + eps) q")
    delta = delta_for_epsilon(eps)
    bound = delta * q
    rep = PartBoundReport(q, p, eps, bound, True, f"delta={delta}")
    for t in range(1, math.ceil(bound)):
        s = p - 1 - t
        if s < q or t > s:
            continue
        for P in _pruned_survivors(q, s, t):
            rep.checked += 1
            rep.violators.append(P)
    rep.ok = not rep.violators
    return rep


# -- table and fixtures -------------------------------------------------------


def _in_scope(q: int, p: int) -> bool:
    return q <= 5 or p <= q + 4 or p >= 5 * q


def table_rows(q_range, p_range, jobs: int | None = 1) -> list[dict]:
    """One row per ``(q, p)`` with ``p >= q + 2``; cells outside the known formulas are ``open``."""
    rows = []
    for q in q_range:
        for p in p_range:
            if p < q + 2:
                continue
            if not _in_scope(q, p):
                rows.append({"q": q, "p": p, "profile": "", "assignment": "", "value": "",
                             "exact": "", "closed_form": "", "match": "", "status": "open"})
                continue
            r = rt_density(q, p, jobs=jobs)
            cf = r.closed_form
            rows.append({
                "q": q, "p": p,
                "profile": " ".join(map(str, r.best_profile)),
                "assignment": " ".join(_num_str(x) for x in r.best_assignment),
                "value": f"{r.value.value:.15g}",
                "exact": str(r.value.exact) if r.value.exact is not None else "",
                "closed_form": f"{cf.value:.15g}" if cf else "",
                "match": str(bool(r.closed_form_match and r.closed_form_match[2])).lower(),
                "status": "ok" if cf else "open",
            })
    return rows


def alternative_k6_free_graph() -> WeightedGraph:
    """Six equal classes: two 3-class groups of half-weight pairs joined by weight 1,
    with the pairs (0,1), (3,4) and (2,5) deleted."""
    n = 6
    codes = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            same = (u < 3) == (v < 3)
            codes[u][v] = codes[v][u] = 1 if same else 2
    for u, v in ((0, 1), (3, 4), (2, 5)):
        codes[u][v] = codes[v][u] = 0
    return WeightedGraph.from_codes(codes)

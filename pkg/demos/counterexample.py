"""The conjectured extremal family is not always optimal.

For K_5 and p = 10 the conjecture predicts 5 cells in 4 parts, profile
(2,1,1,1).  Three parts of two cells each do better.
"""
from fractions import Fraction

from rtlab.profile import optimize_sizes
from rtlab.solver import conjecture_profile, counterexample_gap, counterexample_search, rt_density

for p in (10, 11):
    guess = conjecture_profile(5, p)
    r = rt_density(5, p)
    _, dg = optimize_sizes(guess, 5)
    print(f"p={p}: conjecture {tuple(guess)} gives {dg.value:.6g}, "
          f"best is {tuple(r.best_profile)} with {r.value.value:.6g}")

print("exact gap at p=10:", counterexample_gap(5, (2, 1, 1, 1), (2, 2, 2)))

# The general construction: trade k parts for k cells once q is large enough.
for k, c in [(1, Fraction(1, 100)), (1, Fraction(1, 10)), (2, Fraction(1, 100))]:
    cert = counterexample_search(k, c)
    print(f"k={k}, c={c}: least q = {cert.q}, certificate {float(cert.lhs):.4f} >= {float(cert.rhs)}, "
          f"{tuple(cert.conjectured)} -> {tuple(cert.alternative)} at p={cert.p}, gap ok: {cert.gap_ok}")

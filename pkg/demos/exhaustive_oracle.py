"""Check the weighted Zykov theorem by brute force on tiny graphs.

Every assignment of weights 0, 1/2, 1 to the pairs of n vertices is scanned.
Among the p-skeleton-free ones the best N_q is always reached by a profile
graph.
"""
from rtlab.oracle import brute_force_max, verify_zykov_small

for n, q, p in [(4, 2, 4), (4, 2, 5), (3, 3, 4), (5, 2, 5), (5, 3, 6), (5, 3, 7)]:
    rep = brute_force_max(n, q, p)
    ok = verify_zykov_small(n, q, p, report=rep)
    witness = tuple(rep.profile_witness) if rep.profile_witness else None
    print(f"n={n} q={q} p={p}: {rep.graphs_scanned:>6} graphs, {rep.skeleton_free:>6} skeleton-free, "
          f"max N_q = {rep.max_value} ({rep.witness_count} maximizers), profile {witness}, verified {ok}")

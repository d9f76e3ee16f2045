"""Watch a random weighted graph turn into a profile graph.

Each step either copies a vertex's weights onto a non-neighbour, resolves a
(1/2,1/2,1) triangle, or rebalances cells.  N_q never goes down.
"""
import random
import sys

from rtlab import WeightedGraph, count_cliques, max_skeleton_value, zykov_reduce

q, p = 3, 7
seed = int(sys.argv[1]) if len(sys.argv) > 1 else 4
rng = random.Random(seed)

while True:
    n = 8
    codes = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            codes[i][j] = codes[j][i] = rng.choice((0, 1, 1, 2))
    G = WeightedGraph.from_codes(codes)
    if max_skeleton_value(G)[0] <= p - 1:
        break

print(f"start: n={G.n}, N_{q} = {count_cliques(G, q)}, skeleton value {max_skeleton_value(G)[0]}")
H, profile, trace = zykov_reduce(G, q, p, check_skeleton=True)
for step in trace.steps:
    extra = ""
    if step.options:
        extra = f"   (R_x gives {step.options[0]}, R_y gives {step.options[1]})"
    print(f"  {step.kind:<18} {str(step.vertices):<12} {str(step.before):>8} -> {step.after}{extra}")
print(f"end: profile {tuple(profile)}, N_{q} = {count_cliques(H, q)}")

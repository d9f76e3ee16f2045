"""Finite Bollobás-Erdős graphs on a high-dimensional sphere.

The distance rules alone forbid K_4 in a BE pair and triangles inside one
class, whatever the sample.  Densities and independence numbers are only
measured.
"""
from rtlab.be import SphereConfig, build_construction, clique_census, structural_report

for d in (10, 20, 50):
    G = build_construction(SphereConfig(d=d, n=300, eps=0.5, seed=d), 2, 1)
    census = clique_census(G, 4)
    rep = structural_report(G)
    ind = rep["independence"]
    print(f"BE pair d={d}: edges {rep['edges']}, triangles {census.counts[3]}, K4 {census.counts[4]}, "
          f"cross density {rep['cell_pair_density'][0]['density']:.3f}, "
          f"alpha in [{ind['lower']}, {ind['upper']}] ({ind['method']})")

for s, t in [(4, 2), (6, 3), (5, 2)]:
    G = build_construction(SphereConfig(d=20, n=120, eps=0.5, seed=1), s, t)
    print(f"assembly s={s} t={t}: clique number {clique_census(G, 2).omega} <= s+t = {s + t}")

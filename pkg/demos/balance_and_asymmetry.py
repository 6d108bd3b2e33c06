#!/usr/bin/env python
"""Structural checks on the two worked example families.

Builds the increasing-branching tree and the two-rail graph, and prints the
Kirchhoff balance together with the two asymmetry constants over growing
truncation radii.  The point of the comparison: on the two-rail graph with
the sqrt measure the quadratic constant stays bounded while the total (L1)
constant grows without bound, so the quadratic condition is genuinely weaker.
"""

import numpy as np

import dirlap as dl

print("=== increasing-branching tree (unit weights and measures) ===")
tree = dl.make_tree(dl.TreeSpec(depth=4))
print(f"{len(tree)} vertices, max degree {tree.max_degree}")
for radius in (2, 3, 4):
    interior = dl.ball(tree, tree.index("r"), radius).interior
    balance = dl.check_kirchhoff(tree, interior)
    quad = dl.check_asymmetry(tree, interior)
    total = dl.check_total_asymmetry(tree, interior)
    print(
        f"radius {radius}: interior {len(interior):4d}  balanced: {balance.ok}"
        f"  quadratic constant {quad}  total constant {total}"
    )

print()
print("=== two-rail graph with drift (measure m = sqrt(n)) ===")
ladder = dl.make_ladder(dl.LadderSpec(depth=40))
print(f"{len(ladder)} vertices; strength at the origin: {dl.out_strength(ladder, 0)}")
print("radius   balanced   quadratic constant   total constant")
for radius in (5, 10, 20, 40):
    interior = dl.ball(ladder, 0, radius).interior
    balance = dl.check_kirchhoff(ladder, interior)
    quad = dl.check_asymmetry(ladder, interior)
    total = dl.check_total_asymmetry(ladder, interior)
    print(f"{radius:6d}   {str(balance.ok):8s}   {quad:18.6f}   {total:14.6f}")

print()
print("per-sphere values at x_n: quadratic = (8 + 4/n)/sqrt(n), total = (4n + 4)/sqrt(n)")
for n in (2, 5, 10, 25):
    x = ladder.index(f"x{n}")
    print(
        f"n = {n:3d}: quadratic {dl.asymmetry_at(ladder, x):10.6f}"
        f"   total {dl.total_asymmetry_at(ladder, x):10.6f}"
    )

print()
print("=== cutoff sequences and the divergence criterion ===")
cut = dl.build_cutoffs(ladder, 0, [2, 4, 8, 16])
print("cutoff energy constants per radius:", np.round(cut.per_radius, 4))
rep = dl.divergence_criterion(ladder, 0, 39)
print(f"divergence partial sum up to 39 spheres: {rep.partial_sum:.3f} (grows without bound)")

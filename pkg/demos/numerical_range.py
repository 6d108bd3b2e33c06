#!/usr/bin/env python
"""Numerical range boundary of a non-symmetric Laplacian truncation.

Sweeps the boundary of the numerical range of the two-rail operator, checks
the affine sector bound |Im z| <= 1/2 + (C/8) Re z with the computed
asymmetry constant C, and (when matplotlib is importable) saves a picture of
the boundary together with the bounding sector.
"""

import numpy as np

import dirlap as dl

ladder = dl.make_ladder(dl.LadderSpec(depth=22))
ball = dl.ball(ladder, 0, 20)
op = dl.assemble(ladder, ball, "laplacian")
sample = dl.numrange_boundary(op, 360)

constant = dl.check_asymmetry(ladder, ball.vertices)
sector, ok = dl.check_sector(sample, constant)

print(f"truncation: {op.n} rows, interior {len(ball.interior)}")
print(f"leftmost real part of the numerical range: {sample.min_real:.6f}")
print(f"asymmetry constant over the ball: {constant}")
print(f"sector bound |Im z| <= 1/2 + (C/8) Re z holds: {ok}")
print(f"implied sector: vertex {sector.vertex:.4f}, half-angle {sector.half_angle:.4f} rad")

fitted = dl.fit_sector(sample, vertex=0.0)
print(f"smallest sector with vertex 0 containing the sweep: half-angle {fitted.half_angle:.4f} rad")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    pts = sample.points
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(pts.real, pts.imag, ".", markersize=3, label="numerical range boundary")
    re = np.linspace(0, pts.real.max(), 100)
    ax.plot(re, 0.5 + constant / 8 * re, "r--", label="affine sector bound")
    ax.plot(re, -(0.5 + constant / 8 * re), "r--")
    ax.axvline(sample.min_real, color="gray", lw=0.8)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.legend()
    fig.tight_layout()
    fig.savefig("numerical_range.png", dpi=120)
    print("wrote numerical_range.png")

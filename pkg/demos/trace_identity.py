"""The trace identity, checked by brute force.

The total stretch of a graph with respect to a spanning tree equals the
trace of L_G L_T^+.  The stretch side is computed combinatorially (LCA path
sums), the trace side from a dense eigensolve; the two code paths share
nothing, so agreement is meaningful.
"""
import numpy as np

from treepcg import (
    generalized_spectrum,
    generate,
    low_stretch_heuristic_tree,
    max_weight_spanning_tree,
    stretch_report,
)

for spec in ("grid:12x12:unit", "gnp:n=80,p=0.08:logw", "regular:n=60,d=4:unit"):
    g = generate(spec, seed=0)
    for name, tree in (
        ("max-weight", max_weight_spanning_tree(g)),
        ("clustering", low_stretch_heuristic_tree(g, seed=0)),
    ):
        total = stretch_report(g, tree).total
        s = generalized_spectrum(g, tree)
        print(f"{spec:28s} {name:11s} stretch={total:12.4f} "
              f"trace={s.trace:12.4f} |diff|={abs(s.trace - total):.2e}")
        # every nonzero eigenvalue is at least 1, and none exceeds the stretch
        assert s.lambda_min >= 1.0 - 1e-9
        assert s.lambda_max <= total * (1.0 + 1e-9)

print("\neigenvalues for the last instance:")
print(np.array2string(s.eigenvalues, precision=3, threshold=12))

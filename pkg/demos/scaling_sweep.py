"""Iterations grow much more slowly than the problem size.

A sweep over square grids shows observed PCG iterations staying within the
stretch-based bound while the iterations-per-edge ratio falls steadily,
which is the practical content of tree preconditioning: per-iteration cost
is O(m) + O(n), and the iteration count scales with the cube root of the
stretch rather than with m.
"""
from treepcg.cli import run_scaling

rows = run_scaling(
    [f"grid:{s}x{s}:unit" for s in range(10, 71, 10)],
    tree_method="akpw",
    epsilon=1e-8,
    seeds=[0],
)
print(f"{'m':>7} {'stretch':>11} {'st^(1/3)':>9} {'iters':>6} {'bound':>6} {'iters/m':>8}")
for r in rows:
    print(f"{r['m']:>7} {r['stretch_total']:>11.0f} {r['stretch_cbrt']:>9.2f} "
          f"{r['iterations']:>6} {r['k_bound']:>6} {r['iterations'] / r['m']:>8.4f}")

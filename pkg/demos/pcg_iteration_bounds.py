"""Solving a Laplacian system and predicting the iteration count.

Two predictors are compared against the observed PCG iterations: the bound
evaluated on the exact preconditioned spectrum (dense oracle, desk scale
only) and the bound that needs nothing but the total stretch,
k = ceil(st^(1/3)) + ceil((ln(2/eps)/2) * st^(1/3)).

The exact-spectrum bound describes exact arithmetic and the A-norm error,
while the production solver stops on a stricter residual measure and loses
a little orthogonality to rounding, so its raw iteration count can land
between the two predictors (set ``reorthogonalize=True`` to recover the
exact-arithmetic behavior).
"""
import numpy as np

from treepcg import (
    PcgConfig,
    exact_spectrum_bound,
    factor,
    generalized_spectrum,
    generate,
    low_stretch_heuristic_tree,
    pcg_solve,
    stretch_report,
    stretch_only_bound,
)

eps = 1e-8
g = generate("grid:20x20:unit", seed=1)
t = low_stretch_heuristic_tree(g, seed=1)
rep = stretch_report(g, t)
f = factor(t)

rng = np.random.default_rng(0)
b = rng.standard_normal(g.n)
b -= b.mean()

out = pcg_solve(g, f, b, PcgConfig(epsilon=eps, max_iterations=4 * g.n))
s = generalized_spectrum(g, t)
exact = exact_spectrum_bound(s, rep.total, eps)
st_only = stretch_only_bound(rep.total, eps)

print(f"20x20 grid, total stretch {rep.total:.0f}, eps {eps:g}")
print(f"observed iterations:          {out.iterations}")
print(f"bound from exact spectrum:    {exact.k_bound}  (q={exact.q}, u={exact.u:.2f})")
print(f"bound from total stretch:     {st_only.k_bound}  (q={st_only.q}, u={st_only.u:.2f})")
print(f"converged: {out.converged}, final residual measure {out.final_residual:.2e}")

"""Linear-time factorization of a tree Laplacian and pseudo-inverse solves.

Eliminating leaves first gives an LDL^T factorization of the tree Laplacian
in O(n) with strictly positive pivots for every non-root vertex.  The
pseudo-inverse action is realized as: center the right-hand side, forward and
backward substitute with the root potential fixed at zero, center the result.

Internally vertices are renumbered into BFS order (root = position 0), so the
substitution loops scan positions sequentially and parent accesses stay
within the previous tree level; this keeps the wall time linear in n instead
of degrading on cache misses for scattered vertex ids.
"""
from __future__ import annotations

import numpy as np

from .trees import SpanningTree


class TreeSolveError(ValueError):
    """Dimension mismatch in a tree solve."""


class TreeFactorization:
    """Leaf-elimination factorization of a tree Laplacian (rank n-1).

    ``elimination_order`` lists vertices children-before-parents (leaves
    first, root last is implicit as the only uneliminated vertex).  The
    arrays ``parent_pos``, ``pivot``, ``ratio``, ``inv_pivot`` are indexed by
    BFS position, with ``perm[pos]`` giving the original vertex id.
    """

    __slots__ = ("n", "root", "perm", "elimination_order", "parent_pos", "pivot", "ratio", "inv_pivot")

    def __init__(self, n, root, perm, elimination_order, parent_pos, pivot, ratio, inv_pivot):
        self.n = n
        self.root = root
        self.perm = perm
        self.elimination_order = elimination_order
        self.parent_pos = parent_pos
        self.pivot = pivot
        self.ratio = ratio
        self.inv_pivot = inv_pivot


def factor(t: SpanningTree) -> TreeFactorization:
    """Factor the tree Laplacian by repeated leaf elimination; O(n)."""
    n = t.n
    perm = t.order                      # BFS order, parents before children
    pos = np.empty(n, dtype=np.int64)
    pos[perm] = np.arange(n)
    parent_pos_np = np.empty(n, dtype=np.int64)
    parent_pos_np[0] = -1
    parent_pos_np[1:] = pos[t.parent[perm[1:]]]
    weight = t.parent_weight[perm].tolist()

    parent_pos = parent_pos_np.tolist()
    diag = [0.0] * n
    for i in range(n - 1, 0, -1):
        w = weight[i]
        diag[i] += w
        diag[parent_pos[i]] += w
    pivot = [0.0] * n
    ratio = [0.0] * n
    inv_pivot = [0.0] * n
    # eliminate positions n-1 .. 1: children always sit after their parent
    for i in range(n - 1, 0, -1):
        d = diag[i]
        w = weight[i]
        pivot[i] = d
        ratio[i] = w / d
        inv_pivot[i] = 1.0 / d
        diag[parent_pos[i]] -= w * w / d
    elimination_order = perm[:0:-1].tolist()
    return TreeFactorization(
        n=n,
        root=t.root,
        perm=perm,
        elimination_order=elimination_order,
        parent_pos=parent_pos,
        pivot=pivot,
        ratio=ratio,
        inv_pivot=inv_pivot,
    )


def pseudo_solve(f: TreeFactorization, b) -> np.ndarray:
    """Apply the tree Laplacian pseudo-inverse: x = L^+ (b - mean(b))."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (f.n,):
        raise TreeSolveError(f"vector length {b.shape} does not match n={f.n}")
    n = f.n
    y = (b[f.perm] - b.mean()).tolist()
    par = f.parent_pos
    ratio = f.ratio
    inv_pivot = f.inv_pivot
    # forward: fold each eliminated position into its parent, leaves first
    for i in range(n - 1, 0, -1):
        y[par[i]] += y[i] * ratio[i]
    # backward: root potential pinned to 0, children recovered from parents
    x = [0.0] * n
    for i in range(1, n):
        x[i] = y[i] * inv_pivot[i] + ratio[i] * x[par[i]]
    out = np.empty(n)
    out[f.perm] = x
    out -= out.mean()
    return out

"""Spanning trees, exact stretch, and tree path resistances.

The stretch of a non-tree edge e = (u, v) with weight w is
w * (sum of 1/w(f) over the tree edges f on the unique u-v tree path).
Tree path resistances come from root prefix sums and a constant-time LCA
(Euler tour + sparse table), so a full stretch report costs O(m + n log n).
"""
from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graphs import WeightedGraph, is_connected


class TreeError(ValueError):
    """Invalid tree construction or graph/tree mismatch."""


class SpanningTree:
    """Rooted spanning tree with parent links and cached path-resistance data.

    Immutable after construction.  The LCA tables are built lazily on the
    first query so that solve-only workloads at large n never pay the
    O(n log n) table cost.
    """

    __slots__ = (
        "n",
        "root",
        "parent",
        "parent_weight",
        "depth",
        "order",
        "resistance_prefix",
        "_euler",
        "_first",
        "_table",
        "_log",
    )

    def __init__(self, parent, parent_weight, root: int = 0):
        parent = np.asarray(parent, dtype=np.int64)
        parent_weight = np.asarray(parent_weight, dtype=np.float64)
        n = len(parent)
        if parent[root] != -1:
            raise TreeError(f"parent of root {root} must be -1")
        children = [[] for _ in range(n)]
        for u in range(n):
            p = parent[u]
            if u == root:
                continue
            if not (0 <= p < n):
                raise TreeError(f"vertex {u} has invalid parent {p}")
            if not (parent_weight[u] > 0.0):
                raise TreeError(f"edge ({u}, {p}) has nonpositive weight")
            children[p].append(u)

        order = np.empty(n, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)
        prefix = np.zeros(n)
        order[0] = root
        head, tail = 0, 1
        while head < tail:
            u = order[head]
            head += 1
            for c in children[u]:
                depth[c] = depth[u] + 1
                prefix[c] = prefix[u] + 1.0 / parent_weight[c]
                order[tail] = c
                tail += 1
        if tail != n:
            raise TreeError("parent links do not reach every vertex from the root")

        self.n = n
        self.root = root
        self.parent = parent
        self.parent_weight = parent_weight
        self.depth = depth
        self.order = order
        self.resistance_prefix = prefix
        self._euler = None
        self._first = None
        self._table = None
        self._log = None

    @classmethod
    def from_edges(cls, n: int, edges, root: int = 0) -> "SpanningTree":
        """Build from an undirected edge list with exactly n-1 edges."""
        if len(edges) != n - 1:
            raise TreeError(f"a spanning tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        adj = [[] for _ in range(n)]
        for u, v, w in edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        parent = np.full(n, -2, dtype=np.int64)
        parent_weight = np.zeros(n)
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w in adj[u]:
                if parent[v] == -2:
                    parent[v] = u
                    parent_weight[v] = w
                    queue.append(v)
        if np.any(parent == -2):
            raise TreeError("edge list is not connected")
        return cls(parent, parent_weight, root=root)

    @property
    def edges(self):
        """Tree edges as canonical (min, max, w) tuples, sorted."""
        out = []
        for u in range(self.n):
            if u == self.root:
                continue
            p = int(self.parent[u])
            a, b = (u, p) if u < p else (p, u)
            out.append((a, b, float(self.parent_weight[u])))
        out.sort()
        return out

    # -- LCA ---------------------------------------------------------------

    def _ensure_lca(self):
        if self._table is not None:
            return
        n = self.n
        children = [[] for _ in range(n)]
        for u in self.order[1:]:
            children[self.parent[u]].append(int(u))
        euler = []
        first = np.full(n, -1, dtype=np.int64)
        idx = [0] * n
        stack = [self.root]
        while stack:
            u = stack[-1]
            if first[u] < 0:
                first[u] = len(euler)
            euler.append(u)
            if idx[u] < len(children[u]):
                c = children[u][idx[u]]
                idx[u] += 1
                stack.append(c)
            else:
                stack.pop()
        euler = np.array(euler, dtype=np.int64)
        m = len(euler)
        depths = self.depth[euler]
        levels = max(1, m.bit_length())
        table = np.empty((levels, m), dtype=np.int64)
        table[0] = np.arange(m)
        for k in range(1, levels):
            span = 1 << k
            half = span >> 1
            width = m - span + 1
            if width <= 0:
                table[k] = table[k - 1]
                continue
            a = table[k - 1, :width]
            b = table[k - 1, half:half + width]
            table[k, :width] = np.where(depths[a] <= depths[b], a, b)
        log = np.zeros(m + 1, dtype=np.int64)
        for i in range(2, m + 1):
            log[i] = log[i >> 1] + 1
        self._euler = euler
        self._first = first
        self._table = table
        self._log = log

    def lca(self, u: int, v: int) -> int:
        self._ensure_lca()
        l, r = int(self._first[u]), int(self._first[v])
        if l > r:
            l, r = r, l
        k = int(self._log[r - l + 1])
        a = self._table[k, l]
        b = self._table[k, r - (1 << k) + 1]
        depths = self.depth
        winner = a if depths[self._euler[a]] <= depths[self._euler[b]] else b
        return int(self._euler[winner])


def lca_naive(t: SpanningTree, u: int, v: int) -> int:
    """Upward-walk LCA, used only as a verification oracle."""
    while u != v:
        if t.depth[u] >= t.depth[v]:
            u = int(t.parent[u])
        else:
            v = int(t.parent[v])
    return u


def path_resistance(t: SpanningTree, u: int, v: int) -> float:
    """Series resistance sum(1/w) along the unique u-v tree path; O(1)."""
    if u == v:
        return 0.0
    a = t.lca(u, v)
    return float(t.resistance_prefix[u] + t.resistance_prefix[v] - 2.0 * t.resistance_prefix[a])


def tree_spans(g: WeightedGraph, t: SpanningTree) -> bool:
    """True iff every tree edge exists in g with the identical weight."""
    if t.n != g.n:
        return False
    gedges = {(int(u), int(v)): w for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w)}
    for a, b, w in t.edges:
        if gedges.get((a, b)) != w:
            return False
    return True


# ---------------------------------------------------------------------------
# stretch


@dataclass
class StretchReport:
    """Per-edge stretch values (canonical edge order) and their sum."""

    per_edge: list  # (u, v, w, stretch)
    total: float

    @property
    def values(self) -> np.ndarray:
        return np.array([s for _, _, _, s in self.per_edge])

    def summary(self) -> dict:
        vals = self.values
        hi = float(vals.max())
        bins = np.logspace(0.0, np.log10(max(hi, 1.0)) + 1e-12, 11)
        bins[0] = min(bins[0], float(vals.min()))
        counts, edges = np.histogram(vals, bins=bins)
        return {
            "total": float(self.total),
            "max": hi,
            "mean": float(vals.mean()),
            "histogram": {
                "bin_edges": [float(b) for b in edges],
                "counts": [int(c) for c in counts],
            },
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u", "v", "w", "stretch"])
            for u, v, w, s in self.per_edge:
                writer.writerow([u, v, repr(w), repr(s)])

    def write_json_summary(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def stretch_report(g: WeightedGraph, t: SpanningTree) -> StretchReport:
    if not tree_spans(g, t):
        raise TreeError("tree does not span the graph with matching weights")
    per_edge = []
    total = 0.0
    for u, v, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_w.tolist()):
        s = w * path_resistance(t, u, v)
        per_edge.append((u, v, w, s))
        total += s
    return StretchReport(per_edge=per_edge, total=total)


# ---------------------------------------------------------------------------
# constructions


class _UnionFind:
    __slots__ = ("parent", "size")

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def max_weight_spanning_tree(g: WeightedGraph) -> SpanningTree:
    """Kruskal on descending weight; ties broken by canonical edge order.

    Maximizing tree weight minimizes each 1/w term available to tree paths,
    making this a cheap baseline preconditioner tree.
    """
    if not is_connected(g):
        raise TreeError("graph must be connected")
    idx = sorted(range(g.m), key=lambda i: (-g.edge_w[i], g.edge_u[i], g.edge_v[i]))
    uf = _UnionFind(g.n)
    chosen = []
    for i in idx:
        if uf.union(int(g.edge_u[i]), int(g.edge_v[i])):
            chosen.append((int(g.edge_u[i]), int(g.edge_v[i]), float(g.edge_w[i])))
            if len(chosen) == g.n - 1:
                break
    return SpanningTree.from_edges(g.n, chosen)


def low_stretch_heuristic_tree(g: WeightedGraph, seed: int) -> SpanningTree:
    """Clustering/contraction heuristic tree in the spirit of AKPW.

    Rounds of ball growing: each ball expands a BFS layer at a time while it
    at least doubles (growth factor 2), recording for every absorbed vertex
    the heaviest edge that reached it.  Balls become supervertices, parallel
    edges collapse to their heaviest representative, and the process repeats
    until one vertex remains.  No stretch guarantee is claimed; stretch is
    always measured exactly afterwards.
    """
    if not is_connected(g):
        raise TreeError("graph must be connected")
    rng = np.random.default_rng([int(seed), 0xA5])
    # current multigraph over supervertices; edges carry original edge ids
    n_cur = g.n
    cur_edges = [
        (int(u), int(v), float(w), i)
        for i, (u, v, w) in enumerate(zip(g.edge_u, g.edge_v, g.edge_w))
    ]
    chosen_ids = []
    while n_cur > 1:
        adj = [[] for _ in range(n_cur)]
        for u, v, w, eid in cur_edges:
            adj[u].append((v, w, eid))
            adj[v].append((u, w, eid))
        assigned = [-1] * n_cur
        via = [-1] * n_cur  # original edge id that pulled the vertex in
        n_clusters = 0
        for center in rng.permutation(n_cur).tolist():
            if assigned[center] != -1:
                continue
            cid = n_clusters
            n_clusters += 1
            assigned[center] = cid
            ball = [center]
            frontier = [center]
            while True:
                layer = {}
                for u in frontier:
                    for v, w, eid in adj[u]:
                        if assigned[v] != -1:
                            continue
                        best = layer.get(v)
                        if best is None or w > best[0]:
                            layer[v] = (w, eid)
                if not layer:
                    break
                if len(layer) < len(ball) and len(ball) > 1:
                    break
                frontier = []
                for v in sorted(layer):
                    assigned[v] = cid
                    via[v] = layer[v][1]
                    chosen_ids.append(layer[v][1])
                    ball.append(v)
                    frontier.append(v)
        next_edges = {}
        for u, v, w, eid in cur_edges:
            cu, cv = assigned[u], assigned[v]
            if cu == cv:
                continue
            key = (cu, cv) if cu < cv else (cv, cu)
            best = next_edges.get(key)
            if best is None or w > best[0]:
                next_edges[key] = (w, eid)
        cur_edges = [(u, v, w, eid) for (u, v), (w, eid) in sorted(next_edges.items())]
        n_cur = n_clusters
    tree_edges = [
        (int(g.edge_u[i]), int(g.edge_v[i]), float(g.edge_w[i])) for i in chosen_ids
    ]
    return SpanningTree.from_edges(g.n, tree_edges)

import json

import numpy as np
import pytest

from treepcg import (
    GraphError,
    SpanningTree,
    WeightedGraph,
    dense_laplacian,
    dense_tree_laplacian,
    exact_qul,
    generalized_spectrum,
    generate,
    low_stretch_heuristic_tree,
    max_weight_spanning_tree,
    stretch_report,
    tail_count,
)

from conftest import random_tree


def triangle_setup():
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    t = SpanningTree.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    return g, t


class TestGeneralizedSpectrum:
    def test_identity_preconditioning(self, rng):
        t = random_tree(40, rng, weights="logw")
        g = WeightedGraph(40, t.edges)
        s = generalized_spectrum(g, t)
        assert np.allclose(s.eigenvalues, 1.0, atol=1e-9)
        assert s.trace == pytest.approx(39.0, abs=1e-8)
        # a tree's stretch with respect to itself is n - 1
        assert stretch_report(g, t).total == pytest.approx(39.0)

    def test_triangle_spectrum(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        # rank-one update of the tree: nonidentity eigenvalue 1 + R(0, 2) = 3
        assert np.allclose(s.eigenvalues, [1.0, 3.0], atol=1e-12)
        assert s.trace == pytest.approx(4.0, abs=1e-12)

    def test_trace_matches_stretch(self, rng):
        g = generate("gnp:n=30,p=0.3:unit", seed=21)
        t = max_weight_spanning_tree(g)
        s = generalized_spectrum(g, t)
        total = stretch_report(g, t).total
        assert abs(s.trace - total) <= 1e-9 * total

    def test_eigenvalue_count_and_bounds(self, rng):
        for spec, seed in [("grid:7x7:logw", 0), ("gnp:n=60,p=0.1:logw", 4)]:
            g = generate(spec, seed)
            t = low_stretch_heuristic_tree(g, seed)
            s = generalized_spectrum(g, t)
            total = stretch_report(g, t).total
            assert len(s.eigenvalues) == g.n - 1
            assert s.lambda_min >= 1.0 - 1e-9
            assert s.lambda_max <= total * (1.0 + 1e-9)
            assert s.trace == pytest.approx(float(s.eigenvalues.sum()))

    def test_cap_enforced(self):
        g = generate("grid:5x5:unit", seed=0)
        t = max_weight_spanning_tree(g)
        with pytest.raises(GraphError, match="cap"):
            generalized_spectrum(g, t, cap=10)

    def test_matches_pinv_trace_oracle(self, rng):
        g = generate("regular:n=40,d=4:logw", seed=2)
        t = max_weight_spanning_tree(g)
        s = generalized_spectrum(g, t)
        oracle = np.trace(dense_laplacian(g) @ np.linalg.pinv(dense_tree_laplacian(t)))
        assert s.trace == pytest.approx(oracle, rel=1e-9)

    def test_json_and_csv(self, tmp_path):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        s.write_json(tmp_path / "s.json")
        s.write_csv(tmp_path / "s.csv")
        d = json.loads((tmp_path / "s.json").read_text())
        assert d["trace"] == pytest.approx(4.0)
        lines = (tmp_path / "s.csv").read_text().strip().splitlines()
        assert lines[0] == "eigenvalue" and len(lines) == 3


class TestTailCount:
    def test_triangle(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        assert tail_count(s, 2.0) == 1
        assert s.trace / 2.0 >= 1

    def test_above_lambda_max(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        assert tail_count(s, s.lambda_max * 1.001) == 0

    def test_tiny_threshold(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        assert tail_count(s, 1e-12) == 2  # n - 1, bound st/t is vacuous

    def test_nonpositive_threshold(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        with pytest.raises(ValueError, match="positive"):
            tail_count(s, 0.0)


class TestExactQul:
    def test_triangle_outlier_split(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        q, u, l = exact_qul(s, 4.0 ** (2.0 / 3.0))
        assert q == 1 and l == 1.0
        assert 4.0 ** (1.0 / 3.0) >= q  # the stretch-based q bound holds

    def test_u_at_or_above_lambda_max(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        q, _, _ = exact_qul(s, s.lambda_max + 1e-9)
        assert q == 0

    def test_identity_case(self, rng):
        t = random_tree(25, rng)
        g = WeightedGraph(25, t.edges)
        s = generalized_spectrum(g, t)
        q, _, _ = exact_qul(s, 1.0 + 1e-6)
        assert q == 0

    def test_lambda_min_mode(self):
        g, t = triangle_setup()
        s = generalized_spectrum(g, t)
        _, _, l = exact_qul(s, 2.0, use_lambda_min=True)
        assert l == pytest.approx(s.lambda_min)

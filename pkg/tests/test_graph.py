"""Signed graph generation, counting, sparsity scan and exchangeability probe."""

import math

import numpy as np
import pytest

from signed_measures import (
    ExponentialWeight,
    FiniteDiscrete,
    GraphConfig,
    SignedGraph,
    StableWeight,
    TwoSided,
    count_observed,
    exchangeability_probe,
    generate_graph,
    sparsity_scan,
)
from signed_measures.errors import BlockMismatch, InsufficientWindows
from signed_measures.levy import ZeroWeight
from signed_measures.rng import RngStream

DENSE_RHO = TwoSided(ExponentialWeight(1.0, 1.0), ExponentialWeight(1.0, 1.0))


class TestGenerateGraph:
    def test_zero_weight_measure(self):
        cfg = GraphConfig(ZeroWeight(), alpha=10.0, seed=1)
        multi, z = generate_graph(cfg)
        assert not multi.counts and not z.edges

    def test_all_positive_weights_no_negative_edges(self):
        rho = FiniteDiscrete(((1.0, 0.5),))
        cfg = GraphConfig(rho, alpha=30.0, seed=2)
        _, z = generate_graph(cfg)
        assert z.edges and all(s == 1 for s in z.edges.values())

    def test_sign_coherence(self):
        cfg = GraphConfig(DENSE_RHO, alpha=30.0, seed=3)
        multi, _ = generate_graph(cfg)
        assert multi.counts
        for (i, j), n in multi.counts.items():
            wi, wj = multi.nodes[i][1], multi.nodes[j][1]
            assert math.copysign(1, wi) == math.copysign(1, wj) == math.copysign(1, n)

    def test_symmetry_and_sign_rule(self):
        cfg = GraphConfig(DENSE_RHO, alpha=30.0, seed=4)
        multi, z = generate_graph(cfg)
        for (i, j), s in z.edges.items():
            assert s in (-1, 1)
            assert z.edge(i, j) == z.edge(j, i)
            n_sum = multi.counts.get((i, j), 0) + multi.counts.get((j, i), 0)
            if i == j:
                n_sum = multi.counts.get((i, i), 0)
            assert s == int(math.copysign(1, n_sum)) and n_sum != 0

    def test_link_probability_point_mass(self):
        # rho = delta_c: off-diagonal links are Bernoulli(1 - e^{-2c^2})
        c = 0.8
        cfg = GraphConfig(FiniteDiscrete(((c, 0.4),)), alpha=60.0, seed=5)
        rng = RngStream(5)
        linked = total = 0
        for _ in range(30):
            _, z = generate_graph(cfg, rng)
            n = len(z.nodes)
            off = sum(1 for (i, j) in z.edges if i != j)
            total += n * (n - 1) // 2
            linked += off
        p = 1.0 - math.exp(-2 * c * c)
        se = math.sqrt(p * (1 - p) / total)
        assert abs(linked / total - p) < 4 * se

    def test_determinism_under_seed(self):
        cfg = GraphConfig(DENSE_RHO, alpha=20.0, seed=9)
        m1, z1 = generate_graph(cfg, RngStream(9))
        m2, z2 = generate_graph(cfg, RngStream(9))
        assert z1.edges == z2.edges and m1.counts == m2.counts


class TestCountObserved:
    def test_empty(self):
        z = SignedGraph((), {})
        assert count_observed(z) == {"n_nodes": 0, "n_edges": 0}

    def test_single_self_loop(self):
        z = SignedGraph(((0.1, 1.0), (0.2, 2.0)), {(0, 0): 1})
        assert count_observed(z) == {"n_nodes": 1, "n_edges": 1}

    def test_triangle(self):
        nodes = ((0.1, 1.0), (0.2, 1.0), (0.3, 1.0))
        z = SignedGraph(nodes, {(0, 1): 1, (1, 2): 1, (0, 2): 1})
        assert count_observed(z) == {"n_nodes": 3, "n_edges": 3}

    def test_edge_bound(self):
        cfg = GraphConfig(DENSE_RHO, alpha=25.0, seed=6)
        for k in range(5):
            _, z = generate_graph(cfg, RngStream(100 + k))
            c = count_observed(z)
            assert c["n_edges"] <= c["n_nodes"] * (c["n_nodes"] + 1) // 2


class TestSparsityScan:
    def test_too_few_windows(self):
        with pytest.raises(InsufficientWindows):
            sparsity_scan(DENSE_RHO, [10.0, 20.0], reps=2)

    def test_dense_band_small_scale(self):
        result = sparsity_scan(DENSE_RHO, [20.0, 40.0, 80.0, 160.0], reps=5, seed=0)
        assert 1.7 < result["slope"] < 2.3
        assert [row["alpha"] for row in result["table"]] == [20.0, 40.0, 80.0, 160.0]

    def test_sparse_below_dense_small_scale(self):
        sparse = TwoSided(
            StableWeight(1.0, 0.5, 1.0), StableWeight(1.0, 0.5, 1.0)
        )
        result = sparsity_scan(sparse, [20.0, 40.0, 80.0], reps=3, seed=0, eps=1e-3)
        assert result["slope"] < 1.9

    def test_mean_counts_monotone(self):
        result = sparsity_scan(DENSE_RHO, [20.0, 40.0, 80.0], reps=5, seed=1)
        nodes = [row["mean_nodes"] for row in result["table"]]
        edges = [row["mean_edges"] for row in result["table"]]
        assert nodes == sorted(nodes) and edges == sorted(edges)

    def test_seed_reproducibility(self):
        a = sparsity_scan(DENSE_RHO, [20.0, 40.0, 80.0], reps=3, seed=5)
        b = sparsity_scan(DENSE_RHO, [20.0, 40.0, 80.0], reps=3, seed=5)
        assert a["slope"] == b["slope"] and a["table"] == b["table"]


class TestExchangeabilityProbe:
    def test_block_mismatch(self):
        with pytest.raises(BlockMismatch):
            exchangeability_probe(DENSE_RHO, alpha=10.0, h=3.0, reps=10)

    def test_identity_permutation(self):
        rep = exchangeability_probe(
            DENSE_RHO, alpha=10.0, h=2.0, perm="identity", reps=200, seed=1
        )
        for stat in ("pos_mass", "neg_mass", "offdiag_sum"):
            assert rep["stats"][stat]["p_value"] > 0.001

    def test_reversal_permutation(self):
        rep = exchangeability_probe(
            DENSE_RHO, alpha=10.0, h=2.0, perm="reversal", reps=200, seed=2
        )
        for stat in ("pos_mass", "neg_mass", "offdiag_sum"):
            assert rep["stats"][stat]["p_value"] > 0.001

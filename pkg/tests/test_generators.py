"""Synthetic graph generators."""
import numpy as np
import pytest

from graphsamp import (
    Community,
    Complete,
    Cycle,
    InvalidSpec,
    Path,
    RandomSensor,
    gen_graph,
)
from graphsamp.generators import community_labels
from conftest import bfs_component_count


class TestDeterministicKinds:
    def test_path3_matches_reference_edges(self):
        g = gen_graph(Path(3))
        assert g.node_count == 3
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))

    def test_cycle_closes_the_loop(self):
        g = gen_graph(Cycle(5))
        assert g.edge_count == 5
        assert (0, 4, 1.0) in g.edges

    def test_cycle_needs_three_nodes(self):
        with pytest.raises(InvalidSpec):
            gen_graph(Cycle(2))

    def test_complete_edge_count(self):
        g = gen_graph(Complete(6))
        assert g.edge_count == 15


class TestCommunity:
    def test_frozen_seed_is_connected_with_right_sizes(self):
        sizes = (4, 4, 8, 16, 32, 64)
        g = gen_graph(Community(sizes, 0.8, 0.01, seed=7))
        assert g.node_count == sum(sizes)
        assert bfs_component_count(g.node_count, g.edges) == 1
        labels = community_labels(sizes)
        assert labels[0] == 0 and labels[-1] == 5

    def test_deterministic_per_seed(self):
        spec = Community((5, 5), 0.9, 0.1, seed=3)
        assert gen_graph(spec).edges == gen_graph(spec).edges

    def test_probability_ordering_validated(self):
        with pytest.raises(InvalidSpec):
            gen_graph(Community((4, 4), 0.2, 0.5, seed=0))

    def test_unit_weights(self):
        g = gen_graph(Community((6, 6), 0.9, 0.2, seed=1))
        assert all(w == 1.0 for _, _, w in g.edges)


class TestRandomSensor:
    def test_structure_invariants(self):
        g = gen_graph(RandomSensor(64, 6, seed=7))
        assert g.node_count == 64
        weights = g.adjacency()
        assert np.array_equal(weights, weights.T)
        assert np.all(np.diag(weights) == 0)
        assert np.all(weights >= 0)
        # Every node keeps at least its k nearest neighbors.
        degrees = (weights > 0).sum(axis=1)
        assert degrees.min() >= 6

    def test_weights_bounded_by_gaussian_kernel(self):
        g = gen_graph(RandomSensor(32, 4, seed=2))
        for _, _, w in g.edges:
            assert 0 < w <= 1.0

    def test_deterministic_per_seed(self):
        assert gen_graph(RandomSensor(20, 4, seed=9)).edges == gen_graph(RandomSensor(20, 4, seed=9)).edges
        assert gen_graph(RandomSensor(20, 4, seed=9)).edges != gen_graph(RandomSensor(20, 4, seed=10)).edges

    def test_parameter_validation(self):
        with pytest.raises(InvalidSpec):
            gen_graph(RandomSensor(5, 5, seed=0))
        with pytest.raises(InvalidSpec):
            gen_graph(RandomSensor(1, 1, seed=0))

"""Shared fixtures and independent oracles used across the test suite."""
from collections import deque

import numpy as np
import pytest

from graphsamp import Graph, RandomSensor, VariationOperatorKind, gen_graph


def bfs_component_count(node_count: int, edges) -> int:
    """Independent breadth-first-search component counter (test oracle)."""
    adjacency = {i: [] for i in range(node_count)}
    for u, v, w in edges:
        if w > 0:
            adjacency[u].append(v)
            adjacency[v].append(u)
    seen = set()
    components = 0
    for start in range(node_count):
        if start in seen:
            continue
        components += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            node = queue.popleft()
            for neighbor in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
    return components


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)


@pytest.fixture
def sensor64() -> Graph:
    return gen_graph(RandomSensor(64, 6, seed=7))


@pytest.fixture
def combinatorial():
    return VariationOperatorKind.COMBINATORIAL


def random_connected_sensor(n: int, seed: int) -> Graph:
    """Random sensor graph, re-seeded until connected (small-n safeguard)."""
    for attempt in range(20):
        graph = gen_graph(RandomSensor(n, min(4, n - 1), seed=seed + 1000 * attempt))
        if bfs_component_count(graph.node_count, graph.edges) == 1:
            return graph
    raise AssertionError(f"could not build a connected sensor graph with n={n}")
